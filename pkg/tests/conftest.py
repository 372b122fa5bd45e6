import itertools

import numpy as np
import pytest

from qic.qubits import bell_state, ghz_state

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def bell():
    return bell_state()


@pytest.fixture
def ghz():
    return ghz_state()


def brute_reduced_density(amps, n, keep):
    """Partial trace by explicit summation over basis labels."""
    keep = sorted(keep)
    rest = [k for k in range(n) if k not in keep]
    dk = 2 ** len(keep)
    rho = np.zeros((dk, dk), dtype=complex)

    def index(bits):
        return int("".join(map(str, bits)), 2)

    for kb in itertools.product((0, 1), repeat=len(keep)):
        for kb2 in itertools.product((0, 1), repeat=len(keep)):
            total = 0j
            for rb in itertools.product((0, 1), repeat=len(rest)):
                full, full2 = [0] * n, [0] * n
                for pos, b in zip(keep, kb):
                    full[pos] = b
                for pos, b in zip(keep, kb2):
                    full2[pos] = b
                for pos, b in zip(rest, rb):
                    full[pos] = b
                    full2[pos] = b
                total += amps[index(full)] * np.conj(amps[index(full2)])
            rho[index(kb) if kb else 0, index(kb2) if kb2 else 0] = total
    return rho


def random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2
