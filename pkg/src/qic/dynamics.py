"""Hamiltonian evolution of states and capsules, plus a Pauli-weight spreading profile.

Capsule operators are carried along as ``Sigma_i(t) = exp(-iHt) Sigma_i exp(iHt)``.
That is the reverse of the usual Heisenberg rule ``exp(iHt) A exp(-iHt)``; it
is the choice that keeps <Psi(t)|Sigma_i(t)|Psi(t)> = <Psi|Sigma_i|Psi> for the
Schrodinger-evolved state |Psi(t)> = exp(-iHt)|Psi>.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .config import DimensionError
from .correlation import VirtualQubit
from .info import generator_family, pure_fisher_fd
from .qubits import Z, PauliString, StateVector, embed, pauli_coefficients, pauli_sum


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    n_qubits: int
    terms: tuple = field(default=())

    def __post_init__(self):
        terms = tuple(t if isinstance(t, PauliString) else PauliString(*t) for t in self.terms)
        for t in terms:
            if t.n_qubits != self.n_qubits:
                raise DimensionError(f"term {t.letters} does not act on {self.n_qubits} qubits")
            if abs(complex(t.coeff).imag) > 0:
                raise ValueError(f"term {t.letters} has a non-real coefficient")
        object.__setattr__(self, "terms", terms)

    @cached_property
    def matrix(self) -> np.ndarray:
        return linalg.require_hermitian(pauli_sum(self.terms, self.n_qubits))

    @cached_property
    def _spectrum(self):
        return linalg.herm_eig(self.matrix)

    def propagator(self, t: float) -> np.ndarray:
        """exp(-iHt) from the cached eigendecomposition."""
        if t == 0:
            return np.eye(2**self.n_qubits, dtype=complex)
        vals, vecs = self._spectrum
        return (vecs * np.exp(-1j * vals * t)) @ linalg.dagger(vecs)

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "terms": [{"coeff": float(np.real(t.coeff)), "letters": t.letters} for t in self.terms],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HamiltonianSpec":
        n = int(data["n_qubits"])
        terms = []
        for t in data["terms"]:
            coeff = t["coeff"]
            if isinstance(coeff, (list, tuple)):
                if coeff[1] != 0:
                    raise ValueError("Hamiltonian coefficients must be real")
                coeff = coeff[0]
            terms.append(PauliString(t["letters"], float(coeff)))
        return cls(n, tuple(terms))


def _two_site(n: int, i: int, j: int, a: str, b: str) -> str:
    letters = ["I"] * n
    letters[i], letters[j] = a, b
    return "".join(letters)


def _one_site(n: int, i: int, a: str) -> str:
    letters = ["I"] * n
    letters[i] = a
    return "".join(letters)


def ising_chain(n: int, J: float = 1.0, h_x: float = 0.5) -> HamiltonianSpec:
    """Open transverse-field Ising chain H = -J sum Z_i Z_{i+1} - h_x sum X_i."""
    terms = [PauliString(_two_site(n, i, i + 1, "Z", "Z"), -J) for i in range(n - 1)]
    terms += [PauliString(_one_site(n, i, "X"), -h_x) for i in range(n)]
    return HamiltonianSpec(n, tuple(terms))


def xxz_chain(n: int, J: float = 1.0, delta: float = 0.5) -> HamiltonianSpec:
    """Open XXZ chain H = J sum (X_i X_{i+1} + Y_i Y_{i+1} + delta Z_i Z_{i+1})."""
    terms = []
    for i in range(n - 1):
        terms += [
            PauliString(_two_site(n, i, i + 1, "X", "X"), J),
            PauliString(_two_site(n, i, i + 1, "Y", "Y"), J),
            PauliString(_two_site(n, i, i + 1, "Z", "Z"), J * delta),
        ]
    return HamiltonianSpec(n, tuple(terms))


def random_two_local(n: int, seed: int) -> HamiltonianSpec:
    """All one- and two-site Pauli terms with standard-normal coefficients."""
    rng = np.random.default_rng(seed)
    terms = []
    for i in range(n):
        for a in "XYZ":
            terms.append(PauliString(_one_site(n, i, a), float(rng.standard_normal())))
    for i in range(n):
        for j in range(i + 1, n):
            for a in "XYZ":
                for b in "XYZ":
                    terms.append(PauliString(_two_site(n, i, j, a, b), float(rng.standard_normal())))
    return HamiltonianSpec(n, tuple(terms))


PRESETS = {"ising": ising_chain, "xxz": xxz_chain}


def _check_dims(n: int, h: HamiltonianSpec):
    if n != h.n_qubits:
        raise DimensionError(f"Hamiltonian acts on {h.n_qubits} qubits, state/operator on {n}")


def evolve_state(psi: StateVector, h: HamiltonianSpec, t: float) -> StateVector:
    _check_dims(psi.n_qubits, h)
    return psi.evolve(h.propagator(t))


def weight_profile_of(ops, n: int) -> np.ndarray:
    """Pauli-weight histogram of an operator triple.

    Each operator is expanded in Pauli strings; squared coefficients are
    binned by string weight and normalized to total 1 per operator.
    """
    weights = np.zeros(n + 1)
    idx = np.indices((4,) * n).reshape(n, -1)
    string_weight = np.count_nonzero(idx, axis=0)
    for op in ops:
        mass = np.abs(pauli_coefficients(op, n).reshape(-1)) ** 2
        weights += np.bincount(string_weight, weights=mass / mass.sum(), minlength=n + 1)
    return weights


@dataclass(frozen=True, eq=False)
class EvolvedQIC:
    base: VirtualQubit
    time: float
    qic: VirtualQubit
    propagator: np.ndarray = field(repr=False)

    @property
    def ops_t(self) -> tuple:
        return self.qic.sigma

    @cached_property
    def weight_profile(self) -> np.ndarray:
        return weight_profile(self)


def weight_profile(e: EvolvedQIC | VirtualQubit) -> np.ndarray:
    q = e.qic if isinstance(e, EvolvedQIC) else e
    return weight_profile_of(q.sigma, q.n_qubits)


def mean_weight(profile: np.ndarray) -> float:
    """Average Pauli weight per operator of a triple's profile."""
    return float(np.arange(profile.size) @ profile / profile.sum())


def evolve_qic(q: VirtualQubit, h: HamiltonianSpec, t: float) -> EvolvedQIC:
    q.require_valid()
    _check_dims(q.n_qubits, h)
    u = h.propagator(t)
    # U Sigma U^dagger, i.e. conjugated() with U^dagger
    evolved = q.conjugated(linalg.dagger(u), f"{q.label}(t={t:g})")
    return EvolvedQIC(q, float(t), evolved, u)


def fisher_conservation(psi_theta: StateVector, h: HamiltonianSpec, times, generator: np.ndarray | None = None) -> list[float]:
    """Fisher information about theta of exp(-iHt)|Psi(theta)> at each time.

    ``generator`` is the write generator on the full register (default
    sigma_z on qubit 0); the theta family is exp(-i delta G)|Psi(theta)>.
    """
    _check_dims(psi_theta.n_qubits, h)
    g = embed(Z, 0, psi_theta.n_qubits) if generator is None else generator
    family = generator_family(g, psi_theta.amps)
    out = []
    for t in times:
        u = h.propagator(t)
        out.append(pure_fisher_fd(lambda d: u @ family(d), 0.0))
    return out
