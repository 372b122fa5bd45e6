"""N-qubit states, Pauli strings, site embedding and the first-qubit Schmidt split.

Qubit 0 is the most significant bit of the computational-basis index, so
``embed(op, 0, n) == op (x) I (x) ... (x) I``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import config, linalg
from .config import DimensionError

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)
PAULI_BY_LETTER = {"I": I2, "X": X, "Y": Y, "Z": Z}
LETTERS = "IXYZ"

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if self.n_qubits < 1:
            raise DimensionError("a state needs at least one qubit")
        if amps.size != 2**self.n_qubits:
            raise DimensionError(f"{amps.size} amplitudes do not describe {self.n_qubits} qubits")
        if amps.size > config.get().max_state_dim:
            raise DimensionError(f"state dimension {amps.size} exceeds cap {config.get().max_state_dim}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state has non-finite amplitudes")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > config.get().norm:
            raise ValueError(f"state is not normalized (norm {norm:.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps, normalize: bool = True) -> "StateVector":
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size))) if amps.size else 0
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def expectation(self, op: np.ndarray) -> complex:
        return complex(np.vdot(self.amps, op @ self.amps))

    def evolve(self, u: np.ndarray) -> "StateVector":
        out = u @ self.amps
        return StateVector(self.n_qubits, out / np.linalg.norm(out))


def product_state(*kets) -> StateVector:
    return StateVector.from_amplitudes(linalg.tensor(*[np.asarray(k).reshape(-1, 1) for k in kets]).ravel())


def bell_state() -> StateVector:
    return StateVector.from_amplitudes([1, 0, 0, 1])


def ghz_state() -> StateVector:
    """(|+++> + |--->)/sqrt(2), the GHZ state written in the sigma_x basis."""
    plus = linalg.tensor(KET_PLUS, KET_PLUS, KET_PLUS)
    minus = linalg.tensor(KET_MINUS, KET_MINUS, KET_MINUS)
    return StateVector.from_amplitudes(plus + minus)


def haar_random_state(n: int, seed: int) -> StateVector:
    if n < 1:
        raise DimensionError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return StateVector.from_amplitudes(z)


@dataclass(frozen=True)
class PauliString:
    letters: str
    coeff: complex = 1.0

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or set(letters) - set(LETTERS):
            raise ValueError(f"invalid Pauli string {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        return sum(ch != "I" for ch in self.letters)

    def matrix(self) -> np.ndarray:
        return self.coeff * linalg.tensor(*[PAULI_BY_LETTER[ch] for ch in self.letters])


def pauli_sum(terms, n: int) -> np.ndarray:
    out = np.zeros((2**n, 2**n), dtype=complex)
    for term in terms:
        if term.n_qubits != n:
            raise DimensionError(f"term {term.letters} does not act on {n} qubits")
        out += term.matrix()
    return out


def embed(op, site: int, n: int) -> np.ndarray:
    """I^(site) (x) op (x) I^(n - site - 1)."""
    if not 0 <= site < n:
        raise IndexError(f"site {site} out of range for {n} qubits")
    op = linalg.as_matrix(op)
    return linalg.tensor(np.eye(2**site), op, np.eye(2 ** (n - site - 1)))


def pauli_coefficients(op: np.ndarray, n: int) -> np.ndarray:
    """Coefficients c[P] with op = sum_P c[P] P, as an array of shape (4,)*n.

    Index order per axis is I, X, Y, Z; axis k is qubit k.
    """
    t = np.asarray(op, dtype=complex).reshape((2,) * (2 * n))
    # interleave row/column bits so each qubit owns a contiguous 2x2 block
    t = t.transpose([ax for k in range(n) for ax in (k, n + k)])
    basis = np.stack([p.T / 2 for p in PAULIS])  # Tr(P m)/2 = sum_ab P^T[a,b] m[a,b] / 2
    for k in range(n):
        t = np.tensordot(t, basis, axes=([0, 1], [1, 2]))
    return t


def pauli_terms(op: np.ndarray, n: int, cutoff: float = 1e-12) -> list[PauliString]:
    coeffs = pauli_coefficients(op, n)
    terms = []
    for idx in zip(*np.nonzero(np.abs(coeffs) > cutoff)):
        terms.append(PauliString("".join(LETTERS[i] for i in idx), complex(coeffs[idx])))
    return terms


@dataclass(frozen=True)
class SchmidtData:
    """First-qubit-vs-rest Schmidt decomposition sum_i sqrt(p_i) |phi_i>|psi_i>.

    ``first_factors`` and ``rest_factors`` hold the vectors as rows. For a
    single-qubit state the rest factor space is one-dimensional and only one
    rest vector exists.
    """

    probs: np.ndarray
    first_factors: np.ndarray
    rest_factors: np.ndarray
    alphas: np.ndarray
    rank: int
    n_qubits: int

    def overlap0(self, i: int = 0) -> float:
        """|<0|phi_i>|."""
        return float(abs(self.first_factors[i][0]))

    def reconstruct(self) -> np.ndarray:
        k = min(2, self.rest_factors.shape[0])
        return sum(
            np.sqrt(self.probs[i]) * np.kron(self.first_factors[i], self.rest_factors[i]) for i in range(k)
        )


def _unit_phase(z: complex, threshold: float) -> complex:
    return z / abs(z) if abs(z) > threshold else 1.0 + 0j


def schmidt_first_qubit(psi: StateVector) -> SchmidtData:
    tol = config.get()
    m = psi.amps.reshape(2, psi.dim // 2)
    u, s, v = linalg.svd(m)
    k = s.size
    phis = u.T.copy()
    psis = np.conj(v.T).copy()  # rows are the kets |psi_i>
    for i in range(k):
        # largest-modulus entry made real positive; near-ties go to the first entry
        mags = np.abs(phis[i])
        j = int(np.argmax(mags >= mags.max() - 1e-12))
        phase = phis[i][j] / abs(phis[i][j])
        phis[i] /= phase
        psis[i] *= phase
    if k < 2:
        # one-qubit state: complete the first-qubit basis by hand
        phis = np.vstack([phis, [-np.conj(phis[0][1]), np.conj(phis[0][0])]])
        mags = np.abs(phis[1])
        j = int(np.argmax(mags >= mags.max() - 1e-12))
        phis[1] /= phis[1][j] / abs(phis[1][j])
    probs = np.zeros(2)
    probs[:k] = s**2
    probs /= probs.sum()
    alphas = np.array([_unit_phase(phis[i][0], tol.rank) for i in range(2)])
    rank = int(np.sum(probs > tol.rank))
    return SchmidtData(probs, phis, psis, alphas, rank, psi.n_qubits)


def reduced_density(psi: StateVector, keep) -> np.ndarray:
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    n = psi.n_qubits
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"keep set {keep} out of range for {n} qubits")
    rest = [k for k in range(n) if k not in keep]
    t = psi.amps.reshape((2,) * n).transpose(keep + rest).reshape(2 ** len(keep), -1)
    return t @ t.conj().T


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    return np.array([np.real(np.trace(rho @ p)) for p in (X, Y, Z)])


def density_from_bloch(r) -> np.ndarray:
    return 0.5 * (I2 + r[0] * X + r[1] * Y + r[2] * Z)


def computational_basis_labels(n: int) -> list[str]:
    return ["".join(bits) for bits in itertools.product("01", repeat=n)]
