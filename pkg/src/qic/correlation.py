"""Virtual qubits in correlation space.

A virtual qubit is any triple of traceless Hermitian operators on the full
register obeying the single-qubit Pauli algebra. Its state is read off from
expectation values, and two commuting triples form a virtual two-qubit
system whose joint state decides whether they purify each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import config, linalg
from .config import DimensionError, LocalityError, VerificationError
from .qubits import PAULIS, PauliString, StateVector, embed, pauli_sum, pauli_terms

_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_j, _i, _k] = -1.0


@dataclass(frozen=True)
class AlgebraReport:
    r_herm: float
    r_trace: float
    r_alg: float

    @property
    def passed(self) -> bool:
        tol = config.get()
        return self.r_herm <= tol.herm and self.r_trace <= tol.herm and self.r_alg <= tol.alg


@dataclass(frozen=True, eq=False)
class VirtualQubit:
    n_qubits: int
    sigma: tuple = field(repr=False)
    label: str = ""

    def __post_init__(self):
        dim = 2**self.n_qubits
        if dim > config.get().max_operator_dim:
            raise DimensionError(f"operator dimension {dim} exceeds cap {config.get().max_operator_dim}")
        if len(self.sigma) != 3:
            raise DimensionError("a virtual qubit needs exactly three operators")
        ops = tuple(linalg.as_matrix(s) for s in self.sigma)
        for s in ops:
            if s.shape != (dim, dim):
                raise DimensionError(f"operator shape {s.shape} does not match {self.n_qubits} qubits")
            s.setflags(write=False)
        object.__setattr__(self, "sigma", ops)

    @classmethod
    def physical(cls, site: int, n: int, label: str = "") -> "VirtualQubit":
        return cls(n, tuple(embed(p, site, n) for p in PAULIS[1:]), label or f"qubit {site}")

    @classmethod
    def from_pauli_strings(cls, strings, label: str = "") -> "VirtualQubit":
        """Build from three Pauli-string specs, each a letters string or a list of PauliString."""
        ops = []
        n = None
        for spec in strings:
            terms = [PauliString(spec)] if isinstance(spec, str) else list(spec)
            n = terms[0].n_qubits
            ops.append(pauli_sum(terms, n))
        return cls(n, tuple(ops), label)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def x(self) -> np.ndarray:
        return self.sigma[0]

    @property
    def y(self) -> np.ndarray:
        return self.sigma[1]

    @property
    def z(self) -> np.ndarray:
        return self.sigma[2]

    def conjugated(self, u: np.ndarray, label: str | None = None) -> "VirtualQubit":
        """The triple U^dagger Sigma_i U."""
        ud = linalg.dagger(u)
        return VirtualQubit(self.n_qubits, tuple(ud @ s @ u for s in self.sigma), label if label is not None else self.label)

    def rotated(self, rotation: np.ndarray, label: str | None = None) -> "VirtualQubit":
        """Relabel the frame: Sigma'_i = sum_j R_ij Sigma_j."""
        r = np.asarray(rotation, dtype=float)
        ops = tuple(sum(r[i, j] * self.sigma[j] for j in range(3)) for i in range(3))
        return VirtualQubit(self.n_qubits, ops, label if label is not None else self.label)

    def bloch(self, psi: StateVector) -> np.ndarray:
        return np.array([np.real(psi.expectation(s)) for s in self.sigma])

    @cached_property
    def report(self) -> AlgebraReport:
        return verify_virtual_qubit(self)

    def require_valid(self) -> "VirtualQubit":
        if not self.report.passed:
            raise VerificationError(f"{self.label or 'virtual qubit'} fails the Pauli algebra: {self.report}")
        return self

    def to_dict(self, cutoff: float = 1e-12) -> dict:
        out = {"label": self.label, "n_qubits": self.n_qubits, "operators": {}}
        for name, s in zip("xyz", self.sigma):
            out["operators"][name] = {
                "terms": [
                    {"coeff": [t.coeff.real, t.coeff.imag], "letters": t.letters}
                    for t in pauli_terms(s, self.n_qubits, cutoff)
                ]
            }
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "VirtualQubit":
        n = int(data["n_qubits"])
        ops = []
        for name in "xyz":
            spec = data["operators"][name]
            if "dense" in spec:
                ops.append(np.array([[complex(re, im) for re, im in row] for row in spec["dense"]]))
            else:
                terms = [PauliString(t["letters"], complex(*t["coeff"])) for t in spec["terms"]]
                ops.append(pauli_sum(terms, n))
        return cls(n, tuple(ops), data.get("label", ""))


def verify_virtual_qubit(v: VirtualQubit) -> AlgebraReport:
    dim = v.dim
    eye = np.eye(dim)
    r_herm = max(linalg.hermiticity_residual(s) for s in v.sigma)
    r_trace = max(abs(np.trace(s)) / dim for s in v.sigma)
    r_alg = 0.0
    for i in range(3):
        for j in range(3):
            target = (i == j) * eye + 1j * sum(_EPS[i, j, k] * v.sigma[k] for k in range(3))
            r_alg = max(r_alg, linalg.max_abs(v.sigma[i] @ v.sigma[j] - target))
    return AlgebraReport(float(r_herm), float(r_trace), float(r_alg))


@dataclass(frozen=True)
class CorrState:
    rho: np.ndarray

    def __post_init__(self):
        tol = config.get()
        rho = self.rho
        if linalg.hermiticity_residual(rho) > tol.herm:
            raise ValueError("correlation-space state is not Hermitian")
        if abs(np.trace(rho) - 1) > tol.norm:
            raise ValueError("correlation-space state does not have unit trace")
        if np.linalg.eigvalsh(rho)[0] < -tol.psd:
            raise ValueError("correlation-space state is not positive semidefinite")

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    @property
    def bloch(self) -> np.ndarray:
        """Bloch vector (single virtual qubit only)."""
        return np.array([np.real(np.trace(self.rho @ p)) for p in PAULIS[1:]])


def corr_state_single(psi: StateVector, v: VirtualQubit) -> CorrState:
    v.require_valid()
    if psi.dim != v.dim:
        raise DimensionError("state and virtual qubit act on different registers")
    r = v.bloch(psi)
    return CorrState(0.5 * (PAULIS[0] + r[0] * PAULIS[1] + r[1] * PAULIS[2] + r[2] * PAULIS[3]))


def max_commutator(a: VirtualQubit, b: VirtualQubit) -> float:
    return max(linalg.max_abs(linalg.commutator(sa, sb)) for sa in a.sigma for sb in b.sigma)


def _pair_rho(psi: StateVector, a: VirtualQubit, b: VirtualQubit) -> np.ndarray:
    v = psi.amps
    a_vecs = [v] + [s @ v for s in a.sigma]
    b_vecs = [v] + [s @ v for s in b.sigma]
    rho = np.zeros((4, 4), dtype=complex)
    for mu in range(4):
        for nu in range(4):
            corr = np.real(np.vdot(a_vecs[mu], b_vecs[nu]))
            rho += corr * np.kron(PAULIS[mu], PAULIS[nu])
    return rho / 4


def corr_state_pair(psi: StateVector, a: VirtualQubit, b: VirtualQubit) -> CorrState:
    a.require_valid()
    b.require_valid()
    comm = max_commutator(a, b)
    if comm > config.get().alg:
        raise LocalityError(f"virtual qubits do not commute (max commutator {comm:.3e})", comm)
    return CorrState(_pair_rho(psi, a, b))


@dataclass(frozen=True)
class PartnerCheck:
    algebra_ok: bool
    locality_ok: bool
    purity: float
    max_commutator: float

    @property
    def is_partner(self) -> bool:
        return self.algebra_ok and self.locality_ok and self.purity >= 1 - config.get().pure


def check_partner(psi: StateVector, a: VirtualQubit, b: VirtualQubit) -> PartnerCheck:
    comm = max_commutator(a, b)
    rho = _pair_rho(psi, a, b)
    return PartnerCheck(
        algebra_ok=a.report.passed and b.report.passed,
        locality_ok=comm <= config.get().alg,
        purity=float(np.real(np.trace(rho @ rho))),
        max_commutator=comm,
    )


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    residual: float
    rotation: np.ndarray
    orthogonality: float


def check_equivalence(a: VirtualQubit, b: VirtualQubit) -> EquivalenceReport:
    """Decide whether ``b`` is a frame rotation of ``a``.

    Each operator of ``b`` is projected (Hilbert-Schmidt) onto span(a); the
    triples are equivalent when nothing is left over and the 3x3 coefficient
    matrix is a proper rotation.
    """
    a.require_valid()
    b.require_valid()
    if a.dim != b.dim:
        raise DimensionError("virtual qubits act on different registers")
    dim = a.dim
    rot = np.array([[np.real(np.vdot(sa, sb)) / dim for sa in a.sigma] for sb in b.sigma])
    residual = 0.0
    for i, sb in enumerate(b.sigma):
        left = sb - sum(rot[i, j] * a.sigma[j] for j in range(3))
        residual = max(residual, float(np.linalg.norm(left) / np.sqrt(dim)))
    orth = linalg.max_abs(rot @ rot.T - np.eye(3))
    tol = config.get().alg
    equivalent = residual <= tol and orth <= tol and np.linalg.det(rot) > 0
    return EquivalenceReport(bool(equivalent), residual, rot, orth)
