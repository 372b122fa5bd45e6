"""Quantum information capsules: construction, criteria and non-uniqueness.

Starting from the Schmidt split of the register into qubit 0 and the rest,
the partner of qubit 0 lives on span{|psi_0>, |psi_1>}. The one-parameter
unitary ``U(g) = exp(-i g Sigma_z^A Sigma~_y^B)`` commutes with the write
generator and trades entanglement between the conjugated pair (A', B');
at ``g = d/4`` the pair factorizes and A' alone carries the written
parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config, linalg
from .config import DimensionError, QICError, RankError
from .correlation import (
    AlgebraReport,
    EquivalenceReport,
    PartnerCheck,
    VirtualQubit,
    check_equivalence,
    check_partner,
    corr_state_single,
)
from .info import axis_generator, extract, generator_family, swap_operator
from .qubits import (
    I2,
    KET0,
    KET_MINUS,
    KET_PLUS,
    PAULIS,
    X,
    Y,
    Z,
    SchmidtData,
    StateVector,
    embed,
    ghz_state,
    schmidt_first_qubit,
)

THETA_GRID = np.linspace(0.0, np.pi, 32, endpoint=False)


def _require_rank2(s: SchmidtData):
    if s.rank < 2:
        raise RankError("state is a product across qubit 0 | rest; the partner qubit is undefined")


def _rest_pauli_triple(s: SchmidtData, phase: complex, extend: bool):
    """Pauli triple on the rest register acting on span{|psi_0>, |psi_1>}.

    With ``extend`` the triple is completed on the orthogonal complement by
    pairing up complement basis vectors, so that it squares to the identity
    on the whole register.
    """
    p0, p1 = s.rest_factors[0], s.rest_factors[1]
    off = phase * np.outer(p0, p1.conj())
    bx = off + off.conj().T
    by = 1j * (-off + off.conj().T)
    bz = np.outer(p0, p0.conj()) - np.outer(p1, p1.conj())
    if extend:
        comp = linalg.orthonormal_complement(np.column_stack([p0, p1]))
        for k in range(0, comp.shape[1], 2):
            ca, cb = comp[:, k], comp[:, k + 1]
            o = np.outer(ca, cb.conj())
            bx = bx + o + o.conj().T
            by = by + 1j * (-o + o.conj().T)
            bz = bz + np.outer(ca, ca.conj()) - np.outer(cb, cb.conj())
    return bx, by, bz


def partner_ops_from_schmidt(s: SchmidtData, n: int | None = None) -> VirtualQubit:
    """Partner qubit B of physical qubit 0, built from the Schmidt vectors of the rest."""
    _require_rank2(s)
    n = s.n_qubits if n is None else n
    ops = _rest_pauli_triple(s, 1.0, extend=True)
    return VirtualQubit(n, tuple(np.kron(I2, b) for b in ops), "B")


def tilde_ops(s: SchmidtData, n: int | None = None) -> VirtualQubit:
    """Partner triple with the off-diagonal phases alpha_0 alpha_1^* folded in."""
    _require_rank2(s)
    n = s.n_qubits if n is None else n
    a0, a1 = s.alphas
    ops = _rest_pauli_triple(s, a0 * np.conj(a1), extend=True)
    return VirtualQubit(n, tuple(np.kron(I2, b) for b in ops), "B~")


def disentangler(s: SchmidtData, g: float, n: int | None = None) -> np.ndarray:
    """exp(-i g Sigma_z^A Sigma~_y^B) = I + (cos g - 1)(I x P) - i sin g Sigma_z^A Sigma~_y^B.

    P projects the rest register onto span{|psi_0>, |psi_1>}; the unitary
    acts trivially on the complement.
    """
    _require_rank2(s)
    n = s.n_qubits if n is None else n
    p0, p1 = s.rest_factors[0], s.rest_factors[1]
    a0, a1 = s.alphas
    _, ty, _ = _rest_pauli_triple(s, a0 * np.conj(a1), extend=False)
    proj = np.outer(p0, p0.conj()) + np.outer(p1, p1.conj())
    dim = 2**n
    return np.eye(dim) + (np.cos(g) - 1) * np.kron(I2, proj) - 1j * np.sin(g) * np.kron(Z, ty)


@dataclass(frozen=True)
class DisentanglerParams:
    a: float
    b: float
    c: float
    d: float
    p0: float
    overlap: float  # |<0|phi_0>|
    g: float | None = None
    U: np.ndarray | None = field(default=None, repr=False)

    def purity(self, g) -> np.ndarray:
        """Purity of B' along the family: (1 + a + (1 - a) cos(4g - d)) / 2."""
        return 0.5 * (1 + self.a + (1 - self.a) * np.cos(4 * np.asarray(g) - self.d))

    def expectations(self, g: float) -> np.ndarray:
        """Closed-form <Sigma_i^(B')> for i = x, y, z."""
        p0, q = self.p0, self.overlap
        x = (2 * q**2 - 1) * np.sin(2 * g)
        z = (2 * p0 - 1) * np.cos(2 * g) - 4 * np.sqrt(p0 * (1 - p0)) * q * np.sqrt(max(0.0, 1 - q**2)) * np.sin(2 * g)
        return np.array([x, 0.0, z])

    @property
    def qic_angle(self) -> float:
        return self.d / 4

    @property
    def max_entangled_angle(self) -> float:
        return (self.d + np.pi) / 4


def purity_curve_params(s: SchmidtData) -> DisentanglerParams:
    _require_rank2(s)
    p0 = float(s.probs[0])
    q = s.overlap0(0)
    x = (2 * p0 - 1) ** 2
    a = 0.5 * (1 + x * (2 * q**2 - 1) ** 2)
    b = x - a
    c = -4 * (2 * p0 - 1) * np.sqrt(p0 * (1 - p0)) * q * np.sqrt(max(0.0, 1 - q**2))
    if 1 - a <= config.get().rank:
        d = 0.0
    else:
        # two-argument angle: cos d = b/(1-a), sin d = c/(1-a)
        d = float(np.arctan2(c, b))
        if d <= -np.pi:
            d += 2 * np.pi
    return DisentanglerParams(a, b, float(c), d, p0, q)


@dataclass(frozen=True)
class PartnerPair:
    qubit_a: VirtualQubit
    qubit_b: VirtualQubit
    params: DisentanglerParams
    entanglement_purity: float

    def check(self, psi: StateVector) -> PartnerCheck:
        return check_partner(psi, self.qubit_a, self.qubit_b)


def _partner_pair(psi: StateVector, s: SchmidtData, g: float) -> PartnerPair:
    base = purity_curve_params(s)
    u = disentangler(s, g)
    params = DisentanglerParams(base.a, base.b, base.c, base.d, base.p0, base.overlap, g, u)
    a_prime = VirtualQubit.physical(0, s.n_qubits, "A'").conjugated(u)
    b_prime = tilde_ops(s).conjugated(u, "B'")
    return PartnerPair(a_prime, b_prime, params, corr_state_single(psi, b_prime).purity)


def build_partner_family(psi_theta: StateVector, g: float) -> PartnerPair:
    """Partner pair (A', B') at angle g for a (written) state."""
    s = schmidt_first_qubit(psi_theta)
    _require_rank2(s)
    return _partner_pair(psi_theta, s, g)


@dataclass(frozen=True)
class NotPossible:
    """No maximally entangled partner pair exists; ``min_purity`` is the floor a."""

    min_purity: float
    sigma_z_expectation: float


def max_entangled_partner(psi: StateVector) -> PartnerPair | NotPossible:
    s = schmidt_first_qubit(psi)
    _require_rank2(s)
    mean_z = float(np.real(psi.expectation(embed(Z, 0, psi.n_qubits))))
    params = purity_curve_params(s)
    if abs(mean_z) > config.get().max_ent:
        return NotPossible(params.a, mean_z)
    return _partner_pair(psi, s, params.max_entangled_angle)


@dataclass(frozen=True)
class QICConstruction:
    """A QIC together with the data that produced it.

    ``disentangler`` is U with U|psi> = |phi_full>|rest> and
    ``qic.sigma[i] = U^dagger (frame[i] x I) U``. ``phi`` is the capsule
    state in its own frame, so the written capsule is exp(-i theta sigma_z)|phi>.
    """

    qic: VirtualQubit
    disentangler: np.ndarray
    frame: tuple
    phi: np.ndarray
    rest: np.ndarray
    schmidt: SchmidtData
    params: DisentanglerParams | None
    generator: np.ndarray
    partner: VirtualQubit | None = None

    @property
    def n_qubits(self) -> int:
        return self.qic.n_qubits


def construct_qic(psi: StateVector, write_axis=(0.0, 0.0, 1.0)) -> QICConstruction:
    n = psi.n_qubits
    gen1 = axis_generator(write_axis)
    _, rot = linalg.herm_eig(gen1)  # rot^dagger (n.sigma) rot = sigma_z
    rot_full = embed(rot, 0, n)
    psi_z = StateVector(n, linalg.dagger(rot_full) @ psi.amps)
    s = schmidt_first_qubit(psi_z)
    if s.rank < 2:
        u_z = np.eye(psi.dim, dtype=complex)
        params = None
    else:
        params = purity_curve_params(s)
        u_z = disentangler(s, params.qic_angle)
        params = DisentanglerParams(params.a, params.b, params.c, params.d, params.p0, params.overlap,
                                    params.qic_angle, u_z)
    out = schmidt_first_qubit(StateVector.from_amplitudes(u_z @ psi_z.amps))
    phi, rest = out.first_factors[0], out.rest_factors[0]
    u = rot_full @ u_z @ linalg.dagger(rot_full)
    frame = tuple(rot @ p @ linalg.dagger(rot) for p in PAULIS[1:])
    qic = VirtualQubit(n, tuple(embed(f, 0, n) for f in frame), "QIC").conjugated(u)
    partner = None
    if params is not None:
        rot_dag = linalg.dagger(rot_full)
        partner = tilde_ops(s).conjugated(u_z, "QIC partner").conjugated(rot_dag)
    return QICConstruction(qic, u, frame, phi, rest, s, params, embed(gen1, 0, n), partner)


def find_qic(psi: StateVector, write_axis=(0.0, 0.0, 1.0)) -> VirtualQubit:
    return construct_qic(psi, write_axis).qic


@dataclass(frozen=True)
class QICCriteria:
    algebra: AlgebraReport
    generator_residual: float
    min_purity: float
    max_bloch_deviation: float
    residual_fisher: float
    remainder_fisher: float

    @property
    def algebra_ok(self) -> bool:
        return self.algebra.passed

    @property
    def generator_ok(self) -> bool:
        return self.generator_residual <= config.get().alg

    @property
    def confined(self) -> bool:
        tol = config.get()
        return self.min_purity >= 1 - tol.pure and self.max_bloch_deviation <= tol.bloch

    @property
    def nothing_left(self) -> bool:
        tol = config.get().residual_fisher
        return abs(self.residual_fisher) <= tol and self.remainder_fisher <= tol

    @property
    def passed(self) -> bool:
        return self.algebra_ok and self.generator_ok and self.confined and self.nothing_left

    def as_dict(self) -> dict:
        return {
            "algebra_ok": self.algebra_ok,
            "generator_ok": self.generator_ok,
            "confined": self.confined,
            "nothing_left": self.nothing_left,
            "passed": self.passed,
            "r_herm": self.algebra.r_herm,
            "r_trace": self.algebra.r_trace,
            "r_alg": self.algebra.r_alg,
            "generator_residual": self.generator_residual,
            "min_purity": self.min_purity,
            "max_bloch_deviation": self.max_bloch_deviation,
            "residual_fisher": self.residual_fisher,
            "remainder_fisher": self.remainder_fisher,
        }


def rotate_z(r: np.ndarray, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([c * r[0] - s * r[1], s * r[0] + c * r[1], r[2]])


def bloch_of_ket(phi: np.ndarray) -> np.ndarray:
    return np.array([np.real(np.vdot(phi, p @ phi)) for p in PAULIS[1:]])


def check_qic(psi: StateVector, q: VirtualQubit, generator: np.ndarray | None = None,
              thetas=THETA_GRID, chi0=KET0, fisher_thetas=None, phi: np.ndarray | None = None) -> QICCriteria:
    """Evaluate the four QIC criteria for ``q`` against the family exp(-i theta G)|psi>.

    (a) Pauli algebra; (b) q_z equals the write generator; (c) for every theta
    the capsule state is pure and equals exp(-i theta sigma_z)|phi>; (d) a
    swap into an external qubit leaves no Fisher information behind.
    """
    if psi.dim != q.dim:
        raise DimensionError("state and virtual qubit act on different registers")
    if generator is None:
        generator = embed(Z, 0, psi.n_qubits)
    algebra = q.report
    gen_res = linalg.max_abs(q.z - generator)
    family = generator_family(generator, psi.amps)
    r0 = q.bloch(psi) if phi is None else bloch_of_ket(phi)
    min_purity, max_dev = np.inf, 0.0
    for t in thetas:
        r = np.array([np.real(np.vdot(v := family(t), s @ v)) for s in q.sigma])
        min_purity = min(min_purity, 0.5 * (1 + r @ r))
        max_dev = max(max_dev, float(np.max(np.abs(r - rotate_z(r0, 2 * t)))))
    if not algebra.passed:
        return QICCriteria(algebra, gen_res, float(min_purity), max_dev, np.nan, np.nan)
    swap = swap_operator(q)
    fisher_thetas = np.asarray(thetas)[::8] if fisher_thetas is None else fisher_thetas
    residual, remainder = 0.0, 0.0
    for t in fisher_thetas:
        ex = extract(StateVector.from_amplitudes(family(t)), q, chi0, generator, swap=swap)
        if abs(ex.residual_fisher) >= abs(residual):
            residual = ex.residual_fisher
        remainder = max(remainder, ex.remainder_fisher)
    return QICCriteria(algebra, gen_res, float(min_purity), max_dev, float(residual), float(remainder))


@dataclass(frozen=True)
class InequivWitness:
    involution: np.ndarray
    alt_qic: VirtualQubit
    equivalence: EquivalenceReport


def alternate_qic(psi: StateVector, base: QICConstruction | None = None,
                  involution: np.ndarray | None = None, write_axis=(0.0, 0.0, 1.0)) -> InequivWitness:
    """A second QIC, inequivalent to ``base``, dressed by an involution O on the rest.

    O must be Hermitian, square to the identity, differ from the identity and
    fix the rest factor |psi> of U|Psi> = |phi>|psi>. The default is
    O = 2|psi><psi| - I.
    """
    n = psi.n_qubits
    if n < 2:
        raise DimensionError("an alternate QIC needs at least two qubits")
    base = construct_qic(psi, write_axis) if base is None else base
    rest = base.rest
    k = rest.size
    if involution is None:
        involution = 2 * np.outer(rest, rest.conj()) - np.eye(k)
    o = linalg.as_matrix(involution)
    tol = config.get()
    if o.shape != (k, k):
        raise DimensionError(f"involution must act on {n - 1} qubits")
    if linalg.hermiticity_residual(o) > tol.herm:
        raise QICError("involution is not Hermitian")
    if linalg.max_abs(o @ o - np.eye(k)) > tol.alg:
        raise QICError("involution does not square to the identity")
    if np.linalg.norm(o - np.eye(k), 2) <= 1:
        raise QICError("involution is the identity")
    if np.linalg.norm(o @ rest - rest) > tol.recon:
        raise QICError("involution does not fix the rest factor")
    u = base.disentangler
    fx, fy, fz = base.frame
    ops = (np.kron(fx, o), np.kron(fy, o), np.kron(fz, np.eye(k)))
    alt = VirtualQubit(n, ops, "QIC (alternate)").conjugated(u)
    return InequivWitness(o, alt, check_equivalence(base.qic, alt))


@dataclass(frozen=True)
class GHZFixture:
    state: StateVector
    explicit_U: np.ndarray
    qic1: VirtualQubit
    qic2: VirtualQubit
    construction: QICConstruction


def ghz_fixture() -> GHZFixture:
    """The three-qubit GHZ example with its explicit disentangler and two QICs."""
    psi = ghz_state()
    # exact dyadic entries keep the conjugated operators bit-exact
    p_plus = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)
    p_minus = 0.5 * np.array([[1, -1], [-1, 1]], dtype=complex)
    u = linalg.tensor(I2, p_plus, I2) + linalg.tensor(Z, p_minus, I2)
    qic1 = VirtualQubit.from_pauli_strings(["XXI", "YXI", "ZII"], "GHZ QIC 1")
    qic2 = VirtualQubit.from_pauli_strings(["XIX", "YIX", "ZII"], "GHZ QIC 2")
    rest = (linalg.tensor(KET_PLUS, KET_PLUS) + linalg.tensor(KET_MINUS, KET_MINUS)) / np.sqrt(2)
    s = schmidt_first_qubit(psi)
    construction = QICConstruction(qic1, u, (X, Y, Z), KET_PLUS.copy(), rest, s, None, embed(Z, 0, 3))
    return GHZFixture(psi, u, qic1, qic2, construction)
