"""Local write operations, quantum Fisher information and swap extraction.

Every family of states here has the form ``exp(-i theta G) |psi>`` for a
Hermitian generator ``G`` on the full register. Finite-difference
derivatives use central differences with one Richardson step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config, linalg
from .correlation import VirtualQubit
from .qubits import KET0, PAULIS, StateVector, embed

SLD_CUTOFF = 1e-10  # eigenvalue pairs with lambda_k + lambda_l below this are dropped


def axis_generator(axis) -> np.ndarray:
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,):
        raise ValueError("axis must be a 3-vector")
    if abs(np.linalg.norm(n) - 1) > 1e-12:
        raise ValueError(f"axis {axis} is not a unit vector")
    return n[0] * PAULIS[1] + n[1] * PAULIS[2] + n[2] * PAULIS[3]


@dataclass(frozen=True)
class WriteOp:
    theta: float
    axis: tuple = (0.0, 0.0, 1.0)
    site: int = 0

    def __post_init__(self):
        axis_generator(self.axis)
        object.__setattr__(self, "axis", tuple(float(a) for a in self.axis))

    @property
    def generator(self) -> np.ndarray:
        return axis_generator(self.axis)

    @property
    def matrix(self) -> np.ndarray:
        return linalg.unitary_from_hermitian(self.generator, self.theta)

    def full_generator(self, n: int) -> np.ndarray:
        return embed(self.generator, self.site, n)

    def with_theta(self, theta: float) -> "WriteOp":
        return WriteOp(theta, self.axis, self.site)


def apply_write(psi: StateVector, w: WriteOp) -> StateVector:
    return psi.evolve(embed(w.matrix, w.site, psi.n_qubits))


def generator_family(generator: np.ndarray, vec: np.ndarray):
    """Return ``f(theta) = exp(-i theta G) vec``."""
    g = np.asarray(generator, dtype=complex)
    gv = g @ vec
    if linalg.max_abs(g @ g - np.eye(g.shape[0])) <= 1e-12:
        return lambda t: np.cos(t) * vec - 1j * np.sin(t) * gv
    vals, vecs = linalg.herm_eig(g)
    coords = linalg.dagger(vecs) @ vec
    return lambda t: vecs @ (np.exp(-1j * vals * t) * coords)


def richardson_derivative(f, x: float, h: float):
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


def pure_fisher_fd(family, theta: float, h: float | None = None) -> float:
    """4(<dpsi|dpsi> - |<psi|dpsi>|^2) with a finite-difference derivative."""
    h = config.get().fd_step if h is None else h
    v = family(theta)
    dv = richardson_derivative(family, theta, h)
    return float(4 * (np.vdot(dv, dv).real - abs(np.vdot(v, dv)) ** 2))


def sld_fisher(rho: np.ndarray, drho: np.ndarray, cutoff: float = SLD_CUTOFF) -> float:
    """Mixed-state quantum Fisher information 2 sum |<k|drho|l>|^2 / (lambda_k + lambda_l)."""
    vals, vecs = np.linalg.eigh(0.5 * (rho + linalg.dagger(rho)))
    d = linalg.dagger(vecs) @ drho @ vecs
    denom = vals[:, None] + vals[None, :]
    mask = denom > cutoff
    return float(2 * np.sum(np.abs(d[mask]) ** 2 / denom[mask]))


def mixed_fisher_fd(rho_family, theta: float, h: float | None = None) -> float:
    h = config.get().fd_step if h is None else h
    return sld_fisher(rho_family(theta), richardson_derivative(rho_family, theta, h))


@dataclass(frozen=True)
class FisherReport:
    analytic: float
    finite_diff: float
    generator_expectation: float

    @property
    def agrees(self) -> bool:
        return abs(self.analytic - self.finite_diff) <= config.get().fd


def fisher_for_generator(psi: StateVector, generator: np.ndarray, theta: float = 0.0) -> FisherReport:
    """Fisher information of the family exp(-i theta G)|psi> (theta-independent)."""
    gv = generator @ psi.amps
    mean = float(np.real(np.vdot(psi.amps, gv)))
    second = float(np.real(np.vdot(gv, gv)))
    analytic = 4 * (second - mean**2)
    fd = pure_fisher_fd(generator_family(generator, psi.amps), theta)
    return FisherReport(analytic, fd, mean)


def fisher_info(psi: StateVector, w: WriteOp | None = None) -> FisherReport:
    """Fisher information of the write family W(theta)|psi>, at w.theta.

    ``psi`` is the state before the write; the closed form is
    4(1 - <n.sigma>^2) independently of theta.
    """
    w = w or WriteOp(0.0)
    return fisher_for_generator(psi, w.full_generator(psi.n_qubits), w.theta)


def swap_operator(q: VirtualQubit) -> np.ndarray:
    """(1/2) sum_mu Sigma_mu (x) sigma_mu, the swap between q and one external qubit (last)."""
    q.require_valid()
    ops = (np.eye(q.dim),) + q.sigma
    return 0.5 * sum(np.kron(s, p) for s, p in zip(ops, PAULIS))


def _split_readout(vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = vec.reshape(-1, 2)
    return m.T @ m.conj(), m @ m.conj().T  # readout (external qubit), remainder (system)


@dataclass(frozen=True)
class Extraction:
    readout: np.ndarray
    remainder: np.ndarray
    readout_fisher: float
    total_fisher: float
    remainder_fisher: float

    @property
    def residual_fisher(self) -> float:
        """Fisher information about theta not carried out by the readout qubit."""
        return self.total_fisher - self.readout_fisher

    @property
    def readout_purity(self) -> float:
        return float(np.real(np.trace(self.readout @ self.readout)))

    @property
    def readout_bloch(self) -> np.ndarray:
        return np.array([np.real(np.trace(self.readout @ p)) for p in PAULIS[1:]])


def extract(psi_theta: StateVector, q: VirtualQubit, chi0=KET0, generator: np.ndarray | None = None,
            swap: np.ndarray | None = None) -> Extraction:
    """Swap the virtual qubit ``q`` out into a fresh qubit prepared in ``chi0``.

    ``generator`` is the write generator on the full register (default
    sigma_z on qubit 0); it defines the theta family used for the Fisher
    quantities. ``swap`` may pass a prebuilt :func:`swap_operator`.
    """
    chi0 = np.asarray(chi0, dtype=complex)
    chi0 = chi0 / np.linalg.norm(chi0)
    if generator is None:
        generator = embed(PAULIS[3], 0, psi_theta.n_qubits)
    u = swap_operator(q) if swap is None else swap
    family = generator_family(generator, psi_theta.amps)

    def post(t):
        return u @ np.kron(family(t), chi0)

    readout, remainder = _split_readout(post(0.0))
    readout_fisher = mixed_fisher_fd(lambda t: _split_readout(post(t))[0], 0.0)
    remainder_fisher = mixed_fisher_fd(lambda t: _split_readout(post(t))[1], 0.0)
    total = fisher_for_generator(psi_theta, generator).analytic
    return Extraction(readout, remainder, readout_fisher, total, remainder_fisher)
