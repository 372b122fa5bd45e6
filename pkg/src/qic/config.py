"""Numerical tolerances and resource caps shared by every module.

Values are read at call time, so :func:`override` affects all downstream
checks inside its ``with`` block.
"""

from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-10  # Hermiticity / tracelessness
    recon: float = 1e-9  # reconstructions, unitarity, orthonormality
    norm: float = 1e-10  # state normalization, unit trace
    rank: float = 1e-12  # Schmidt coefficient treated as zero
    alg: float = 1e-9  # Pauli-algebra residuals, commutators
    psd: float = 1e-8  # smallest admissible eigenvalue is -psd
    pure: float = 1e-8  # purity >= 1 - pure counts as pure
    max_ent: float = 1e-9  # |<sigma_z x I>| below this admits max entanglement
    fd: float = 1e-6  # analytic vs finite-difference Fisher
    bloch: float = 1e-8  # Bloch-vector agreement for confinement checks
    residual_fisher: float = 1e-8  # information left after a QIC swap
    fd_step: float = 1e-4  # central-difference step in theta
    load_norm: float = 1e-6  # state files within this of unit norm are renormalized
    max_operator_dim: int = 2**10
    max_state_dim: int = 2**14


_current = Tolerances()


def get() -> Tolerances:
    return _current


def set_tolerances(**changes) -> Tolerances:
    """Replace selected fields of the active tolerance set; returns the previous set."""
    global _current
    previous = _current
    _current = dataclasses.replace(_current, **changes)
    return previous


@contextlib.contextmanager
def override(**changes):
    previous = set_tolerances(**changes)
    try:
        yield _current
    finally:
        set_tolerances(**dataclasses.asdict(previous))


def as_dict() -> dict:
    return dataclasses.asdict(_current)


class QICError(ValueError):
    """Base class for input/contract violations raised by this package."""


class DimensionError(QICError):
    pass


class NotHermitianError(QICError):
    pass


class RankError(QICError):
    """Raised when a construction needs Schmidt rank 2 but the state is a product."""


class VerificationError(QICError):
    pass


class LocalityError(QICError):
    def __init__(self, message: str, max_commutator: float):
        super().__init__(message)
        self.max_commutator = max_commutator
