"""Dense complex linear-algebra kernel.

Thin wrappers over numpy/LAPACK that enforce the package's conventions:
descending spectra, Hermiticity checks against the configured tolerance and
a dimension cap on Kronecker products.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from . import config
from .config import DimensionError, NotHermitianError


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def tensor(*ops) -> np.ndarray:
    """Kronecker product of matrices (or vectors), leftmost factor most significant."""
    if not ops:
        return np.ones((1, 1), dtype=complex)
    cap = config.get().max_state_dim
    shapes = [np.shape(op) for op in ops]
    rows = int(np.prod([s[0] for s in shapes]))
    cols = int(np.prod([s[1] if len(s) > 1 else 1 for s in shapes]))
    if rows > cap or cols > cap:
        raise DimensionError(f"tensor product of size {rows}x{cols} exceeds cap {cap}")
    return reduce(np.kron, [np.asarray(op, dtype=complex) for op in ops])


def hermiticity_residual(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - dagger(h)), initial=0.0))


def require_hermitian(h: np.ndarray) -> np.ndarray:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got {h.shape}")
    r = hermiticity_residual(h)
    if r > config.get().herm:
        raise NotHermitianError(f"matrix is not Hermitian (residual {r:.3e})")
    return h


def herm_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors as columns."""
    h = require_hermitian(h)
    vals, vecs = np.linalg.eigh(0.5 * (h + dagger(h)))
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order]


def unitary_from_hermitian(h, t: float) -> np.ndarray:
    """exp(-i h t) via the spectral decomposition of h."""
    vals, vecs = herm_eig(h)
    return (vecs * np.exp(-1j * vals * t)) @ dagger(vecs)


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``m = U diag(s) V^dagger`` with s descending.

    Returns V (not V^dagger) so that the columns of both factors are the
    singular vectors.
    """
    m = as_matrix(m)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return u, s, dagger(vh)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def max_abs(m) -> float:
    return float(np.max(np.abs(m), initial=0.0))


def unitarity_residual(u: np.ndarray) -> float:
    return max_abs(dagger(u) @ u - np.eye(u.shape[0]))


def orthonormal_complement(vectors: np.ndarray) -> np.ndarray:
    """Columns spanning the orthogonal complement of the columns of ``vectors``."""
    dim, k = vectors.shape
    u, _, _ = np.linalg.svd(vectors, full_matrices=True)
    return u[:, k:]
