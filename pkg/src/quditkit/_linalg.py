"""Dense linear-algebra helpers shared by every module."""

import numpy as np
import scipy.linalg

from .errors import ShapeMismatch

TOL = 1e-10


def as_matrix(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d array, got shape {a.shape}")
    return a


def require_square(a):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def dag(a):
    return np.conj(np.swapaxes(a, -1, -2))


def hermitian_defect(a):
    a = require_square(a)
    return float(np.max(np.abs(a - dag(a)), initial=0.0))


def unitary_defect(a):
    a = require_square(a)
    eye = np.eye(a.shape[0])
    return float(np.max(np.abs(dag(a) @ a - eye), initial=0.0))


def is_hermitian(a, tol=TOL):
    return hermitian_defect(a) <= tol


def is_unitary(a, tol=TOL):
    return unitary_defect(a) <= tol


def expm(a):
    """Matrix exponential of a square complex matrix (scaling and squaring Pade)."""
    return scipy.linalg.expm(require_square(a))


def expm_hermitian(h, t=1.0):
    """exp(-i t h) for Hermitian h via its eigendecomposition."""
    w, v = np.linalg.eigh(require_square(h))
    return (v * np.exp(-1j * t * w)) @ dag(v)


def kron(*ops):
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def commutator(a, b):
    return a @ b - b @ a


def hs_inner(a, b):
    """Hilbert-Schmidt inner product Tr(a^dagger b)."""
    return np.vdot(a, b)
