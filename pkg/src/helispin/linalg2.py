"""Exact-size complex 2-vector / 2x2-matrix arithmetic.

Everything here is a closed-form expression over ndarrays; no LAPACK or
iterative solver is involved anywhere. All functions broadcast over leading
axes, so a stack of shape (n, 2, 2) works the same as a single (2, 2) matrix.
"""
from __future__ import annotations

import numpy as np

from .errors import NumericalDomainError

IDENTITY2 = np.eye(2, dtype=np.complex128)


def _require_finite(a: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(a)):
        raise NumericalDomainError(f"non-finite entries in {name}")


def _as_complex(a, name: str) -> np.ndarray:
    out = np.asarray(a, dtype=np.complex128)
    _require_finite(out, name)
    return out


def matmul(a, b) -> np.ndarray:
    """Product of 2x2 matrices (or stacks of them)."""
    a = _as_complex(a, "a")
    b = _as_complex(b, "b")
    return np.einsum("...ij,...jk->...ik", a, b)


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    a = _as_complex(a, "a")
    return np.conj(np.swapaxes(a, -1, -2))


def outer(v, w) -> np.ndarray:
    """Rank-1 matrix v w-dagger (column vector times conjugated row)."""
    v = _as_complex(v, "v")
    w = _as_complex(w, "w")
    return v[..., :, None] * np.conj(w)[..., None, :]


def trace(a) -> complex | np.ndarray:
    a = _as_complex(a, "a")
    t = a[..., 0, 0] + a[..., 1, 1]
    return complex(t) if t.ndim == 0 else t


def det(a) -> complex | np.ndarray:
    a = _as_complex(a, "a")
    d = a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
    return complex(d) if d.ndim == 0 else d


def hermitize(a) -> np.ndarray:
    """(a + a-dagger)/2, the exact Hermitian part."""
    a = _as_complex(a, "a")
    return 0.5 * (a + adjoint(a))
