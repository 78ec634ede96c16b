"""Dense matrix helpers and a cyclic-Jacobi eigensolver for symmetric matrices.

Matrices are plain 2-D float64 ``numpy`` arrays (row-major). Constructors go
through :func:`as_matrix`, which rejects NaN/Inf entries, so every routine in
the package can assume finite input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = ["EigenDecomposition", "as_matrix", "mean_center", "covariance", "eigh_symmetric"]


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce ``values`` to a 2-D float64 array, rejecting non-finite entries."""
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if a.size and not np.isfinite(a).all():
        raise ValueError(f"{name} contains NaN or Inf entries")
    return a


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending; column i of ``vectors`` pairs with ``values[i]``."""

    values: np.ndarray
    vectors: np.ndarray


def mean_center(m) -> tuple[np.ndarray, np.ndarray]:
    """Subtract the per-column mean.

    Returns the centered matrix and the mean vector (length = cols).
    """
    m = as_matrix(m)
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"mean_center needs a non-empty matrix, got shape {m.shape}")
    mean = m.mean(axis=0)
    return m - mean, mean


def covariance(b) -> np.ndarray:
    """Sample covariance of a mean-centered matrix: B'B / (n - 1).

    The result is symmetrized as (C + C') / 2 to remove floating-point
    asymmetry. Requires n >= 2 rows.
    """
    b = as_matrix(b)
    n = b.shape[0]
    if n < 2:
        raise ValueError(f"covariance needs at least 2 rows, got {n}")
    c = b.T @ b / (n - 1)
    return (c + c.T) / 2.0


@njit(cache=True)
def _jacobi_sweeps(a, v, tol, max_sweeps):  # pragma: no cover - exercised via eigh_symmetric
    n = a.shape[0]
    prev_off = np.inf
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        off = math.sqrt(off)
        # Stop at the target, or when rounding prevents further progress.
        if off < tol or off >= prev_off:
            return sweep
        prev_off = off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[i, q] = s * aip + c * aiq
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - s * aqi
                    a[q, i] = s * api + c * aqi
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq
    return max_sweeps


def eigh_symmetric(c, tol: float = 1e-10, max_sweeps: int = 100) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps row-by-row over the upper triangle, rotating each off-diagonal
    entry to zero, until the off-diagonal Frobenius norm drops below ``tol``
    or ``max_sweeps`` is reached. Eigenvalues are returned in descending
    order with orthonormal eigenvectors as the columns of ``vectors``; each
    eigenvector's largest-magnitude component is made positive so the
    decomposition is deterministic.

    Raises ValueError for non-square input or asymmetry above 1e-8.
    """
    c = as_matrix(c)
    k = c.shape[0]
    if c.shape[0] != c.shape[1]:
        raise ValueError(f"eigh_symmetric needs a square matrix, got shape {c.shape}")
    if k == 0:
        raise ValueError("eigh_symmetric needs a non-empty matrix")
    asym = np.abs(c - c.T).max() if k > 1 else 0.0
    if asym > 1e-8:
        raise ValueError(f"matrix is not symmetric (max |C - C'| = {asym:.3e})")

    a = np.ascontiguousarray((c + c.T) / 2.0)
    v = np.eye(k)
    _jacobi_sweeps(a, v, float(tol), int(max_sweeps))

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = v[:, order]

    # Deterministic sign: largest-|component| entry of each column positive.
    lead = np.argmax(np.abs(vectors), axis=0)
    flip = vectors[lead, np.arange(k)] < 0.0
    vectors[:, flip] *= -1.0
    return EigenDecomposition(values=values, vectors=vectors)
