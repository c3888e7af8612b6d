"""Small dense matrix kernels: Cholesky, spectral radius, vectorized Lyapunov.

All routines operate on plain float64 numpy arrays. The supported regime is
small dense matrices (channel counts up to a few dozen), so the vectorized
Lyapunov solve, an M^2 x M^2 dense system, stays cheap; exactness is preferred
over asymptotic speed throughout.
"""

import math

import numpy as np

from .errors import IndefiniteMatrix, SingularSystem, UnstableModel

# Relative floor shared by every (semi)definiteness check: pivots or
# eigenvalues below PSD_FLOOR * trace/M count as non-positive.
PSD_FLOOR = 1e-12

# Stability margin: transition matrices with spectral radius above
# 1 - RHO_MARGIN are rejected by the Lyapunov solver.
RHO_MARGIN = 1e-9

# Symmetry tolerance, relative to the largest entry.
SYM_RTOL = 1e-12


def _as_square(a, name="matrix"):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square 2-D array, got shape {a.shape}")
    return a


def require_symmetric(a, name="matrix", rtol=SYM_RTOL):
    """Raise ValueError unless ``a`` is symmetric to within ``rtol`` of its
    largest entry."""
    a = _as_square(a, name)
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale == 0.0:
        return a
    if float(np.max(np.abs(a - a.T))) > rtol * scale:
        raise ValueError(f"{name} is not symmetric within tolerance {rtol:g}")
    return a


def symmetrize(a):
    """Exactly symmetric part (A + A^T)/2."""
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def spectral_radius(v):
    """Largest eigenvalue magnitude of a square real matrix.

    Backed by the LAPACK QR eigenvalue iteration (Hessenberg reduction plus
    shifted QR), which is accurate to roundoff for these matrix sizes; only
    the radius is exposed.
    """
    v = _as_square(v, "V")
    if v.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(v))))


def cholesky(s):
    """Lower-triangular L with L @ L.T == S for symmetric positive definite S.

    Raises
    ------
    IndefiniteMatrix
        If any pivot falls below PSD_FLOOR * trace(S)/M.
    """
    s = require_symmetric(s, "S")
    m = s.shape[0]
    pivot_floor = PSD_FLOOR * max(float(np.trace(s)), 0.0) / max(m, 1)
    low = np.zeros_like(s)
    for j in range(m):
        pivot = s[j, j] - low[j, :j] @ low[j, :j]
        if pivot < pivot_floor:
            raise IndefiniteMatrix(
                f"pivot {pivot:.6g} at column {j} below floor {pivot_floor:.6g}"
            )
        ljj = math.sqrt(pivot)
        low[j, j] = ljj
        if j + 1 < m:
            if ljj == 0.0:
                continue  # semidefinite corner: remaining column is zero
            low[j + 1 :, j] = (s[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j]) / ljj
    return low


def psd_factor(s):
    """Factor a symmetric PSD matrix as B @ B.T, tolerating zero eigenvalues.

    Eigenvalues in [-floor, 0] are clipped to zero (floor = PSD_FLOOR *
    trace/M), which covers covariances that are singular up to roundoff, e.g.
    innovation covariances of nearly deterministic processes. Used wherever a
    sampling square root of a possibly singular covariance is needed.
    """
    s = require_symmetric(s, "S")
    m = s.shape[0]
    if m == 0:
        return s.copy()
    vals, vecs = np.linalg.eigh(symmetrize(s))
    floor = PSD_FLOOR * max(float(np.trace(s)), 0.0) / m
    if float(vals.min()) < -floor:
        raise IndefiniteMatrix(
            f"eigenvalue {vals.min():.6g} below -floor {-floor:.6g}"
        )
    return vecs * np.sqrt(np.clip(vals, 0.0, None))


def kron(a, b):
    """Kronecker product of two real matrices."""
    return np.kron(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def vec(a):
    """Column-stacking vectorization: columns of ``a`` stacked top to bottom."""
    return np.asarray(a, dtype=float).flatten(order="F")


def unvec(x, rows, cols):
    """Inverse of :func:`vec`."""
    return np.asarray(x, dtype=float).reshape((rows, cols), order="F")


def solve_lyapunov(v, q):
    """Solve the discrete Lyapunov equation X = V X V^T + Q.

    The solve is vectorized: (I - V (x) V) vec(X) = vec(Q), handled by dense
    LU with partial pivoting. The output is symmetrized.

    Raises
    ------
    UnstableModel
        If the spectral radius of V is >= 1 - RHO_MARGIN.
    SingularSystem
        If the dense M^2 x M^2 solve fails.
    """
    v = _as_square(v, "V")
    q = require_symmetric(q, "Q")
    if v.shape != q.shape:
        raise ValueError(f"shape mismatch: V {v.shape} vs Q {q.shape}")
    rho = spectral_radius(v)
    if rho >= 1.0 - RHO_MARGIN:
        raise UnstableModel(f"spectral radius {rho:.12g} >= {1.0 - RHO_MARGIN}")
    m = v.shape[0]
    a = np.eye(m * m) - kron(v, v)
    try:
        x = np.linalg.solve(a, vec(q))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("vectorized Lyapunov system is singular") from exc
    return symmetrize(unvec(x, m, m))
