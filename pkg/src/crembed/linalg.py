"""Small dense linear algebra: numerical rank, orthonormal bases, expm."""

from __future__ import annotations

import math

import numpy as np

from .errors import ExpConvergenceFailure

RANK_RTOL = 1e-10

# Pade(13,13) numerator coefficients and the 1-norm bound below which no
# scaling is needed for double precision (Higham 2005).
_PADE13 = (64764752532480000., 32382376266240000., 7771770303897600.,
           1187353796428800., 129060195264000., 10559470521600.,
           670442572800., 33522128640., 1323241920., 40840800., 960960.,
           16380., 182., 1.)
_THETA13 = 5.371920351148152
_MAX_SQUARINGS = 64


def numerical_rank(a, rtol: float = RANK_RTOL, atol: float = 0.0) -> int:
    """Rank by singular-value thresholding at ``max(rtol * s_max, atol)``."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > max(rtol * s[0], atol)))


def orthonormal_basis(a, rtol: float = RANK_RTOL, atol: float = 0.0) -> np.ndarray:
    """Columns spanning range(a), found by thresholded SVD."""
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=a.dtype if a.dtype.kind == "c" else float)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return u[:, :0]
    return u[:, s > max(rtol * s[0], atol)]


def nilpotency_index(a) -> int | None:
    """Smallest k <= n with a**k exactly zero, or None.

    Exact zero test: meant for matrices with integer (or otherwise exactly
    representable) entries such as adjoint matrices of catalog algebras.
    """
    a = np.asarray(a)
    n = a.shape[0]
    if not np.any(a):
        return 1 if n else 0
    p = a
    for k in range(2, n + 1):
        p = p @ a
        if not np.any(p):
            return k
    return None


def taylor_exp(a, terms: int) -> np.ndarray:
    """sum_{j<terms} a**j / j!; exact exponential when a**terms == 0."""
    a = np.asarray(a)
    out = np.eye(a.shape[0], dtype=a.dtype)
    term = np.eye(a.shape[0], dtype=a.dtype)
    for j in range(1, terms):
        term = term @ a / j
        out = out + term
    return out


def expm(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Pade(13,13) approximant.

    Matrices that are exactly nilpotent are summed as a finite Taylor series
    instead, which is exact up to rounding.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expm needs a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ExpConvergenceFailure("expm input has non-finite entries")
    if a.dtype.kind not in "fc":
        a = a.astype(float)
    n = a.shape[0]
    if n == 0:
        return a.copy()
    k = nilpotency_index(a)
    if k is not None:
        return taylor_exp(a, k)

    norm = np.linalg.norm(a, 1)
    squarings = 0
    if norm > _THETA13:
        squarings = int(math.ceil(math.log2(norm / _THETA13)))
    if squarings > _MAX_SQUARINGS:
        raise ExpConvergenceFailure(
            f"expm: 1-norm {norm:.3e} needs {squarings} squarings")
    a = a / 2.0 ** squarings

    b = _PADE13
    ident = np.eye(n, dtype=a.dtype)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    try:
        r = np.linalg.solve(v - u, v + u)
    except np.linalg.LinAlgError as exc:
        raise ExpConvergenceFailure(f"expm: singular Pade denominator ({exc})") from exc
    for _ in range(squarings):
        r = r @ r
    if not np.all(np.isfinite(r)):
        raise ExpConvergenceFailure("expm produced non-finite entries")
    return r
