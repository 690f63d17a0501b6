"""Maurer-Cartan coefficients in exponential coordinates of the second kind.

With ``g = exp(t^s xi_s) ... exp(t^1 xi_1)`` the ``dt^a`` component of the
left-invariant Maurer-Cartan form is

    Ad_{exp(-t^1 xi_1)} ... Ad_{exp(-t^(a-1) xi_(a-1))} xi_a,

so column ``a`` of the coefficient matrix is ``E_1 ... E_(a-1) e_a`` with
``E_mu = exp(-t^mu ad_mu)``.  Columns only read earlier coordinates.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import InputError, OutsideValidityRadius
from .fd import FDSpec, GridSpec, jacobian
from .lie_core import LieAlgebra
from .linalg import expm, nilpotency_index, taylor_exp
from .reports import ResidualReport, ResidualTensor

R_MAX = 1.0


@dataclass(frozen=True, eq=False)
class CoordinatePoint:
    t: np.ndarray

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.t))
        if t.ndim != 1:
            raise InputError("a coordinate point is a vector")
        if not np.all(np.isfinite(t)):
            raise InputError("coordinate point has non-finite entries")
        object.__setattr__(self, "t", t)

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.t))) if self.t.size else 0.0


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """``values[g, a]``: coefficient of ``xi_g`` in the ``dt^a`` component."""

    at: np.ndarray
    values: np.ndarray

    def column(self, a: int) -> np.ndarray:
        return self.values[:, a]


def as_point(point, dim: int, r_max: float = R_MAX) -> np.ndarray:
    p = point if isinstance(point, CoordinatePoint) else CoordinatePoint(point)
    if p.t.size != dim:
        raise InputError(f"point has {p.t.size} coordinates, algebra has dimension {dim}")
    if p.norm > r_max:
        raise OutsideValidityRadius(f"|t| = {p.norm:.3g} exceeds validity radius {r_max}")
    return p.t


@functools.lru_cache(maxsize=128)
def _ad_nilpotency(algebra: LieAlgebra) -> tuple:
    return tuple(nilpotency_index(m) for m in algebra.ad)


def exp_ad(algebra: LieAlgebra, mu: int, scalar) -> np.ndarray:
    """``exp(scalar * ad(xi_mu))``; finite Taylor sum when ``ad(xi_mu)`` is nilpotent."""
    a = scalar * algebra.ad[mu]
    k = _ad_nilpotency(algebra)[mu]
    if k is not None:
        return taylor_exp(a, k)
    return expm(a)


def omega_values(algebra: LieAlgebra, t) -> np.ndarray:
    """Coefficient matrix at ``t`` (real or complex), without radius checks."""
    t = np.asarray(t)
    s = algebra.dim
    real = algebra.is_real and not np.iscomplexobj(t)
    dtype = float if real else complex
    prod = np.eye(s, dtype=dtype)
    out = np.empty((s, s), dtype=dtype)
    for a in range(s):
        out[:, a] = prod[:, a]
        if a < s - 1:
            prod = prod @ exp_ad(algebra, a, -t[a])
    return out


def omega_at(algebra: LieAlgebra, point, r_max: float = R_MAX) -> CoefficientMatrix:
    t = as_point(point, algebra.dim, r_max)
    return CoefficientMatrix(t, omega_values(algebra, t))


def residual_from_jet(algebra: LieAlgebra, t, values, derivs, coeff) -> ResidualTensor:
    """``R[a,b,g] = d_a M[g,b] - d_b M[g,a] + coeff * sum M[m,a] M[n,b] c[m,n,g]``."""
    dterm = np.einsum("agb->abg", derivs) - np.einsum("bga->abg", derivs)
    bterm = np.einsum("ma,nb,mng->abg", values, values, algebra.c)
    return ResidualTensor.from_upper(t, dterm + coeff * bterm)


def _jet(algebra: LieAlgebra, which: str, t, fd: FDSpec):
    if fd.mode == "exact_polynomial":
        from .exact_poly import evaluate_with_derivatives
        values, derivs = evaluate_with_derivatives(algebra, which, t)
        return values, derivs, []
    if which == "omega":
        fn = functools.partial(omega_values, algebra)
    else:
        def fn(x):
            return omega_values(algebra, -1j * x)
    values = np.asarray(fn(t))
    derivs, diags = jacobian(fn, t, fd)
    return values, derivs, diags


def maurer_cartan_tensor(algebra: LieAlgebra, point, fd: FDSpec = FDSpec(),
                         r_max: float = R_MAX) -> tuple[ResidualTensor, list]:
    """Maurer-Cartan residual ``d om + [om, om]`` at one real point."""
    t = np.asarray(as_point(point, algebra.dim, r_max), dtype=float)
    values, derivs, diags = _jet(algebra, "omega", t, fd)
    return residual_from_jet(algebra, t, values, derivs, 1.0), diags


def check_grid(grid: GridSpec, r_max: float):
    if grid.half_width > r_max:
        raise OutsideValidityRadius(f"grid half-width {grid.half_width} exceeds validity radius {r_max}")


def scan(kind: str, residual_fn, points, grid: GridSpec, fd: FDSpec,
         tol: float | None = None) -> ResidualReport:
    report = ResidualReport(kind, grid=grid.to_json(), fd=fd.to_json(), tolerance=tol)
    for t in points:
        tensor, diags = residual_fn(t)
        report.update(tensor, diags)
    return report


def verify_maurer_cartan(algebra: LieAlgebra, grid: GridSpec = GridSpec(), fd: FDSpec = FDSpec(),
                         r_max: float = R_MAX, tol: float | None = None) -> ResidualReport:
    """Worst Maurer-Cartan residual over the grid.

    An s=1 algebra has no (a, b) pairs; the report is then empty with
    ``max_residual == 0`` and no witness indices.
    """
    check_grid(grid, r_max)
    return scan("maurer_cartan",
                lambda t: maurer_cartan_tensor(algebra, t, fd, r_max),
                grid.points(algebra.dim), grid, fd, tol)
