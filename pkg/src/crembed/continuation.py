"""Analytic continuation ``lam(t) = om(-i t)`` and the flatness system it solves.

The continued coefficients satisfy

    d_a lam_b^g - d_b lam_a^g = i lam_a^m lam_b^n c_mn^g,

and residuals are reported as LHS minus RHS.  Column ``a`` of ``lam`` is
``exp(i t^1 ad_1) ... exp(i t^(a-1) ad_(a-1)) e_a``, evaluated directly at
the complex argument rather than by resumming a series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fd import FDSpec, GridSpec
from .lie_core import LieAlgebra
from .mc_engine import (R_MAX, CoefficientMatrix, _jet, as_point, check_grid, omega_values,
                        residual_from_jet, scan)
from .reports import ResidualReport, ResidualTensor, point_json

TRIANGULAR_TOL = 1e-12

__all__ = [
    "DependenceReport", "ResidualTensor", "lambda_at", "lambda_values", "flatness_residual",
    "bracket_form_residual", "check_triangular_dependence", "verify_flatness", "compare_forms",
]


def lambda_values(algebra: LieAlgebra, t) -> np.ndarray:
    return omega_values(algebra, -1j * np.asarray(t))


def lambda_at(algebra: LieAlgebra, point, r_max: float = R_MAX) -> CoefficientMatrix:
    t = as_point(point, algebra.dim, r_max)
    return CoefficientMatrix(t, lambda_values(algebra, t))


def _real_point(algebra, point, r_max):
    t = as_point(point, algebra.dim, r_max)
    if np.iscomplexobj(t):
        if np.any(t.imag):
            raise ValueError("flatness residuals are defined at real points")
        t = t.real
    return np.asarray(t, dtype=float)


def flatness_tensor(algebra: LieAlgebra, point, fd: FDSpec = FDSpec(),
                    r_max: float = R_MAX) -> tuple[ResidualTensor, list]:
    t = _real_point(algebra, point, r_max)
    values, derivs, diags = _jet(algebra, "lambda", t, fd)
    return residual_from_jet(algebra, t, values, derivs, -1j), diags


def flatness_residual(algebra: LieAlgebra, point, fd: FDSpec = FDSpec(),
                      r_max: float = R_MAX) -> ResidualTensor:
    return flatness_tensor(algebra, point, fd, r_max)[0]


def bracket_form_tensor(algebra: LieAlgebra, point, fd: FDSpec = FDSpec(),
                        r_max: float = R_MAX) -> tuple[ResidualTensor, list]:
    t = _real_point(algebra, point, r_max)
    values, derivs, diags = _jet(algebra, "lambda", t, fd)
    return _bracket_form_from_jet(algebra, t, values, derivs), diags


def _bracket_form_from_jet(algebra, t, values, derivs) -> ResidualTensor:
    d_lam = np.einsum("agb->abg", derivs) - np.einsum("bga->abg", derivs)
    half = np.einsum("ma,nb,mng->abg", values, values, algebra.c)
    bracket = half - np.einsum("abg->bag", half)
    return ResidualTensor.from_upper(t, d_lam - 0.5j * bracket)


def bracket_form_residual(algebra: LieAlgebra, point, fd: FDSpec = FDSpec(),
                          r_max: float = R_MAX) -> ResidualTensor:
    """Components of ``d Lam - (i/2) [Lam, Lam]`` in the flatness layout."""
    return bracket_form_tensor(algebra, point, fd, r_max)[0]


def verify_flatness(algebra: LieAlgebra, grid: GridSpec = GridSpec(), fd: FDSpec = FDSpec(),
                    r_max: float = R_MAX, tol: float | None = None,
                    form: str = "indexed") -> ResidualReport:
    check_grid(grid, r_max)
    fn = flatness_tensor if form == "indexed" else bracket_form_tensor
    kind = "flatness" if form == "indexed" else "bracket_form"
    return scan(kind, lambda t: fn(algebra, t, fd, r_max), grid.points(algebra.dim), grid, fd, tol)


@dataclass
class DependenceReport:
    passed: bool = True
    samples: int = 0
    trials: int = 0
    max_deviation: float = 0.0
    tolerance: float = TRIANGULAR_TOL
    witness: dict | None = None
    seed: int = 0

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {"kind": "triangular_dependence", "passed": self.passed, "samples": self.samples,
                "trials": self.trials, "max_deviation": self.max_deviation,
                "tolerance": self.tolerance, "witness": self.witness, "seed": self.seed}

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] triangular_dependence: max column deviation {self.max_deviation:.3e} "
                f"over {self.trials} trials (tol {self.tolerance:.0e})")


def check_triangular_dependence(algebra: LieAlgebra, samples: int = 50, seed: int = 0,
                                radius: float = 0.5, r_max: float = R_MAX,
                                tol: float = TRIANGULAR_TOL) -> DependenceReport:
    """Column ``a`` of ``lam`` must not move when ``t^mu``, ``mu >= a``, are resampled."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    radius = min(radius, r_max)
    rng = np.random.default_rng(seed)
    s = algebra.dim
    report = DependenceReport(samples=samples, tolerance=tol, seed=seed)
    for _ in range(samples):
        t = rng.uniform(-radius, radius, s)
        base = lambda_values(algebra, t)
        for a in range(s):
            t2 = t.copy()
            t2[a:] = rng.uniform(-radius, radius, s - a)
            moved = lambda_values(algebra, t2)
            dev = float(np.max(np.abs(moved[:, a] - base[:, a])))
            report.trials += 1
            if report.witness is None or dev > report.max_deviation:
                report.max_deviation = dev
                report.witness = {"column": a + 1, "point": point_json(t),
                                  "perturbed": point_json(t2), "deviation": dev}
    report.passed = report.max_deviation <= tol
    return report


def compare_forms(algebra: LieAlgebra, grid: GridSpec = GridSpec(), fd: FDSpec = FDSpec(),
                  r_max: float = R_MAX, tol: float = 1e-12) -> dict:
    """Max componentwise gap between the indexed and bracket forms.

    Both forms are built from one set of derivative estimates per point, so
    the gap measures only the algebra, never the FD error.
    """
    check_grid(grid, r_max)
    worst, witness, n = 0.0, None, 0
    for t in grid.points(algebra.dim):
        values, derivs, _ = _jet(algebra, "lambda", t, fd)
        indexed = residual_from_jet(algebra, t, values, derivs, -1j)
        bracket = _bracket_form_from_jet(algebra, t, values, derivs)
        gap = np.abs(indexed.values - bracket.values)
        n += 1
        m = float(gap.max()) if gap.size else 0.0
        if witness is None or m > worst:
            worst, witness = m, {"point": point_json(t)}
    return {"kind": "form_agreement", "max_difference": worst, "tolerance": tol,
            "passed": worst <= tol, "n_points": n, "witness": witness}
