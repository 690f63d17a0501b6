"""Central-difference derivatives with Richardson extrapolation, and sample grids."""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InputError, StepTooLarge, StepTooSmall

MIN_STEP = 1e-8
MAX_STEP = 1e-2
MODES = ("finite_difference", "exact_polynomial")

_EPS = np.finfo(float).eps
# Diagnostic thresholds, relative to max(1, max|F|).
_ROUNDOFF_FLAG = 1e-10
_TRUNCATION_FLAG = 1e-4


@dataclass(frozen=True)
class FDSpec:
    step: float = 1e-4
    richardson_levels: int = 1
    mode: str = "finite_difference"

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown derivative mode {self.mode!r}; expected one of {MODES}")
        if not self.step >= MIN_STEP:
            raise StepTooSmall(f"step {self.step} below {MIN_STEP}")
        if not self.step <= MAX_STEP:
            raise StepTooLarge(f"step {self.step} above {MAX_STEP}")
        if not 0 <= self.richardson_levels <= 4:
            raise InputError("richardson_levels must be in 0..4")

    def halved(self) -> "FDSpec":
        return FDSpec(self.step / 2, self.richardson_levels, self.mode)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GridSpec:
    """Sample points in the box ``|t|_inf <= half_width``.

    ``sampling="auto"`` uses a full tensor grid when ``dim <= max_axes`` and
    ``random_samples`` uniform points otherwise.
    """

    half_width: float = 0.5
    points_per_axis: int = 5
    max_axes: int = 4
    random_samples: int = 200
    seed: int = 0
    sampling: str = "auto"

    def __post_init__(self):
        if self.sampling not in ("auto", "grid", "random"):
            raise InputError(f"unknown sampling mode {self.sampling!r}")
        if self.half_width < 0 or self.points_per_axis < 1 or self.random_samples < 1:
            raise InputError("grid sizes must be positive")

    def points(self, dim: int) -> np.ndarray:
        use_grid = self.sampling == "grid" or (self.sampling == "auto" and dim <= self.max_axes)
        if use_grid:
            axis = np.linspace(-self.half_width, self.half_width, self.points_per_axis)
            return np.array(list(itertools.product(axis, repeat=dim)), dtype=float).reshape(-1, dim)
        rng = np.random.default_rng(self.seed)
        return rng.uniform(-self.half_width, self.half_width, size=(self.random_samples, dim))

    def to_json(self) -> dict:
        return asdict(self)


def _central(func, t, mu, h):
    e = np.zeros_like(t)
    e[mu] = h
    return (func(t + e) - func(t - e)) / (2 * h)


def jacobian(func, t: np.ndarray, fd: FDSpec) -> tuple[np.ndarray, list[dict]]:
    """Derivatives ``d[mu] = dF/dt^mu`` of an array-valued ``func`` at real ``t``.

    Uses ``fd.richardson_levels`` halvings of the step, eliminating the
    h^2, h^4, ... terms of the central difference.  Returns the estimate and
    a list of StepTooSmall/StepTooLarge diagnostics (empty when healthy).
    """
    t = np.asarray(t, dtype=float)
    f0 = np.asarray(func(t))
    scale = max(1.0, float(np.max(np.abs(f0))) if f0.size else 1.0)
    out = []
    diags = []
    for mu in range(t.size):
        table = [_central(func, t, mu, fd.step / 2 ** j) for j in range(fd.richardson_levels + 1)]
        if len(table) > 1:
            h_last = fd.step / 2 ** (len(table) - 1)
            correction = float(np.max(np.abs(table[-1] - table[-2])))
            roundoff = _EPS * scale / h_last
            if roundoff > _ROUNDOFF_FLAG * scale and correction < 10 * roundoff:
                diags.append({"kind": "StepTooSmall", "direction": mu,
                              "roundoff_estimate": roundoff, "correction": correction})
            elif correction > _TRUNCATION_FLAG * scale:
                diags.append({"kind": "StepTooLarge", "direction": mu,
                              "correction": correction})
        for k in range(1, len(table)):
            factor = 4.0 ** k
            table = [(factor * table[j + 1] - table[j]) / (factor - 1) for j in range(len(table) - 1)]
        out.append(table[-1])
    return np.array(out), diags
