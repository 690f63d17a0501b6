"""Residual tensors, report envelopes and canonical JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gaussian import GaussianRational


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays, complex numbers and report objects."""
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, GaussianRational):
        return obj.to_json()
    return obj


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent; stable under re-serialization."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


def point_json(t) -> list:
    t = np.asarray(t)
    if np.iscomplexobj(t) and np.any(t.imag):
        return [[float(z.real), float(z.imag)] for z in t]
    return [float(x) for x in np.real(t)]


@dataclass(frozen=True, eq=False)
class ResidualTensor:
    """``values[a, b, g]``, antisymmetric in ``(a, b)`` by construction.

    Only the ``a < b`` entries of the computed tensor are kept; the lower
    triangle is their exact negation and the diagonal is zero.
    """

    at: np.ndarray
    values: np.ndarray

    @classmethod
    def from_upper(cls, at, full: np.ndarray) -> "ResidualTensor":
        s = full.shape[0]
        out = np.zeros_like(full)
        iu = np.triu_indices(s, 1)
        out[iu] = full[iu]
        out[(iu[1], iu[0])] = -full[iu]
        return cls(np.asarray(at), out)

    @property
    def dim(self) -> int:
        return self.values.shape[-1]

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def argmax(self) -> tuple[int, int, int] | None:
        """Worst component with ``a < b``; None when the tensor is empty or zero."""
        if self.values.size == 0:
            return None
        mag = np.abs(self.values)
        s = mag.shape[0]
        mag = mag * np.triu(np.ones((s, s)), 1)[:, :, None]
        if not np.any(mag):
            return None
        return tuple(int(i) for i in np.unravel_index(int(np.argmax(mag)), mag.shape))

    def to_json(self) -> dict:
        s = self.values.shape[0]
        comps = [{"indices": [a + 1, b + 1, g + 1], "value": complex(self.values[a, b, g])}
                 for a in range(s) for b in range(a + 1, s) for g in range(self.values.shape[2])]
        return {"at": point_json(self.at), "layout": "R[a,b,g] = LHS - RHS, a<b stored",
                "components": comps, "max_abs": self.max_abs()}


@dataclass
class ResidualReport:
    """Worst residual over a set of sample points."""

    kind: str
    max_residual: float = 0.0
    witness: dict | None = None
    grid: dict = field(default_factory=dict)
    fd: dict = field(default_factory=dict)
    n_points: int = 0
    diagnostics: list = field(default_factory=list)
    tolerance: float | None = None

    @property
    def passed(self) -> bool | None:
        if self.tolerance is None:
            return None
        return self.max_residual <= self.tolerance

    def update(self, tensor: ResidualTensor, diags=()):
        self.n_points += 1
        for d in diags:
            if len(self.diagnostics) < 20:
                self.diagnostics.append(dict(d, point=point_json(tensor.at)))
        m = tensor.max_abs()
        if self.witness is None or m > self.max_residual:
            idx = tensor.argmax()
            self.max_residual = max(m, self.max_residual)
            self.witness = {"point": point_json(tensor.at),
                            "indices": [i + 1 for i in idx] if idx else None}

    def to_json(self) -> dict:
        return {"kind": self.kind, "max_residual": self.max_residual, "witness": self.witness,
                "grid": self.grid, "fd": self.fd, "n_points": self.n_points,
                "diagnostics": self.diagnostics, "tolerance": self.tolerance,
                "passed": self.passed}

    def summary(self) -> str:
        w = self.witness or {}
        status = {True: "PASS", False: "FAIL", None: "----"}[self.passed]
        tol = f" (tol {self.tolerance:.1e})" if self.tolerance is not None else ""
        return (f"[{status}] {self.kind}: max residual {self.max_residual:.3e}{tol} over "
                f"{self.n_points} points; worst at indices {w.get('indices')} t={w.get('point')}")
