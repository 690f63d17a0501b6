"""Finite-dimensional complex Lie algebras given by structure constants.

Conventions: the bracket is ``[xi_a, xi_b] = sum_g c[a, b, g] xi_g`` and all
indices are 0-based in the Python API.  ``adjoint_matrix(alg, a)[g, b]`` is
``c[a, b, g]``, so ``ad(xi_a)`` acts on coefficient column vectors.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import AntisymmetryViolation, IndexOutOfRange, InputError, JacobiViolation
from .gaussian import GaussianRational
from .linalg import RANK_RTOL, orthonormal_basis

JACOBI_TOL = 1e-12


class StructureConstants:
    """Dense ``s x s x s`` antisymmetric tensor of bracket coefficients.

    Build with :meth:`from_tensor` (full tensor, antisymmetry checked) or
    :meth:`from_brackets` (only ``a < b`` entries, completed by antisymmetry).
    When every entry is exactly rational (ints, Fractions, ``"p/q"``
    strings, integral floats, :class:`GaussianRational`), the exact values
    are retained in :attr:`exact` for the polynomial oracle.
    """

    __slots__ = ("dim", "tensor", "exact")

    def __init__(self, tensor: np.ndarray, exact: Mapping | None = None):
        tensor = np.array(tensor, dtype=complex)
        if tensor.ndim != 3 or len(set(tensor.shape)) != 1 or tensor.shape[0] < 1:
            raise InputError(f"structure constants must be s x s x s with s >= 1, got {tensor.shape}")
        if not np.all(np.isfinite(tensor)):
            raise InputError("structure constants contain non-finite entries")
        s = tensor.shape[0]
        for a, b, g in itertools.product(range(s), repeat=3):
            if tensor[a, b, g] != -tensor[b, a, g]:
                raise AntisymmetryViolation((a, b, g), tensor[a, b, g], tensor[b, a, g])
        tensor.setflags(write=False)
        self.dim = s
        self.tensor = tensor
        self.exact = None if exact is None else dict(exact)

    @classmethod
    def from_tensor(cls, values) -> "StructureConstants":
        arr = np.asarray(values, dtype=object)
        if arr.ndim != 3:
            raise InputError(f"expected a rank-3 tensor, got ndim={arr.ndim}")
        exact = _exact_entries(np.ndenumerate(arr))
        numeric = np.array([[[_to_complex(x) for x in row] for row in mat] for mat in arr], dtype=complex)
        if exact is not None:
            for (a, b, g), v in exact.items():
                w = exact.get((b, a, g))
                if w is None or w != -v:
                    raise AntisymmetryViolation((a, b, g), complex(v), complex(w) if w else 0j)
        return cls(numeric, exact)

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping) -> "StructureConstants":
        """``brackets[(a, b)] = {g: value}`` with ``a < b``; the rest is completed."""
        if dim < 1:
            raise InputError("dimension must be positive")
        numeric = np.zeros((dim, dim, dim), dtype=complex)
        raw = []
        for (a, b), coeffs in brackets.items():
            if not (0 <= a < dim and 0 <= b < dim):
                raise IndexOutOfRange(f"bracket indices ({a + 1},{b + 1}) outside 1..{dim}")
            if a >= b:
                raise InputError(f"only a < b brackets may be given, got ({a + 1},{b + 1})")
            for g, v in coeffs.items():
                if not 0 <= g < dim:
                    raise IndexOutOfRange(f"coefficient index {g + 1} outside 1..{dim}")
                raw.append(((a, b, g), v))
                numeric[a, b, g] = _to_complex(v)
                numeric[b, a, g] = -numeric[a, b, g]
        exact = _exact_entries(raw)
        if exact is not None:
            exact.update({(b, a, g): -v for (a, b, g), v in list(exact.items())})
        return cls(numeric, exact)

    def scaled(self, factor) -> "StructureConstants":
        exact = None
        if self.exact is not None:
            try:
                f = GaussianRational.coerce(factor)
                exact = {k: v * f for k, v in self.exact.items() if not (v * f).is_zero()}
            except TypeError:
                exact = None
        return StructureConstants(self.tensor * factor, exact)

    def permuted(self, perm: Sequence[int]) -> "StructureConstants":
        """Relabel so that new basis vector i is old basis vector ``perm[i]``."""
        p = np.asarray(perm)
        inv = np.argsort(p)
        tensor = self.tensor[np.ix_(p, p, p)]
        exact = None
        if self.exact is not None:
            exact = {(int(inv[a]), int(inv[b]), int(inv[g])): v for (a, b, g), v in self.exact.items()}
        return StructureConstants(tensor, exact)

    def __repr__(self):
        return f"StructureConstants(dim={self.dim}, exact={self.exact is not None})"


def _to_complex(x) -> complex:
    if isinstance(x, (str, list, tuple)):
        return complex(GaussianRational.coerce(x))
    return complex(x)


def _exact_entries(items):
    exact = {}
    for idx, v in items:
        try:
            q = GaussianRational.coerce(v)
        except (TypeError, ValueError):
            return None
        if not q.is_zero():
            exact[tuple(int(i) for i in idx)] = q
    return exact


@dataclass(frozen=True, eq=False)
class AlgebraClass:
    """Tightest structural class; ``step``/``derived_length`` filled when defined."""

    kind: str
    step: int | None = None
    derived_length: int | None = None

    @property
    def is_nilpotent(self) -> bool:
        return self.kind in ("abelian", "nilpotent")

    @property
    def is_solvable(self) -> bool:
        return self.kind in ("abelian", "nilpotent", "solvable")

    def __str__(self):
        if self.kind == "nilpotent":
            return f"nilpotent({self.step})"
        if self.kind == "solvable":
            return f"solvable({self.derived_length})"
        return self.kind

    def to_json(self) -> dict:
        return {"kind": self.kind, "step": self.step, "derived_length": self.derived_length}


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    constants: StructureConstants
    labels: tuple[str, ...] | None = None
    jacobi_residual: float = 0.0
    name: str | None = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.constants.dim

    @property
    def c(self) -> np.ndarray:
        return self.constants.tensor

    @property
    def exact(self):
        return self.constants.exact

    @functools.cached_property
    def is_real(self) -> bool:
        return not np.any(self.c.imag)

    @functools.cached_property
    def scale(self) -> float:
        return float(np.max(np.abs(self.c))) if self.c.size else 0.0

    @functools.cached_property
    def ad(self) -> np.ndarray:
        """Stack of adjoint matrices, ``ad[a] = adjoint_matrix(self, a)``."""
        mats = np.transpose(self.c, (0, 2, 1)).copy()
        if self.is_real:
            mats = mats.real.copy()
        mats.setflags(write=False)
        return mats

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"xi{i + 1}"

    def bracket(self, u, v) -> np.ndarray:
        return np.einsum("a,b,abg->g", np.asarray(u), np.asarray(v), self.c)

    def permuted(self, perm: Sequence[int]) -> "LieAlgebra":
        labels = tuple(self.labels[i] for i in perm) if self.labels else None
        return LieAlgebra(self.constants.permuted(perm), labels, self.jacobi_residual, self.name)

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<LieAlgebra{tag} dim={self.dim}>"


def jacobi_tensor(c: np.ndarray) -> np.ndarray:
    """``J[a,b,g,n] = sum_m c[a,b,m] c[m,g,n] + cyclic(a,b,g)``."""
    t = np.einsum("xym,mzn->xyzn", c, c)
    return t + np.einsum("bgan->abgn", t) + np.einsum("gabn->abgn", t)


def _exact_jacobi(exact: Mapping, s: int):
    by_pair: dict = {}
    for (a, b, g), v in exact.items():
        by_pair.setdefault((a, b), {})[g] = v
    worst = None
    for a, b, g in itertools.combinations(range(s), 3):
        acc: dict = {}
        for x, y, z in ((a, b, g), (b, g, a), (g, a, b)):
            for m, v in by_pair.get((x, y), {}).items():
                for n, w in by_pair.get((m, z), {}).items():
                    acc[n] = acc.get(n, GaussianRational()) + v * w
        for n, val in acc.items():
            if not val.is_zero():
                mag = abs(complex(val))
                if worst is None or mag > worst[0]:
                    worst = (mag, (a, b, g, n))
    return worst


def build_algebra(constants: StructureConstants, labels: Sequence[str] | None = None,
                  jacobi_tol: float = JACOBI_TOL, name: str | None = None) -> LieAlgebra:
    """Validate the Jacobi identity and wrap the constants as a LieAlgebra.

    Exactly rational constants must satisfy Jacobi exactly; otherwise the
    max residual must stay below ``jacobi_tol * max|c|**2`` (the residual is
    quadratic in the constants).
    """
    s = constants.dim
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != s:
            raise InputError(f"{len(labels)} labels given for dimension {s}")
    jac = jacobi_tensor(constants.tensor)
    absj = np.abs(jac)
    residual = float(absj.max()) if absj.size else 0.0
    if constants.exact is not None:
        worst = _exact_jacobi(constants.exact, s)
        if worst is not None:
            raise JacobiViolation(worst[0], worst[1], 0.0)
    else:
        scale = float(np.max(np.abs(constants.tensor)))
        limit = jacobi_tol * scale ** 2
        if residual > limit:
            idx = np.unravel_index(int(np.argmax(absj)), absj.shape)
            raise JacobiViolation(residual, tuple(int(i) for i in idx), limit)
    return LieAlgebra(constants, labels, residual, name)


def adjoint_matrix(algebra: LieAlgebra, index: int) -> np.ndarray:
    if not 0 <= index < algebra.dim:
        raise IndexOutOfRange(f"basis index {index} outside 0..{algebra.dim - 1}")
    return algebra.ad[index].copy()


def _bracket_span(algebra: LieAlgebra, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    if u.shape[1] == 0 or v.shape[1] == 0:
        return np.zeros((algebra.dim, 0), dtype=complex)
    w = np.einsum("ap,bq,abg->gpq", u, v, algebra.c).reshape(algebra.dim, -1)
    return orthonormal_basis(w, RANK_RTOL, atol=RANK_RTOL * max(algebra.scale, 1.0))


def lower_central_series(algebra: LieAlgebra) -> list[int]:
    """Dimensions of g = g^1 > g^2 = [g, g] > ... until it stabilises."""
    g = np.eye(algebra.dim, dtype=complex)
    cur = g
    dims = [algebra.dim]
    while True:
        nxt = _bracket_span(algebra, g, cur)
        dims.append(nxt.shape[1])
        if nxt.shape[1] == 0 or nxt.shape[1] == cur.shape[1]:
            return dims
        cur = nxt


def derived_series(algebra: LieAlgebra) -> list[int]:
    cur = np.eye(algebra.dim, dtype=complex)
    dims = [algebra.dim]
    while True:
        nxt = _bracket_span(algebra, cur, cur)
        dims.append(nxt.shape[1])
        if nxt.shape[1] == 0 or nxt.shape[1] == cur.shape[1]:
            return dims
        cur = nxt


def classify(algebra: LieAlgebra) -> AlgebraClass:
    lcs = lower_central_series(algebra)
    der = derived_series(algebra)
    solvable = der[-1] == 0
    derived_length = len(der) - 1 if solvable else None
    if lcs[-1] == 0:
        step = len(lcs) - 1
        if step == 1:
            return AlgebraClass("abelian", 1, 1)
        return AlgebraClass("nilpotent", step, derived_length)
    if solvable:
        return AlgebraClass("solvable", None, derived_length)
    return AlgebraClass("general")


def is_subalgebra_prefix(algebra: LieAlgebra, ell: int) -> bool:
    """True when span{xi_0..xi_{ell-1}} is closed under the bracket."""
    return not np.any(algebra.c[:ell, :ell, ell:])


def restrict(algebra: LieAlgebra, ell: int) -> LieAlgebra:
    if not is_subalgebra_prefix(algebra, ell):
        raise InputError(f"the first {ell} basis vectors do not span a subalgebra")
    exact = None
    if algebra.exact is not None:
        exact = {k: v for k, v in algebra.exact.items() if max(k) < ell}
    sub = StructureConstants(algebra.c[:ell, :ell, :ell], exact)
    labels = algebra.labels[:ell] if algebra.labels else None
    return build_algebra(sub, labels)
