"""Exact multivariate polynomials over Gaussian rationals.

This is the oracle for nilpotent algebras: every ``ad`` is nilpotent there,
so each factor ``exp(-t^mu ad_mu)`` is a finite Taylor sum and the
Maurer-Cartan coefficients are polynomials in ``t``.  No floating point is
used except in :meth:`Poly.evaluate` when handed float coordinates.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NotNilpotent, NotRational
from .gaussian import I, ONE, ZERO, GaussianRational
from .lie_core import LieAlgebra

MINUS_I = GaussianRational(0, -1)


def _grlex_key(exps: tuple[int, ...]):
    # graded, then lexicographic with t1 < t2 < ... (highest variable decides)
    return (sum(exps), tuple(reversed(exps)))


class Poly:
    """Sparse polynomial: ``{exponent tuple: GaussianRational}``, zeros never stored."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for exps, c in terms.items():
                c = GaussianRational.coerce(c)
                if not c.is_zero():
                    if len(exps) != nvars:
                        raise ValueError(f"monomial {exps} does not have {nvars} exponents")
                    self.terms[tuple(exps)] = c

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def var(cls, nvars: int, index: int, coeff=ONE) -> "Poly":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        """Degree of the zero polynomial is reported as -1."""
        return max((sum(e) for e in self.terms), default=-1)

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different numbers of variables")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v.is_zero():
                out.pop(e, None)
            else:
                out[e] = v
        p = Poly(self.nvars)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = GaussianRational.coerce(other)
            p = Poly(self.nvars)
            if not c.is_zero():
                p.terms = {e: v * c for e, v in self.terms.items()}
            return p
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        p = Poly(self.nvars)
        p.terms = {e: c for e, c in out.items() if not c.is_zero()}
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly.constant(self.nvars, ONE)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def diff(self, index: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                e2 = list(e)
                e2[index] = k - 1
                out[tuple(e2)] = c * k
        return Poly(self.nvars, out)

    def scale_variables(self, factors: Sequence) -> "Poly":
        """Substitute ``t_i -> factors[i] * t_i``."""
        fs = [GaussianRational.coerce(f) for f in factors]
        out = {}
        for e, c in self.terms.items():
            for f, k in zip(fs, e):
                if k:
                    c = c * f ** k
            out[e] = c
        return Poly(self.nvars, out)

    def evaluate(self, point, exact: bool | None = None):
        """Exact value at a rational point, complex value at a float point.

        ``exact=None`` picks exact arithmetic whenever every coordinate is
        exactly rational; ``exact=False`` forces complex floats.
        """
        pt = None
        if exact is not False:
            try:
                pt = [GaussianRational.coerce(x) for x in point]
            except (TypeError, ValueError):
                if exact:
                    raise
        if pt is not None:
            acc = ZERO
            for e, c in self.terms.items():
                term = c
                for x, k in zip(pt, e):
                    if k:
                        term = term * x ** k
                acc = acc + term
            return acc
        z = [complex(x) for x in point]
        acc = 0j
        for e, c in self.terms.items():
            term = complex(c)
            for x, k in zip(z, e):
                if k:
                    term *= x ** k
            acc += term
        return acc

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def to_json(self) -> list[dict]:
        return [{"monomial": {str(i + 1): k for i, k in enumerate(e) if k},
                 "coeff": c.to_json()} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, nvars: int, data: Iterable[dict]) -> "Poly":
        terms = {}
        for item in data:
            exps = [0] * nvars
            for key, k in item["monomial"].items():
                exps[int(key) - 1] = int(k)
            terms[tuple(exps)] = GaussianRational.coerce(item["coeff"])
        return cls(nvars, terms)

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"t{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in reversed(self.sorted_terms()):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.format()})"


@dataclass
class PolyMatrix:
    """Matrix of polynomials; ``entries[g][a]`` follows the coefficient-matrix layout."""

    vars: tuple[str, ...]
    entries: list[list[Poly]]

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    @classmethod
    def constant(cls, matrix, names: Sequence[str]) -> "PolyMatrix":
        n = len(names)
        return cls(tuple(names), [[Poly.constant(n, x) for x in row] for row in matrix])

    @classmethod
    def identity(cls, size: int, names: Sequence[str]) -> "PolyMatrix":
        return cls.constant([[ONE if i == j else ZERO for j in range(size)] for i in range(size)], names)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n, m = self.shape
        m2, p = other.shape
        if m != m2:
            raise ValueError("shape mismatch")
        nv = len(self.vars)
        out = []
        for i in range(n):
            row = []
            for j in range(p):
                acc = Poly.zero(nv)
                for k in range(m):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.vars, out)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.vars, [[fn(p) for p in row] for row in self.entries])

    def column(self, j: int) -> list[Poly]:
        return [row[j] for row in self.entries]

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def max_degree(self) -> int:
        return max((p.total_degree() for row in self.entries for p in row), default=-1)

    def evaluate(self, point, exact: bool | None = None):
        """Nested lists of GaussianRational (exact) or a complex ndarray."""
        if exact is None:
            try:
                point = [GaussianRational.coerce(x) for x in point]
                exact = True
            except (TypeError, ValueError):
                exact = False
        vals = [[p.evaluate(point, exact) for p in row] for row in self.entries]
        return vals if exact else np.array(vals, dtype=complex)

    def to_json(self) -> dict:
        return {"vars": list(self.vars),
                "entries": [[p.to_json() for p in row] for row in self.entries]}

    @classmethod
    def from_json(cls, data: dict) -> "PolyMatrix":
        names = tuple(data["vars"])
        return cls(names, [[Poly.from_json(len(names), p) for p in row] for row in data["entries"]])

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.vars == other.vars and self.entries == other.entries


def _mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum((a[i][k] * b[k][j] for k in range(m)), ZERO) for j in range(p)] for i in range(n)]


def _is_zero_matrix(a) -> bool:
    return all(x.is_zero() for row in a for x in row)


def exact_exp_nilpotent(matrix, scalar: Poly, names: Sequence[str] | None = None) -> PolyMatrix:
    """``exp(scalar * matrix)`` as the finite sum ``sum_{j<n} (scalar*matrix)^j / j!``.

    Raises NotNilpotent when ``matrix**n`` is not exactly zero (n = size).
    """
    m = [[GaussianRational.coerce(x) for x in row] for row in matrix]
    n = len(m)
    names = tuple(names) if names is not None else tuple(f"t{i + 1}" for i in range(scalar.nvars))
    powers = [[[ONE if i == j else ZERO for j in range(n)] for i in range(n)]]
    for _ in range(n):
        powers.append(_mat_mul(powers[-1], m))
    if not _is_zero_matrix(powers[n]):
        row, col = next((i, j) for i in range(n) for j in range(n) if not powers[n][i][j].is_zero())
        raise NotNilpotent(
            f"matrix power {n} is nonzero (entry [{row + 1},{col + 1}] = {powers[n][row][col]})",
            witness={"power": n, "entry": [row, col]})
    nv = scalar.nvars
    out = [[Poly.zero(nv) for _ in range(n)] for _ in range(n)]
    spow = Poly.constant(nv, ONE)
    for j in range(n):
        if _is_zero_matrix(powers[j]):
            break
        coeff = spow * Fraction(1, math.factorial(j))
        for r in range(n):
            for c in range(n):
                if not powers[j][r][c].is_zero():
                    out[r][c] = out[r][c] + coeff * powers[j][r][c]
        spow = spow * scalar
    return PolyMatrix(names, out)


def exact_adjoint(algebra: LieAlgebra) -> list[list[list[GaussianRational]]]:
    """``ad[a][g][b] = c[a, b, g]`` in exact arithmetic."""
    if algebra.exact is None:
        raise NotRational(
            "structure constants are not exactly rational; build the algebra from "
            "ints, Fractions or 'p/q' strings to use the exact oracle")
    s = algebra.dim
    ad = [[[ZERO] * s for _ in range(s)] for _ in range(s)]
    for (a, b, g), v in algebra.exact.items():
        ad[a][g][b] = v
    return ad


def _echelon_basis(vectors: list[list[GaussianRational]]) -> list[list[GaussianRational]]:
    basis: list[tuple[int, list]] = []
    for v in vectors:
        v = list(v)
        for pivot, b in basis:
            if not v[pivot].is_zero():
                f = v[pivot]
                v = [x - f * y for x, y in zip(v, b)]
        lead = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if lead is None:
            continue
        inv = ONE / v[lead]
        v = [x * inv for x in v]
        basis = [(p, [x - b[lead] * y for x, y in zip(b, v)]) for p, b in basis]
        basis.append((lead, v))
    return [b for _, b in basis]


def exact_lower_central_series(algebra: LieAlgebra) -> list[int]:
    ad = exact_adjoint(algebra)
    s = algebra.dim
    cur = [[ONE if i == j else ZERO for i in range(s)] for j in range(s)]
    dims = [s]
    while True:
        images = [[sum((ad[a][g][b] * v[b] for b in range(s)), ZERO) for g in range(s)]
                  for a in range(s) for v in cur]
        nxt = _echelon_basis(images)
        dims.append(len(nxt))
        if not nxt or len(nxt) == len(cur):
            return dims
        cur = nxt


def _require_nilpotent(algebra: LieAlgebra):
    ad = exact_adjoint(algebra)
    s = algebra.dim
    for a in range(s):
        m = ad[a]
        p = m
        for _ in range(s - 1):
            p = _mat_mul(p, m)
        if not _is_zero_matrix(p):
            raise NotNilpotent(
                f"ad({algebra.label(a)}) is not nilpotent: its power {s} is nonzero",
                witness={"basis_index": a, "power": s})
    dims = exact_lower_central_series(algebra)
    if dims[-1] != 0:
        raise NotNilpotent(
            f"lower central series stabilises at dimension {dims[-1]}",
            witness={"lower_central_series": dims})
    return ad


def _names(algebra: LieAlgebra):
    return tuple(f"t{i + 1}" for i in range(algebra.dim))


@functools.lru_cache(maxsize=64)
def exact_omega(algebra: LieAlgebra) -> PolyMatrix:
    """Column a is ``exp(-t^1 ad_1) ... exp(-t^(a-1) ad_(a-1)) e_a`` exactly."""
    ad = _require_nilpotent(algebra)
    s = algebra.dim
    names = _names(algebra)
    prod = PolyMatrix.identity(s, names)
    cols = []
    for a in range(s):
        cols.append(prod.column(a))
        if a < s - 1:
            prod = prod @ exact_exp_nilpotent(ad[a], Poly.var(s, a, -ONE), names)
    return PolyMatrix(names, [[cols[a][g] for a in range(s)] for g in range(s)])


@functools.lru_cache(maxsize=64)
def exact_lambda(algebra: LieAlgebra) -> PolyMatrix:
    """``exact_omega`` with every ``t^mu`` replaced by ``-i t^mu``."""
    omega = exact_omega(algebra)
    factors = [MINUS_I] * algebra.dim
    return omega.map(lambda p: p.scale_variables(factors))


def derivatives(matrix: PolyMatrix) -> list[PolyMatrix]:
    """``[d/dt^mu matrix for mu in range(nvars)]``."""
    return [matrix.map(lambda p, mu=mu: p.diff(mu)) for mu in range(len(matrix.vars))]


@dataclass
class ExactResidual:
    """Residual tensor; ``values[(a, b)][g]`` stored for ``a < b`` only."""

    dim: int
    values: dict

    def component(self, a: int, b: int, g: int) -> Poly:
        if a == b:
            return Poly.zero(self.dim)
        if a < b:
            return self.values[(a, b)][g]
        return -self.values[(b, a)][g]

    @property
    def is_identically_zero(self) -> bool:
        return all(p.is_zero() for row in self.values.values() for p in row)

    def nonzero(self) -> list[tuple[int, int, int]]:
        return [(a, b, g) for (a, b), row in sorted(self.values.items())
                for g, p in enumerate(row) if not p.is_zero()]

    def to_json(self) -> dict:
        return {"identically_zero": self.is_identically_zero,
                "nonzero_components": [[a + 1, b + 1, g + 1] for a, b, g in self.nonzero()],
                "components": [{"indices": [a + 1, b + 1, g + 1], "poly": p.to_json()}
                               for a, b, g in self.nonzero()
                               for p in [self.values[(a, b)][g]]]}


def _residual(algebra: LieAlgebra, mat: PolyMatrix, bracket_coeff: GaussianRational) -> ExactResidual:
    # R[a,b,g] = d_a M[g,b] - d_b M[g,a] + coeff * sum_{mn} M[m,a] M[n,b] c[m,n,g]
    s = algebra.dim
    d = derivatives(mat)
    by_g: dict = {}
    for (m, n, g), v in algebra.exact.items():
        by_g.setdefault(g, []).append((m, n, v))
    values = {}
    for a in range(s):
        for b in range(a + 1, s):
            row = []
            for g in range(s):
                r = d[a].entries[g][b] - d[b].entries[g][a]
                for m, n, v in by_g.get(g, ()):
                    x, y = mat.entries[m][a], mat.entries[n][b]
                    if x and y:
                        r = r + (x * y) * (bracket_coeff * v)
                row.append(r)
            values[(a, b)] = row
    return ExactResidual(s, values)


def exact_flatness_residual(algebra: LieAlgebra) -> ExactResidual:
    """``d_a lam_b^g - d_b lam_a^g - i lam_a^m lam_b^n c_mn^g`` as exact polynomials."""
    return _residual(algebra, exact_lambda(algebra), -I)


def exact_maurer_cartan_residual(algebra: LieAlgebra) -> ExactResidual:
    """``d_a om_b^g - d_b om_a^g + om_a^m om_b^n c_mn^g`` as exact polynomials."""
    return _residual(algebra, exact_omega(algebra), ONE)


@functools.lru_cache(maxsize=64)
def _jet(algebra: LieAlgebra, which: str):
    mat = exact_lambda(algebra) if which == "lambda" else exact_omega(algebra)
    return mat, derivatives(mat)


def evaluate_with_derivatives(algebra: LieAlgebra, which: str, point) -> tuple[np.ndarray, np.ndarray]:
    """Value and exact first derivatives at a float point.

    Returns ``(M, dM)`` with ``dM[mu] = d/dt^mu M``; ``which`` is "omega" or "lambda".
    """
    mat, d = _jet(algebra, which)
    return mat.evaluate(point, False), np.array([dm.evaluate(point, False) for dm in d])
