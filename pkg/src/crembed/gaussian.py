"""Exact Gaussian rationals, ``re + i*im`` with ``re, im`` in Q."""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, numbers.Real):
        x = float(value)
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {value!r}")
        if not x.is_integer():
            raise TypeError(f"inexact float {value!r} has no canonical rational form")
        return Fraction(int(x))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _fraction(self.re))
        object.__setattr__(self, "im", _fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        """Convert ints, Fractions, integral floats, ``"p/q"`` strings,
        ``[re, im]`` pairs and complex numbers with integral parts.

        Raises TypeError for values that are not exactly rational
        (e.g. ``0.1`` given as a binary float).
        """
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError(f"expected [re, im], got {value!r}")
            return cls(_fraction(value[0]), _fraction(value[1]))
        if isinstance(value, numbers.Complex) and not isinstance(value, numbers.Real):
            z = complex(value)
            return cls(_fraction(z.real), _fraction(z.imag))
        return cls(_fraction(value), Fraction(0))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_json(self) -> list[str]:
        return [_frac_str(self.re), _frac_str(self.im)]

    @classmethod
    def from_json(cls, pair) -> "GaussianRational":
        return cls.coerce(pair)

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return _frac_str(self.re)
        if self.re == 0:
            return f"{_frac_str(self.im)}i"
        sign = "-" if self.im < 0 else "+"
        return f"({_frac_str(self.re)}{sign}{_frac_str(abs(self.im))}i)"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coerce_or_none(value):
    try:
        return GaussianRational.coerce(value)
    except (TypeError, ValueError):
        return None


ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I = GaussianRational(0, 1)
