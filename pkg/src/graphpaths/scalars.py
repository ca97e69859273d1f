"""Exact Gaussian rationals ``a + b i`` with ``a, b`` in ``Q``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class Gaussian:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @classmethod
    def of(cls, x) -> "Gaussian":
        if isinstance(x, Gaussian):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact; pass a Gaussian")
        return cls(_frac(x))

    def __add__(self, other):
        o = Gaussian.of(other)
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-Gaussian.of(other))

    def __rsub__(self, other):
        return Gaussian.of(other) - self

    def __mul__(self, other):
        o = Gaussian.of(other)
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Gaussian.of(other)
        d = o.norm_squared()
        if d == 0:
            raise ZeroDivisionError("division by zero")
        num = self * o.conjugate()
        return Gaussian(num.re / d, num.im / d)

    def __eq__(self, other):
        try:
            o = Gaussian.of(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def norm_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return float(self.norm_squared()) ** 0.5

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{_imag(self.im)}"
        sign = "-" if self.im < 0 else "+"
        return f"({self.re}{sign}{_imag(abs(self.im))})"

    def __repr__(self):
        return f"Gaussian({self})"


def _imag(x: Fraction) -> str:
    if x == 1:
        return "i"
    if x == -1:
        return "-i"
    return f"{x}i"


ZERO = Gaussian(0)
ONE = Gaussian(1)
I = Gaussian(0, 1)
