"""Exact Gaussian-rational scalars.

A :class:`GaussianRational` is stored as three integers ``(x, y, d)`` meaning
``(x + y i) / d`` with ``d > 0`` and ``gcd(x, y, d) == 1``.  The triple is
canonical, so equality and hashing are plain tuple operations.  Rationals
are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

__all__ = ["GaussianRational", "Fraction", "as_fraction", "parse_rational", "format_rational", "I", "ONE", "ZERO"]

Number = Union[int, Fraction, "GaussianRational"]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and exact numeric strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"-1/4"``, ``"0.25"`` or ``"1e-3"`` exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid rational literal {text!r}") from exc


def format_rational(q) -> str:
    """Canonical ``"num/den"`` text (the denominator is always written)."""
    q = as_fraction(q)
    return f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("x", "y", "d")

    def __init__(self, re=0, im=0):
        re = as_fraction(re)
        im = as_fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, x: int, y: int, d: int) -> None:
        g = gcd(x, y, d)
        if g != 1:
            x //= g
            y //= g
            d //= g
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "d", d)

    @classmethod
    def from_parts(cls, x: int, y: int, d: int = 1) -> "GaussianRational":
        """Build ``(x + y i) / d`` from integers; ``d`` may be negative."""
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            x, y, d = -x, -y, -d
        z = cls.__new__(cls)
        z._set(x, y, d)
        return z

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls(value[0], value[1])
        return cls(value)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @property
    def re(self) -> Fraction:
        return Fraction(self.x, self.d)

    @property
    def im(self) -> Fraction:
        return Fraction(self.y, self.d)

    def key(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.d)

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.x == other.x and self.y == other.y and self.d == other.d
        if isinstance(other, (int, Rational)):
            return self.y == 0 and Fraction(self.x, self.d) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.d))

    def __lt__(self, other: "GaussianRational") -> bool:
        return self.sort_key() < other.sort_key()

    def __bool__(self):
        return self.x != 0 or self.y != 0

    def __neg__(self):
        return GaussianRational.from_parts(-self.x, -self.y, self.d)

    def __add__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        return GaussianRational.from_parts(self.x * o.d + o.x * self.d, self.y * o.d + o.y * self.d, self.d * o.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        return GaussianRational.from_parts(self.x * o.d - o.x * self.d, self.y * o.d - o.y * self.d, self.d * o.d)

    def __rsub__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        return GaussianRational.from_parts(
            self.x * o.x - self.y * o.y, self.x * o.y + self.y * o.x, self.d * o.d
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        n = o.x * o.x + o.y * o.y
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        # (x + yi)/d / ((u + vi)/e) = (x + yi)(u - vi) e / (d (u^2 + v^2))
        return GaussianRational.from_parts(
            (self.x * o.x + self.y * o.y) * o.d, (self.y * o.x - self.x * o.y) * o.d, self.d * n
        )

    def __rtruediv__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return ONE / (self ** -exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> "GaussianRational":
        return GaussianRational.from_parts(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        """Squared modulus ``|z|^2``."""
        return Fraction(self.x * self.x + self.y * self.y, self.d * self.d)

    def is_unit(self) -> bool:
        return self.x * self.x + self.y * self.y == self.d * self.d

    def __complex__(self):
        return complex(self.x / self.d, self.y / self.d)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        sign = "+" if im >= 0 else "-"
        return f"{re}{sign}{abs(im)}i"


def _coerce_operand(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return GaussianRational(value)
    return None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
