"""Exact Gaussian rationals.

A :class:`Scalar` is ``re + im*i`` with both parts stored as
:class:`fractions.Fraction`, so equality and hashing are structural.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "MalformedScalar", "ZERO", "ONE", "I", "as_scalar", "parse_scalar"]


class MalformedScalar(ValueError):
    """Raised when a scalar string does not follow ``RAT``, ``RAT+RATi`` or ``RAT-RATi``."""


_RAT = r"-?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(rf"^(?P<re>{_RAT})(?:(?P<sign>[+-])(?P<im>\d+(?:/\d+)?)i)?$")


class Scalar:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "Scalar":
        s = object.__new__(cls)
        s.re = re
        s.im = im
        return s

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Scalar._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Scalar._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar._raw(a * c, b)
        return Scalar._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Scalar":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar._raw(self.re / norm, -self.im / norm)

    def conjugate(self) -> "Scalar":
        return Scalar._raw(self.re, -self.im)

    # comparison / conversion -----------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def is_real(self) -> bool:
        return not self.im

    def height(self) -> int:
        """Largest absolute numerator or denominator among both parts."""
        return max(abs(self.re.numerator), self.re.denominator,
                   abs(self.im.numerator), self.im.denominator)

    def __str__(self):
        if not self.im:
            return str(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self):
        return f"Scalar('{self}')"


def _coerce(x):
    if type(x) is Scalar:
        return x
    if isinstance(x, (int, Rational)):
        return Scalar._raw(Fraction(x), Fraction(0))
    if isinstance(x, complex):
        return NotImplemented
    return NotImplemented


def parse_scalar(text: str) -> Scalar:
    """Parse the exact scalar grammar used in algebra files.

    >>> parse_scalar("3/4-1/2i")
    Scalar('3/4-1/2i')
    """
    if not isinstance(text, str):
        raise MalformedScalar(f"scalar must be a string, got {type(text).__name__}")
    m = _SCALAR_RE.match(text.strip())
    if m is None:
        raise MalformedScalar(f"malformed scalar {text!r}")
    try:
        re_part = Fraction(m["re"])
        im_part = Fraction(m["im"]) if m["im"] is not None else Fraction(0)
    except ZeroDivisionError:
        raise MalformedScalar(f"zero denominator in {text!r}") from None
    if m["sign"] == "-":
        im_part = -im_part
    return Scalar._raw(re_part, im_part)


def as_scalar(x) -> Scalar:
    """Coerce ints, Fractions, scalar strings and Scalars; floats are refused."""
    if type(x) is Scalar:
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, bool):
        return Scalar(int(x))
    if isinstance(x, (int, Rational)):
        return Scalar(x)
    raise MalformedScalar(f"cannot build an exact scalar from {x!r}")


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
