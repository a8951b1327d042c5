"""Exact Gaussian rationals: elements a + b i of Q(i)."""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

__all__ = ["GaussRational", "gr", "ZERO", "ONE", "I"]

_TERM_RE = re.compile(r"([+-])\s*(\d+(?:\s*/\s*\d+)?)?\s*\*?\s*(i?)")


def _to_mpq(x):
    if isinstance(x, str):
        return mpq(x.replace(" ", ""))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class GaussRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_ZQ) else _to_mpq(re)
        self.im = im if type(im) is type(_ZQ) else _to_mpq(im)

    @classmethod
    def coerce(cls, x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, str):
            return cls.parse(x)
        return cls(x)

    @classmethod
    def parse(cls, text: str) -> "GaussRational":
        """Parse ``a/b``, ``a/b + c/d i``, ``i``, ``-2/3 i``."""
        t = text.strip()
        if t.startswith("(") and t.endswith(")"):
            t = t[1:-1].strip()
        if not t:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        if t[0] not in "+-":
            t = "+" + t
        re_part, im_part = mpq(0), mpq(0)
        pos = 0
        while pos < len(t):
            m = _TERM_RE.match(t, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"not a Gaussian rational: {text!r}")
            val = _to_mpq(m.group(2)) if m.group(2) else mpq(1)
            if m.group(1) == "-":
                val = -val
            if m.group(3):
                im_part += val
            else:
                re_part += val
            pos = m.end()
            while pos < len(t) and t[pos].isspace():
                pos += 1
        return cls(re_part, im_part)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussRational):
            other = GaussRational.coerce(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussRational):
            other = GaussRational.coerce(other)
        return GaussRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussRational):
            if isinstance(other, (int, Fraction)) or type(other) is type(_ZQ):
                o = _to_mpq(other)
                return GaussRational(self.re * o, self.im * o)
            other = GaussRational.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussRational(a * c, b)
        return GaussRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def inverse(self) -> "GaussRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, GaussRational):
            other = GaussRational.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm2(self):
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    # predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        try:
            other = GaussRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return {1: "i", -1: "-i"}.get(self.im, f"{self.im}i")
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        return f"({self.re} {sign} {'' if mag == 1 else mag}i)"


_ZQ = mpq(0)
ZERO = GaussRational(0, 0)
ONE = GaussRational(1, 0)
I = GaussRational(0, 1)


def gr(re=0, im=0) -> GaussRational:
    """Shorthand constructor; ``gr("1/2 + 1/3 i")`` parses strings."""
    if isinstance(re, str) and im == 0:
        return GaussRational.parse(re)
    return GaussRational(re, im)
