"""Truncated polynomials in deformation parameters t_1..t_m and their conjugates.

An exponent vector has length 2m: the first m entries are powers of t, the
last m are powers of t-bar.  Every product is truncated at total degree N.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gauss import ONE, ZERO, GaussRational

__all__ = ["Ring", "Series"]


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: m parameters, truncation order N."""

    m: int = 0
    N: int = 0

    def zero_exp(self) -> tuple:
        return (0,) * (2 * self.m)

    def one(self) -> "Series":
        return Series(self, {self.zero_exp(): ONE})

    def zero(self) -> "Series":
        return Series(self, {})

    def const(self, c) -> "Series":
        c = GaussRational.coerce(c)
        return Series(self, {self.zero_exp(): c} if c else {})

    def var(self, i: int, conj: bool = False) -> "Series":
        """The parameter t_{i+1} (or its conjugate)."""
        if not 0 <= i < self.m:
            raise IndexError(f"parameter index {i} out of range for m={self.m}")
        if self.N < 1:
            return self.zero()
        e = [0] * (2 * self.m)
        e[i + self.m if conj else i] = 1
        return Series(self, {tuple(e): ONE})


class Series:
    """Sparse truncated series over Q(i); immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict | None = None):
        self.ring = ring
        self.terms = terms if terms is not None else {}

    # construction helpers ------------------------------------------------
    @staticmethod
    def _clean(ring, terms):
        N = ring.N
        return Series(ring, {e: c for e, c in terms.items() if c and sum(e) <= N})

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError(f"series ring mismatch: {self.ring} vs {other.ring}")

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Series):
            return self + self.ring.const(other)
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                s = v + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Series(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.ring.const(other) - self

    def scale(self, c) -> "Series":
        c = GaussRational.coerce(c)
        if not c:
            return Series(self.ring, {})
        if c == ONE:
            return self
        return Series(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return Series(self.ring, {})
        N = self.ring.N
        zero = self.ring.zero_exp()
        if len(a) == 1 and zero in a:
            return other.scale(a[zero])
        if len(b) == 1 and zero in b:
            return self.scale(b[zero])
        bd = [(e, sum(e), c) for e, c in b.items()]
        out = {}
        for e1, c1 in a.items():
            d1 = sum(e1)
            for e2, d2, c2 in bd:
                if d1 + d2 > N:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                v = c1 * c2
                w = out.get(e)
                out[e] = v if w is None else w + v
        return Series(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    # structure -----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self.ring.const(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def conjugate(self) -> "Series":
        m = self.ring.m
        return Series(
            self.ring,
            {e[m:] + e[:m]: c.conjugate() for e, c in self.terms.items()},
        )

    def constant(self) -> GaussRational:
        return self.terms.get(self.ring.zero_exp(), ZERO)

    def valuation(self) -> float:
        """Lowest total degree present (inf for zero)."""
        return min((sum(e) for e in self.terms), default=float("inf"))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous(self, k: int) -> "Series":
        return Series(self.ring, {e: c for e, c in self.terms.items() if sum(e) == k})

    def truncate(self, N: int) -> "Series":
        """Re-express in the ring with smaller order N."""
        ring = Ring(self.ring.m, N)
        return Series(ring, {e: c for e, c in self.terms.items() if sum(e) <= N})

    def promote(self, ring: Ring) -> "Series":
        """Embed into a ring with the same m (terms above ring.N are dropped)."""
        if ring.m != self.ring.m:
            raise ValueError("cannot change the number of parameters")
        return Series(ring, {e: c for e, c in self.terms.items() if sum(e) <= ring.N})

    def is_holomorphic(self) -> bool:
        m = self.ring.m
        return all(not any(e[m:]) for e in self.terms)

    def evaluate(self, t) -> GaussRational:
        """Substitute t (and conj(t) for t-bar) exactly."""
        m = self.ring.m
        t = [GaussRational.coerce(x) for x in t]
        if len(t) != m:
            raise ValueError(f"expected {m} parameter values, got {len(t)}")
        vals = t + [x.conjugate() for x in t]
        cache = {}
        total = ZERO
        for e, c in self.terms.items():
            term = c
            for j, k in enumerate(e):
                if k:
                    key = (j, k)
                    p = cache.get(key)
                    if p is None:
                        p = cache[key] = vals[j] ** k
                    term = term * p
            total = total + term
        return total

    def __repr__(self):
        return f"Series({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        m = self.ring.m
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[e]
            mono = []
            for j, k in enumerate(e):
                if k:
                    name = f"t{j + 1}" if j < m else f"tb{j - m + 1}"
                    mono.append(name if k == 1 else f"{name}^{k}")
            parts.append(str(c) + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)
