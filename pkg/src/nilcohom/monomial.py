"""Basis monomials of the exterior algebra.

A monomial is a strictly increasing tuple of generator indices.  With n
complex generators, index i < n stands for phi^{i+1} and index n + i for its
conjugate.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

__all__ = [
    "wedge_mono",
    "insert_sign",
    "bidegree",
    "conj_mono",
    "basis",
    "total_basis",
    "mono_name",
]


@lru_cache(maxsize=1 << 18)
def wedge_mono(a: tuple, b: tuple):
    """Return (sign, a^b sorted) or None when a and b share a factor."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    sa = set(a)
    for x in b:
        if x in sa:
            return None
    # sign = parity of pairs (x in a, y in b) with x > y
    inv = 0
    for y in b:
        for x in a:
            if x > y:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(a + b))


def insert_sign(mono: tuple, x: int):
    """Sign and result of mono ^ e_x (appending x on the right)."""
    if x in mono:
        return None
    k = sum(1 for y in mono if y > x)
    return (-1 if k & 1 else 1), tuple(sorted(mono + (x,)))


def bidegree(mono: tuple, n: int):
    p = sum(1 for x in mono if x < n)
    return p, len(mono) - p


@lru_cache(maxsize=1 << 16)
def conj_mono(mono: tuple, n: int):
    """Conjugate monomial with the reordering sign."""
    img = [x + n if x < n else x - n for x in mono]
    # count inversions of img
    inv = 0
    for i in range(len(img)):
        for j in range(i + 1, len(img)):
            if img[i] > img[j]:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(img))


@lru_cache(maxsize=None)
def basis(n: int, p: int, q: int):
    """Canonical ordered monomial basis of A^{p,q}."""
    if not (0 <= p <= n and 0 <= q <= n):
        return ()
    hol = list(combinations(range(n), p))
    anti = list(combinations(range(n, 2 * n), q))
    return tuple(a + b for a in hol for b in anti)


@lru_cache(maxsize=None)
def total_basis(n: int, k: int):
    """Monomial basis of total degree k, grouped by increasing p."""
    out = []
    for p in range(0, k + 1):
        out.extend(basis(n, p, k - p))
    return tuple(out)


def mono_name(mono: tuple, n: int) -> str:
    if not mono:
        return "1"
    return "^".join(f"p{x + 1}" if x < n else f"q{x - n + 1}" for x in mono)
