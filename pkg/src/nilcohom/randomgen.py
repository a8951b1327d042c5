"""Seeded random forms and Beltrami differentials for property checks."""

from __future__ import annotations

import random

from .algebra import Beltrami, Form
from .gauss import GaussRational
from .monomial import basis, total_basis
from .series import Ring, Series

__all__ = ["random_scalar", "random_series", "random_form", "random_beltrami", "random_bidegree"]

_SMALL = [-2, -1, 1, 2, 3]


def random_scalar(rng: random.Random, complex_: bool = True) -> GaussRational:
    re = GaussRational(rng.choice(_SMALL)) / rng.choice([1, 1, 2, 3])
    if complex_ and rng.random() < 0.5:
        return re + GaussRational(0, rng.choice(_SMALL)) / rng.choice([1, 2])
    return re


def random_series(rng: random.Random, ring: Ring, nterms: int = 2, min_order: int = 0) -> Series:
    if ring.m == 0 or ring.N == 0:
        return ring.const(random_scalar(rng)) if min_order == 0 else ring.zero()
    out = ring.zero()
    for _ in range(nterms):
        deg = rng.randint(min_order, ring.N)
        e = [0] * (2 * ring.m)
        for _ in range(deg):
            e[rng.randrange(2 * ring.m)] += 1
        out = out + Series(ring, {tuple(e): random_scalar(rng)})
    return out


def random_bidegree(rng: random.Random, n: int):
    return rng.randint(0, n), rng.randint(0, n)


def random_form(
    rng: random.Random,
    model,
    ring: Ring,
    p: int | None = None,
    q: int | None = None,
    degree: int | None = None,
    nterms: int = 3,
    series_terms: int = 2,
) -> Form:
    """Random form of bidegree (p,q), or of total degree ``degree``, or mixed."""
    n = model.n
    if p is not None and q is not None:
        pool = basis(n, p, q)
    elif degree is not None:
        pool = total_basis(n, degree)
    else:
        pool = [m for k in range(2 * n + 1) for m in total_basis(n, k)]
    out = Form.zero(model, ring)
    if not pool:
        return out
    for _ in range(nterms):
        mono = rng.choice(pool)
        out = out + Form(model, ring, {mono: random_series(rng, ring, series_terms)})
    return out


def random_beltrami(rng: random.Random, model, ring: Ring, q: int = 1, nterms: int = 2, min_order: int = 1) -> Beltrami:
    """Random T^{1,0}-valued (0,q)-form whose coefficients have series order >= min_order."""
    n = model.n
    pool = basis(n, 0, q)
    comps = []
    for _ in range(n):
        f = Form.zero(model, ring)
        for _ in range(rng.randint(0, nterms)):
            s = random_series(rng, ring, 2, min_order)
            if s.terms:
                f = f + Form(model, ring, {rng.choice(pool): s})
        comps.append(f)
    return Beltrami(model, comps, ring)
