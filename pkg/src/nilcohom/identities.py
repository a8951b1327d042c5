"""Seeded randomized checks of the operator identities the engine relies on."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import (
    Form,
    bracket,
    bracket_rhs,
    contract,
    d,
    dbar,
    delbar_beltrami,
    delop,
    exp_contract,
    lie_derivative_10,
    pullback_operator,
    pullback_operator_direct,
    rho,
    rho_projection,
    wedge,
)
from .deform import kuranishi_series
from .gauss import GaussRational
from .model import ComplexModel
from .randomgen import random_beltrami, random_bidegree, random_form
from .series import Ring

__all__ = ["IDENTITIES", "IdentityReport", "run_identity_suite"]

HALF = GaussRational(1, 0) / 2
SMALL = Ring(2, 3)

IDENTITIES = (
    "exp_conjugated_d",
    "bracket_all_degrees",
    "rho_factorization",
    "pullback_routes",
    "nilpotency",
    "leibniz",
)


def _degree(f: Form) -> int | None:
    degs = {len(mono) for mono in f.terms}
    return degs.pop() if len(degs) == 1 else None


def _exp_conjugated_d(m, rng, ctx):
    phi = random_beltrami(rng, m, SMALL)
    a = random_form(rng, m, SMALL)
    lhs = exp_contract(-phi, d(exp_contract(phi, a)))
    mc = delbar_beltrami(phi) - bracket(phi, phi).scale(HALF)
    rhs = d(a) - lie_derivative_10(phi, a) + contract(mc, a)
    return (lhs - rhs).is_zero()


def _bracket_all_degrees(m, rng, ctx):
    phi = random_beltrami(rng, m, SMALL)
    psi = random_beltrami(rng, m, SMALL)
    a = random_form(rng, m, SMALL)
    return (contract(bracket(phi, psi), a) - bracket_rhs(phi, psi, a)).is_zero()


def _rho_factorization(m, rng, ctx):
    phi = random_beltrami(rng, m, SMALL)
    p, q = random_bidegree(rng, m.n)
    a = random_form(rng, m, SMALL, p, q)
    return (rho(phi, a) - rho_projection(phi, a)).is_zero()


def _pullback_routes(m, rng, ctx):
    phi = ctx["phi"]
    p, q = random_bidegree(rng, m.n)
    a = random_form(rng, m, phi.ring, p, q, series_terms=1)
    which = rng.choice(("delbar_t", "del_t"))
    return (pullback_operator(phi, a, which) - pullback_operator_direct(phi, a, which)).is_zero()


def _nilpotency(m, rng, ctx):
    a = random_form(rng, m, SMALL)
    return (
        d(d(a)).is_zero()
        and delop(delop(a)).is_zero()
        and dbar(dbar(a)).is_zero()
        and (delop(dbar(a)) + dbar(delop(a))).is_zero()
    )


def _leibniz(m, rng, ctx):
    k = rng.randint(0, 2 * m.n)
    a = random_form(rng, m, SMALL, degree=k)
    b = random_form(rng, m, SMALL)
    s = -1 if k & 1 else 1
    for op in (d, delop, dbar):
        if not (op(wedge(a, b)) - op(a).__xor__(b) - wedge(a, op(b)).scale(s)).is_zero():
            return False
    return True


_CHECKS = {
    "exp_conjugated_d": _exp_conjugated_d,
    "bracket_all_degrees": _bracket_all_degrees,
    "rho_factorization": _rho_factorization,
    "pullback_routes": _pullback_routes,
    "nilpotency": _nilpotency,
    "leibniz": _leibniz,
}


@dataclass
class IdentityReport:
    cases: int
    seed: int
    results: dict = field(default_factory=dict)  # (model, identity) -> [passed, failed]

    @property
    def ok(self) -> bool:
        return all(f == 0 for _, f in self.results.values())

    def failures(self) -> int:
        return sum(f for _, f in self.results.values())

    def to_tsv(self) -> str:
        lines = [f"# cases\t{self.cases}", f"# seed\t{self.seed}", "model\tidentity\tpassed\tfailed\tverdict"]
        for (mname, ident), (p, f) in self.results.items():
            lines.append(f"{mname}\t{ident}\t{p}\t{f}\t{'PASS' if f == 0 else 'FAIL'}")
        lines.append(f"# total_failures\t{self.failures()}")
        return "\n".join(lines) + "\n"


def run_identity_suite(models: list, cases: int = 1000, seed: int = 0, identities=IDENTITIES) -> IdentityReport:
    """Run every identity ``cases`` times on each model with a seeded generator.

    The pullback comparison needs an integrable Beltrami differential, so it is
    fed the model's Kuranishi family truncated at order 2.
    """
    rep = IdentityReport(cases, seed)
    for m in models:
        ctx = {"phi": kuranishi_series(m, 2).phi}
        for ident in identities:
            rng = random.Random(f"{seed}:{m.name}:{ident}")
            check = _CHECKS[ident]
            ok = bad = 0
            for _ in range(cases):
                if check(m, rng, ctx):
                    ok += 1
                else:
                    bad += 1
            rep.results[(m.name, ident)] = [ok, bad]
    return rep
