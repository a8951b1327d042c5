"""Acceptance suite: one PASS/FAIL line per criterion, all comparisons exact.

Run with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""

import sys
import time
from math import comb

import pytest

from nilcohom.algebra import Form, conjugate, d, delop, dbar
from nilcohom.deform import default_samples, hodge_numbers_at, invariance_scan, kuranishi_series
from nilcohom.extend import compare_routes, extend_d_closed, p_kahler_extend, uniqueness_check, verify_extension
from nilcohom.gauss import GaussRational
from nilcohom.hodge import THEORIES, cohomology, diagram_map, lemma_variants, operator_matrix
from nilcohom.identities import IDENTITIES, run_identity_suite
from nilcohom.linalg import Mat
from nilcohom.model import catalog, catalog_names, torus_model
from nilcohom.monomial import basis

ORDER = 4
_capman = None


def _line(k: int, ok: bool, detail: str) -> None:
    text = f"CRITERION {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    if _capman is not None:
        with _capman.global_and_fixture_disabled():
            print(text)
    else:
        print(text)


@pytest.fixture(autouse=True)
def _uncaptured(request):
    global _capman
    _capman = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _capman = None


def closed_forms(m, p, q):
    """Basis of the d-closed (p,q)-forms: ker del and ker delbar together."""
    b = basis(m.n, p, q)
    if not b:
        return []
    A = Mat.vstack(operator_matrix(m, "del", p, q).matrix, operator_matrix(m, "dbar", p, q).matrix)
    return [Form.from_vector(m, b, v) for v in A.kernel()]


def kahler_power(m, p):
    omega = Form.zero(m)
    for j in range(m.n):
        omega = omega + Form.monomial(m, (j, m.n + j), GaussRational(0, 1))
    w = Form.one(m)
    for _ in range(p):
        w = w ^ omega
    return w


# ----------------------------------------------------------------------


def check_1():
    start = time.perf_counter()
    m = catalog("iwasawa3")
    t = cohomology(m)
    golden = {
        ("BC", 1, 0): 2, ("dbar", 1, 0): 3, ("BC", 1, 1): 4, ("del", 1, 1): 6,
        ("BC", 2, 0): 3, ("dbar", 2, 0): 3, ("BC", 2, 1): 6, ("del", 2, 1): 6,
        ("BC", 2, 3): 3, ("dbar", 2, 3): 3,
    }
    bad = [k for k, v in golden.items() if t.get(*k) != v]
    maps = [
        diagram_map(m, "BC->del", 1, 1).injective,
        not diagram_map(m, "BC->dbar", 1, 0).surjective,
        not diagram_map(m, "BC->del", 2, 1).injective,
        diagram_map(m, "BC->dbar", 2, 3).surjective,
    ]
    dt = time.perf_counter() - start
    ok = not bad and all(maps) and dt < 10
    return ok, f"iwasawa golden table ({len(golden) - len(bad)}/{len(golden)} numbers, {sum(maps)}/4 map verdicts, {dt:.2f}s)"


def check_2():
    fails = []
    for n in (1, 2, 3):
        m = torus_model(n)
        t = cohomology(m)
        for th in THEORIES:
            for p in range(n + 1):
                for q in range(n + 1):
                    if t.get(th, p, q) != comb(n, p) * comb(n, q):
                        fails.append((n, th, p, q))
        for k in range(2 * n + 1):
            if t.b[k] != sum(comb(n, p) * comb(n, k - p) for p in range(max(0, k - n), min(k, n) + 1)):
                fails.append((n, "deRham", k))
        r = lemma_variants(m)
        if not r.ddbar_lemma or any(v != 0 for v in r.at_defects.values()):
            fails.append((n, "lemma"))
    return not fails, f"torus n=1,2,3 in {len(THEORIES) + 1} theories (de Rham by total degree), ddbar-lemma, AT defects zero ({len(fails)} failures)"


def check_3():
    models = [catalog(n) for n in catalog_names()]
    rep = run_identity_suite(models, cases=1000, seed=0)
    total = sum(a + b for a, b in rep.results.values())
    return rep.ok, f"{len(IDENTITIES)} identities x {len(models)} models x 1000 cases = {total} checks, {rep.failures()} failures"


def check_4():
    fam = kuranishi_series(catalog("iwasawa3"), ORDER)
    tor = kuranishi_series(catalog("torus3"), ORDER)
    ok = (
        fam.m == 6
        and fam.terminated
        and fam.termination_order <= 2
        and fam.mc_residual.is_zero()
        and fam.unobstructed
        and tor.termination_order == 1
        and tor.mc_residual.is_zero()
    )
    return ok, f"iwasawa m={fam.m}, terminates at order {fam.termination_order}; torus terminates at order {tor.termination_order}"


def check_5():
    fam = kuranishi_series(catalog("iwasawa3"), ORDER)
    samples = default_samples(fam.m, 5, 0)
    # keep generic samples only: invertible 2x2 parameter block
    generic = [t for t in default_samples(fam.m, 40, 0) if t[0] * t[3] - t[1] * t[2] != GaussRational(0, 0)][:5]
    rep = invariance_scan(fam, samples, ("dolbeault", "bottchern"))
    c0 = cohomology(fam.model)
    drops = all(
        hodge_numbers_at(fam, t, bottchern=False)[("dbar", p, q)] < c0.get("dbar", p, q)
        for t in generic
        for p, q in ((1, 0), (2, 0), (2, 3))
    )
    attributed = all(rep.failed_hypotheses(p, q) for p, q in rep.jumping("dbar"))
    ok = rep.semicontinuity_ok and rep.euler_ok and not rep.soundness_violations and drops and attributed and len(generic) == 5
    return ok, (
        f"5 samples, semicontinuity {'ok' if rep.semicontinuity_ok else 'violated'}, "
        f"h^{{1,0}},h^{{2,0}},h^{{2,3}} drop at generic t: {'yes' if drops else 'no'}, "
        f"{len(rep.soundness_violations)} counterexamples, jumps {rep.jumping('dbar')} all attributed: {'yes' if attributed else 'no'}"
    )


def check_6():
    done, bad = 0, []
    for name in ("iwasawa3", "kodaira-thurston", "torus2"):
        m = catalog(name)
        fam = kuranishi_series(m, ORDER)
        lem = lemma_variants(m)
        for p in range(m.n + 1):
            for q in range(m.n + 1):
                if not lem.holds("B", p, q + 1):
                    continue
                for mu0 in closed_forms(m, p, q):
                    res = extend_d_closed(m, mu0, fam, ORDER)
                    chk = verify_extension(res, fam)
                    done += 1
                    if not (res.closed_ok and res.dbar_t_ok and chk.ok and uniqueness_check(res, fam)):
                        bad.append((name, p, q))
    return not bad and done > 0, f"{done} d-closed basis forms extended through N={ORDER}, {len(bad)} failures"


def check_7():
    done, bad = 0, []
    for n in (2, 3):
        m = torus_model(n)
        fam = kuranishi_series(m, ORDER)
        for p in sorted({1, n - 1}):
            w = kahler_power(m, p)
            res = p_kahler_extend(m, w, fam, p, ORDER, default_samples(fam.m, 5, 0))
            done += 1
            if not (res.ok and res.positivity_verdict == "exact" and len(res.positivity) == 5):
                bad.append((n, p))
    return not bad, f"{done} torus cases (p=1,n-1; n=2,3), real, closed, initial value, beta order >= 1, positive(exact) at 5 samples; {len(bad)} failures"


def check_8():
    done, bad = 0, []
    for name in ("iwasawa3", "kodaira-thurston", "torus2", "torus3"):
        m = catalog(name)
        fam = kuranishi_series(m, ORDER)
        lem = lemma_variants(m)
        for p in range(m.n + 1):
            for q in range(m.n + 1):
                if not (lem.holds("B", p, q + 1) and lem.holds("B", q, p + 1)):
                    continue
                for mu0 in closed_forms(m, p, q):
                    done += 1
                    if not compare_routes(m, mu0, fam, ORDER).agree:
                        bad.append((name, p, q))
    return not bad and done > 0, f"{done} closed forms, routes agree modulo im(del delbar) at every order; {len(bad)} disagreements"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8]


@pytest.mark.parametrize("k", range(1, 9))
def test_criterion(k):
    ok, detail = CHECKS[k - 1]()
    _line(k, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for k, fn in enumerate(CHECKS, 1):
        ok, detail = fn()
        _line(k, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
