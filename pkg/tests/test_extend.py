import pytest

from nilcohom.algebra import Beltrami, Form, conjugate, d, exp_contract
from nilcohom.deform import default_samples, kuranishi_series, operators_at
from nilcohom.errors import HypothesisError
from nilcohom.extend import (
    compare_routes,
    extend_at_sample,
    extend_d_closed,
    injectivity_test,
    mild_extension_two_eq,
    p_kahler_extend,
    transverse_positivity,
    uniqueness_check,
    verify_extension,
)
from nilcohom.gauss import GaussRational
from nilcohom.hodge import canonical_representative, harmonic_basis
from nilcohom.model import catalog, torus_model
from nilcohom.monomial import basis

I = GaussRational(0, 1)


def kahler(m, p=1):
    omega = Form.zero(m)
    for j in range(m.n):
        omega = omega + Form.monomial(m, (j, m.n + j), I)
    w = Form.one(m)
    for _ in range(p):
        w = w ^ omega
    return w


def closed_classes(m, p, q):
    """d-closed representatives of the harmonic classes that admit one."""
    b = basis(m.n, p, q)
    out = []
    for v in harmonic_basis(m, "dbar", p, q):
        try:
            out.append(canonical_representative(m, Form.from_vector(m, b, v)))
        except HypothesisError:
            pass
    return out


def test_rejects_non_closed(iwasawa, iwasawa_family):
    with pytest.raises(ValueError):
        extend_d_closed(iwasawa, Form.parse(iwasawa, "p3"), iwasawa_family, 3)


def test_refuses_without_hypothesis(iwasawa, iwasawa_family):
    mu0 = closed_classes(iwasawa, 2, 0)[0]
    with pytest.raises(HypothesisError, match=r"B\^\{2,1\}"):
        extend_d_closed(iwasawa, mu0, iwasawa_family, 3)


def test_zero_phi_is_identity(iwasawa):
    mu0 = Form.parse(iwasawa, "p1^q1")
    res = extend_d_closed(iwasawa, mu0, Beltrami.zero(iwasawa), 3)
    assert res.mu == mu0 and res.closed_ok and res.dbar_t_ok


def test_torus_extension_is_trivial():
    m = catalog("torus2")
    fam = kuranishi_series(m, 3)
    mu0 = Form.parse(m, "p1^q2")
    res = extend_d_closed(m, mu0, fam, 3)
    assert res.mu == mu0.promote(res.mu.ring)
    assert res.closed_ok and verify_extension(res, fam).ok


@pytest.mark.parametrize("pq", [(1, 1), (0, 1), (1, 0), (2, 3), (1, 2)])
def test_iwasawa_extensions(iwasawa, iwasawa_family, pq):
    classes = closed_classes(iwasawa, *pq)
    assert classes
    for mu0 in classes:
        res = extend_d_closed(iwasawa, mu0, iwasawa_family, 3)
        assert res.closed_ok and res.dbar_t_ok and res.system_ok
        assert all(res.order_residuals)
        chk = verify_extension(res, iwasawa_family)
        assert chk.ok, chk.report()
        assert uniqueness_check(res, iwasawa_family, seed=1)
        assert res.mu.constant_part() == mu0
        assert "closed_ok=yes" in res.report()


def test_bypassed_hypothesis_case(iwasawa, iwasawa_family):
    # B^{2,2} fails, yet the fixed point still gives closed extensions here
    for mu0 in closed_classes(iwasawa, 2, 1):
        res = extend_d_closed(iwasawa, mu0, iwasawa_family, 3, check_hypothesis=False)
        assert res.closed_ok


def test_extend_at_sample(iwasawa, iwasawa_family):
    for t in default_samples(iwasawa_family.m, 2, 5):
        phi_t, _, _ = operators_at(iwasawa_family, t)
        for mu0 in closed_classes(iwasawa, 1, 1):
            mu = extend_at_sample(iwasawa, mu0, phi_t)
            assert d(exp_contract(phi_t, mu)).is_zero()


def test_injectivity(iwasawa, iwasawa_family):
    samples = default_samples(iwasawa_family.m, 2, 0)
    v = injectivity_test(iwasawa, iwasawa_family, 0, 1, samples)
    assert v.injective and not v.failing
    v = injectivity_test(iwasawa, iwasawa_family, 2, 3, samples)
    assert not v.injective and v.failing
    assert all(r < k for _, r, k in v.per_sample)
    assert "injective=no" in v.report()
    with pytest.raises(HypothesisError):
        injectivity_test(iwasawa, iwasawa_family, 2, 0, samples)


def test_positivity_exact():
    for n in (2, 3):
        m = torus_model(n)
        for p in range(n + 1):
            pos = transverse_positivity(m, kahler(m, p), p)
            assert pos.positive and pos.method == "exact"
        neg = transverse_positivity(m, kahler(m).scale(GaussRational(-1, 0)), 1)
        assert not neg.positive and str(neg).startswith("not-positive")


def test_positivity_indefinite():
    m = torus_model(2)
    w = Form.monomial(m, (0, 2), I) - Form.monomial(m, (1, 3), I)
    assert not transverse_positivity(m, w, 1).positive


def test_positivity_sampled():
    m = torus_model(4)
    pos = transverse_positivity(m, kahler(m, 2), 2, samples=60)
    assert pos.positive and str(pos) == "positive(sampled, 60)"
    neg = transverse_positivity(m, kahler(m, 2).scale(GaussRational(-1, 0)), 2, samples=60)
    assert not neg.positive


def test_positivity_input_checks():
    m = torus_model(2)
    with pytest.raises(ValueError):
        transverse_positivity(m, Form.monomial(m, (0, 2)), 1)
    with pytest.raises(ValueError):
        transverse_positivity(m, kahler(m, 2), 1)


@pytest.mark.parametrize("n,p", [(2, 1), (3, 1), (3, 2)])
def test_p_kahler_torus(n, p):
    m = torus_model(n)
    fam = kuranishi_series(m, 3)
    res = p_kahler_extend(m, kahler(m, p), fam, p, 3, default_samples(fam.m, 2, 0))
    assert res.ok, res.report()
    assert res.positivity_verdict == "exact"
    assert (res.omega_tilde - conjugate(res.omega_tilde)).is_zero()


def test_p_kahler_refuses_iwasawa(iwasawa, iwasawa_family):
    with pytest.raises(HypothesisError, match="ddbar-lemma"):
        p_kahler_extend(iwasawa, kahler(iwasawa, 2), iwasawa_family, 2, 3)


def test_p_kahler_rejects_bad_input():
    m = torus_model(2)
    fam = kuranishi_series(m, 2)
    with pytest.raises(ValueError):
        p_kahler_extend(m, Form.monomial(m, (0, 2)), fam, 1, 2)


@pytest.mark.parametrize("pq", [(1, 1), (0, 1), (1, 0)])
def test_routes_agree_iwasawa(iwasawa, iwasawa_family, pq):
    classes = closed_classes(iwasawa, *pq)
    assert classes
    for mu0 in classes:
        two = mild_extension_two_eq(iwasawa, mu0, iwasawa_family, 3)
        assert two.route == "two-equation" and two.system_ok
        assert compare_routes(iwasawa, mu0, iwasawa_family, 3).agree


def test_routes_agree_torus():
    m = catalog("torus2")
    fam = kuranishi_series(m, 3)
    cmp = compare_routes(m, Form.parse(m, "p1^q1"), fam, 3)
    assert cmp.agree and cmp.difference.is_zero()


def test_two_equation_refuses(iwasawa, iwasawa_family):
    mu0 = closed_classes(iwasawa, 1, 2)[0]
    # B^{2,2} is needed for the conjugate equation
    with pytest.raises(HypothesisError):
        mild_extension_two_eq(iwasawa, mu0, iwasawa_family, 3)
