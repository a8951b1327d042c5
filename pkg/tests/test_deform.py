import pytest

from nilcohom.algebra import Beltrami, bracket
from nilcohom.deform import (
    check_maurer_cartan,
    default_samples,
    deformed_operator,
    harmonic_beltrami_basis,
    hodge_numbers_at,
    invariance_scan,
    kuranishi_series,
    operators_at,
    vector_delbar_matrix,
)
from nilcohom.errors import HypothesisError
from nilcohom.gauss import GaussRational
from nilcohom.hodge import cohomology
from nilcohom.model import catalog


@pytest.mark.parametrize("name,expected", [("torus1", 1), ("torus2", 4), ("iwasawa3", 6), ("kodaira-thurston", 2)])
def test_parameter_count(name, expected):
    m = catalog(name)
    assert len(harmonic_beltrami_basis(m)) == expected
    assert kuranishi_series(m, 2).m == expected


def test_vector_delbar_squares_to_zero(iwasawa):
    assert (vector_delbar_matrix(iwasawa, 1) @ vector_delbar_matrix(iwasawa, 0)).is_zero()


def test_iwasawa_family(iwasawa_family):
    fam = iwasawa_family
    assert fam.terminated and fam.termination_order == 2
    assert fam.unobstructed and fam.mc_residual.is_zero()
    assert check_maurer_cartan(fam.exact_phi).is_zero()
    text = fam.summary()
    assert "terminated=yes" in text and "m=6" in text


def test_torus_family_is_linear():
    fam = kuranishi_series(catalog("torus2"), 4)
    assert fam.termination_order == 1
    assert bracket(fam.phi, fam.phi).is_zero()


def test_order_validation(iwasawa):
    with pytest.raises(ValueError):
        kuranishi_series(iwasawa, 0)


def test_non_integrable_rejected(iwasawa):
    # eta_1 + eta_4 without the quadratic correction violates Maurer-Cartan
    dirs = harmonic_beltrami_basis(iwasawa)
    phi = dirs[0] + dirs[3]
    assert not check_maurer_cartan(phi).is_zero()
    with pytest.raises(HypothesisError):
        operators_at(phi, ())


def test_deformed_operators(iwasawa_family):
    fam = iwasawa_family
    t = default_samples(fam.m, 1, 3)[0]
    _, D, P = operators_at(fam, t)
    assert D[(1, 0)].rank() == 1
    for p in range(4):
        for q in range(3):
            assert (D[(p, q + 1)] @ D[(p, q)]).is_zero()
            if p < 3:
                assert (P[(p + 1, q)] @ P[(p, q)]).is_zero()
    op = deformed_operator(fam, "delbar_t", 1, 0)
    assert op.constant().is_zero()
    assert op.evaluate(t).rank() == 1


def test_hodge_numbers_class_ii(iwasawa_family):
    # only t1 nonzero: the 2x2 block of the parameters is singular but nonzero
    t = (GaussRational(1, 0) / 7,) + (GaussRational(0, 0),) * 5
    h = hodge_numbers_at(iwasawa_family, t)
    assert h[("dbar", 1, 0)] == 2
    assert h[("dbar", 2, 0)] == 2
    assert h[("dbar", 0, 0)] == 1 and h[("dbar", 3, 3)] == 1


def test_hodge_numbers_generic(iwasawa_family):
    fam = iwasawa_family
    for t in default_samples(fam.m, 6, 0):
        h = hodge_numbers_at(fam, t, bottchern=False)
        assert h[("dbar", 1, 0)] == 2
        # h^{2,0} drops to 1 exactly when the 2x2 parameter block is invertible
        det = t[0] * t[3] - t[1] * t[2]
        assert h[("dbar", 2, 0)] == (2 if det == GaussRational(0, 0) else 1)


def test_zero_sample_recovers_center(iwasawa_family, iwasawa):
    h = hodge_numbers_at(iwasawa_family, (GaussRational(0, 0),) * 6)
    c = cohomology(iwasawa)
    assert all(v == c.get(th, p, q) for (th, p, q), v in h.items())


def test_samples_deterministic():
    assert default_samples(6, 4, 1) == default_samples(6, 4, 1)
    assert default_samples(6, 4, 1) != default_samples(6, 4, 2)


def test_scan_iwasawa(iwasawa_family):
    rep = invariance_scan(iwasawa_family, default_samples(6, 3, 0), ("dolbeault", "bottchern"))
    assert rep.semicontinuity_ok and rep.euler_ok and not rep.soundness_violations
    jumps = rep.jumping("dbar")
    assert (1, 0) in jumps and (2, 0) in jumps
    assert (0, 0) not in jumps and (3, 3) not in jumps
    for p, q in jumps:
        # every jump needs at least one hypothesis of the criterion to fail
        assert rep.failed_hypotheses(p, q)
    tsv = rep.to_tsv()
    assert "# semicontinuity\tok" in tsv and "# jump\t1,0" in tsv


def test_scan_torus_has_no_jumps():
    fam = kuranishi_series(catalog("torus2"), 3)
    rep = invariance_scan(fam, default_samples(fam.m, 2, 0), ("dolbeault", "bottchern"))
    assert not rep.jumping("dbar") and not rep.jumping("BC")


def test_scan_needs_samples(iwasawa_family):
    with pytest.raises(ValueError):
        invariance_scan(iwasawa_family, [])
