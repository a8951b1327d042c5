import random

import pytest

from nilcohom.algebra import (
    Beltrami,
    EndomorphismField,
    Form,
    bracket,
    conjugate,
    contract,
    d,
    dbar,
    delbar_beltrami,
    delbar_beltrami_dual,
    deformed_delbar,
    delop,
    exp_contract,
    ext_map_pair,
    inverse_endo,
    lie_derivative_10,
    one_minus_phibar_phi,
    rho,
    rho_projection,
    simultaneous_contract,
    wedge,
)
from nilcohom.gauss import GaussRational, I
from nilcohom.model import catalog
from nilcohom.randomgen import random_beltrami, random_form
from nilcohom.series import Ring

R1 = Ring(1, 3)


def beltrami(m, entries, ring=Ring(0, 0)):
    """entries: {component index: form text or Form}."""
    comps = []
    for i in range(m.n):
        v = entries.get(i, "0")
        comps.append(v if isinstance(v, Form) else Form.parse(m, v, ring))
    return Beltrami(m, comps, ring)


def t_times(m, text, ring=R1):
    return Form.parse(m, text, ring).scale(ring.var(0))


# wedge / differentials -----------------------------------------------------


def test_wedge_examples(iwasawa):
    m = iwasawa
    a = Form.parse(m, "p1^p2") ^ Form.parse(m, "q1")
    assert a.terms == {(0, 1, 3): a.terms[(0, 1, 3)]} and a.terms[(0, 1, 3)].constant() == 1
    x = Form.parse(m, "p1 + 2 * q3")
    assert (x ^ x).is_zero()
    assert Form.parse(m, "p1") ^ Form.parse(m, "p2") == -d(Form.gen(m, 2))


def test_graded_commutativity(iwasawa):
    rng = random.Random(0)
    for _ in range(50):
        k, l = rng.randint(0, 6), rng.randint(0, 6)
        a = random_form(rng, iwasawa, Ring(0, 0), degree=k)
        b = random_form(rng, iwasawa, Ring(0, 0), degree=l)
        assert wedge(a, b) == wedge(b, a).scale((-1) ** (k * l))


def test_differential_examples(iwasawa):
    m = iwasawa
    assert d(Form.gen(m, 2)) == Form.parse(m, "-1 * p1^p2")
    assert dbar(Form.gen(m, 2)).is_zero()
    # del(p1 ^ q1 ^ p3) = -p1 ^ q1 ^ del(p3) = p1 ^ q1 ^ p1 ^ p2 = 0
    assert delop(Form.parse(m, "p1^q1^p3")).is_zero()
    # del(q1 ^ p3) = -q1 ^ del p3 = q1 ^ p1 ^ p2
    assert delop(Form.parse(m, "q1^p3")) == Form.parse(m, "p1^p2^q1")
    assert d(Form.parse(m, "p3")) == delop(Form.parse(m, "p3")) + dbar(Form.parse(m, "p3"))


# contraction ------------------------------------------------------------------


def test_contract_examples(iwasawa):
    m = catalog("torus2")
    phi = beltrami(m, {0: "q1"})
    assert contract(phi, Form.parse(m, "p1")) == Form.parse(m, "q1")
    assert contract(phi, Form.parse(m, "q1^q2")).is_zero()
    psi = beltrami(m, {1: "q1"})
    # phi = q1 (x) Z2 acting as the degree-0 derivation phi_i ^ (Z_i -| .)
    assert contract(psi, Form.parse(m, "p1^p2")) == Form.parse(m, "p1^q1")


def test_contract_derivation(iwasawa):
    rng = random.Random(1)
    for _ in range(40):
        phi = random_beltrami(rng, iwasawa, R1)
        k = rng.randint(0, 6)
        a = random_form(rng, iwasawa, R1, degree=k)
        b = random_form(rng, iwasawa, R1)
        assert contract(phi, a ^ b) == (contract(phi, a) ^ b) + (a ^ contract(phi, b))


def test_exp_contract(iwasawa):
    m = iwasawa
    z = Beltrami.zero(m, R1)
    a = Form.parse(m, "p1^p2^q3", R1)
    assert exp_contract(z, a) == a
    phi = Beltrami(m, [t_times(m, "q1"), t_times(m, "q2 + q3"), Form.zero(m, R1)], R1)
    f1 = Form.parse(m, "p1", R1) + phi.components[0]
    f2 = Form.parse(m, "p2", R1) + phi.components[1]
    assert exp_contract(phi, Form.parse(m, "p1^p2", R1)) == f1 ^ f2


def test_exp_contract_filtration(iwasawa):
    rng = random.Random(2)
    for _ in range(40):
        phi = random_beltrami(rng, iwasawa, R1)
        p, q = rng.randint(0, 3), rng.randint(0, 3)
        a = random_form(rng, iwasawa, R1, p, q)
        for s, _ in exp_contract(phi, a).bidegrees():
            assert s <= p  # only (p-k, q+k) pieces in the X_0 grading


def test_lie_derivative(iwasawa):
    m = iwasawa
    a = Form.parse(m, "p3", R1)
    assert lie_derivative_10(Beltrami.zero(m, R1), a).is_zero()
    t2 = catalog("torus2")
    assert lie_derivative_10(beltrami(t2, {0: "q2"}), Form.parse(t2, "p1^p2")).is_zero()
    phi = Beltrami(m, [t_times(m, "q1"), Form.zero(m, R1), Form.zero(m, R1)], R1)
    assert lie_derivative_10(phi, a) == t_times(m, "p2^q1")


# brackets and vector-valued delbar -------------------------------------------------


def test_bracket_examples(iwasawa):
    m = iwasawa
    phi = beltrami(m, {0: "q1"})
    psi = beltrami(m, {1: "q2"})
    br = bracket(phi, psi)
    assert br.components[0].is_zero() and br.components[1].is_zero()
    assert set(br.components[2].terms) == {(3, 4)}
    assert bracket(phi, Beltrami.zero(m)).is_zero()
    t = catalog("torus3")
    assert bracket(beltrami(t, {0: "q2"}), beltrami(t, {2: "q1"})).is_zero()


def test_bracket_symmetric(iwasawa, kt):
    rng = random.Random(3)
    for m in (iwasawa, kt):
        for _ in range(20):
            a, b = random_beltrami(rng, m, R1), random_beltrami(rng, m, R1)
            assert bracket(a, b) == bracket(b, a)


def test_delbar_beltrami(iwasawa, kt):
    rng = random.Random(4)
    t = catalog("torus2")
    phi = random_beltrami(rng, t, R1)
    assert [c for c in delbar_beltrami(phi).components] == [dbar(c) for c in phi.components]
    phi = random_beltrami(rng, iwasawa, R1)
    assert [c for c in delbar_beltrami(phi).components] == [dbar(c) for c in phi.components]
    # Kodaira-Thurston: the frame is not holomorphic
    phi = beltrami(kt, {0: "q2"})
    assert not delbar_beltrami(phi).components[1].is_zero()
    for m in (iwasawa, kt):
        for _ in range(20):
            phi = random_beltrami(rng, m, R1)
            assert delbar_beltrami(phi) == delbar_beltrami_dual(phi)


# endomorphisms ------------------------------------------------------------------------


def test_simultaneous_contract_basics(iwasawa):
    m = iwasawa
    a = Form.parse(m, "p1^q2 + 2 * p1^p2^q3")
    assert simultaneous_contract(EndomorphismField.identity(m), a) == a
    c = GaussRational(3, 1)
    b = Form.parse(m, "p1^p2^q3")
    assert simultaneous_contract(EndomorphismField.scalar(m, c), b) == b.scale(c * c * c)


def test_one_minus_phibar_phi_order_two(iwasawa):
    m = iwasawa
    phi = Beltrami(m, [t_times(m, "q1"), Form.zero(m, R1), Form.zero(m, R1)], R1)
    C = one_minus_phibar_phi(phi)
    a = Form.parse(m, "p1^q1", R1)
    tt = R1.var(0) * R1.var(0, True)
    assert simultaneous_contract(C, a) == a - a.scale(tt)
    # factor-by-factor substitution: conj e_1 -> conj e_1 - |t|^2 conj e_1
    assert simultaneous_contract(C, Form.parse(m, "p2^q1^q2", R1)) == Form.parse(m, "p2^q1^q2", R1).scale(R1.one() - tt)


def test_inverse_endo(iwasawa, iwasawa_family):
    m = iwasawa
    Id = EndomorphismField.identity(m, R1)
    assert inverse_endo(Id).is_identity()
    R2 = Ring(1, 2)
    size = 2 * m.n
    t = R2.var(0)
    A = [[R2.zero()] * size for _ in range(size)]
    A[1][0] = t
    A[2][1] = R2.one().scale(2)
    M = EndomorphismField(m, [[(R2.one() if i == j else R2.zero()) - A[i][j].scale(1) * t for j in range(size)] for i in range(size)], R2)
    inv = inverse_endo(M)
    assert (M @ inv).is_identity() and (inv @ M).is_identity()
    C = one_minus_phibar_phi(iwasawa_family.phi)
    assert (C @ inverse_endo(C)).is_identity()
    bad = EndomorphismField.scalar(m, 2, R1)
    with pytest.raises(ValueError):
        inverse_endo(bad)


def test_ext_map_pair(iwasawa):
    m = iwasawa
    z = Beltrami.zero(m, R1)
    a = Form.parse(m, "p1^q2", R1)
    assert ext_map_pair(z, a) == a
    rng = random.Random(5)
    for _ in range(20):
        phi = random_beltrami(rng, m, R1)
        b = random_form(rng, m, R1, rng.randint(0, 3), 0)
        assert ext_map_pair(phi, b) == exp_contract(phi, b)
    phi = Beltrami(m, [t_times(m, "q1"), Form.zero(m, R1), Form.zero(m, R1)], R1)
    f1 = Form.parse(m, "p1", R1) + t_times(m, "q1")
    f2 = Form.parse(m, "q1", R1) + Form.parse(m, "p1", R1).scale(R1.var(0, True))
    assert ext_map_pair(phi, Form.parse(m, "p1^q1", R1)) == f1 ^ f2


def test_rho(iwasawa):
    m = iwasawa
    a = Form.parse(m, "p1^q2", R1)
    assert rho(Beltrami.zero(m, R1), a) == a
    rng = random.Random(6)
    for _ in range(20):
        phi = random_beltrami(rng, m, R1)
        b = random_form(rng, m, R1, rng.randint(0, 3), 0)
        assert rho(phi, b) == exp_contract(phi, b)
        c = random_form(rng, m, R1, 1, 1)
        assert rho(phi, c) == rho_projection(phi, c)


def test_deformed_delbar(iwasawa, iwasawa_family):
    m = iwasawa
    a = Form.parse(m, "p3^q1", R1)
    assert deformed_delbar(Beltrami.zero(m, R1), a) == dbar(a)
    phi = iwasawa_family.phi
    rng = random.Random(7)
    for _ in range(15):
        b = random_form(rng, m, phi.ring, rng.randint(0, 3), rng.randint(0, 2), series_terms=1)
        assert deformed_delbar(phi, deformed_delbar(phi, b)).is_zero()


def test_conjugate(iwasawa):
    m = iwasawa
    w = Form.parse(m, "i * p1^q1")
    assert conjugate(w) == w
    rng = random.Random(8)
    for _ in range(20):
        a = random_form(rng, m, R1)
        assert conjugate(conjugate(a)) == a
    a = Form.parse(m, "p1^p2", R1).scale(R1.var(0))
    assert conjugate(a) == Form.parse(m, "q1^q2", R1).scale(R1.var(0, True))
    assert conjugate(Form.parse(m, "p1").scale(I)) == Form.parse(m, "-i * q1")
