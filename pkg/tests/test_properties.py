import random

from hypothesis import given, settings
from hypothesis import strategies as st

from nilcohom.algebra import Form, conjugate, d, dbar, delop
from nilcohom.gauss import GaussRational
from nilcohom.linalg import Mat
from nilcohom.model import catalog, parse_model, serialize
from nilcohom.randomgen import random_form, random_series
from nilcohom.series import Ring

small = st.integers(-9, 9)
nonzero = small.filter(bool)


@st.composite
def gauss(draw):
    return GaussRational(draw(small), draw(small)) / draw(nonzero)


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return Mat([[draw(gauss()) for _ in range(c)] for _ in range(r)], r, c)


MODELS = st.sampled_from(["iwasawa3", "kodaira-thurston", "torus2"])
seeds = st.integers(0, 10**6)


@given(gauss(), gauss(), gauss())
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if a != GaussRational(0, 0):
        assert a * a.inverse() == GaussRational(1, 0)


@given(matrices())
def test_rank_nullity(A):
    r, c = A.shape
    assert A.rank() + A.nullity() == c
    for v in A.kernel():
        assert not any(A.apply(v))
    assert A.H.rank() == A.rank()


@given(matrices())
def test_solve_consistent(A):
    b = A.apply([GaussRational(1, 0)] * A.shape[1])
    x = A.solve(b)
    assert x is not None and A.apply(x) == b


@given(seeds)
@settings(max_examples=40)
def test_series_ring(seed):
    rng = random.Random(seed)
    R = Ring(2, 3)
    a, b, c = (random_series(rng, R) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * b).truncate(1) == (a.truncate(1) * b.truncate(1)).truncate(1)


@given(MODELS, seeds)
@settings(max_examples=40, deadline=None)
def test_differentials(name, seed):
    m = catalog(name)
    rng = random.Random(seed)
    a = random_form(rng, m, Ring(0, 0))
    b = random_form(rng, m, Ring(0, 0))
    assert d(d(a)).is_zero()
    assert d(a) == delop(a) + dbar(a)
    assert conjugate(delop(a)) == dbar(conjugate(a))
    # graded commutativity in top degree pairs
    if a.terms and b.terms:
        ka = len(next(iter(a.terms)))
        kb = len(next(iter(b.terms)))
        if all(len(x) == ka for x in a.terms) and all(len(x) == kb for x in b.terms):
            s = -1 if (ka * kb) & 1 else 1
            assert (a ^ b) == (b ^ a).scale(GaussRational(s, 0))


@given(MODELS)
@settings(max_examples=5, deadline=None)
def test_model_roundtrip(name):
    m = catalog(name)
    m2 = parse_model(serialize(m))
    assert serialize(m2) == serialize(m)
    x = Form.parse(m, "p1^q1")
    assert d(Form.parse(m2, "p1^q1")).terms == d(x).terms
