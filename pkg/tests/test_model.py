import pytest

from nilcohom.algebra import Form, d
from nilcohom.errors import IntegrabilityError, ModelError, ModelSyntaxError, NilpotencyError
from nilcohom.gauss import GaussRational
from nilcohom.model import (
    bracket_of,
    catalog,
    catalog_names,
    check_integrability,
    frame_structure,
    load_model,
    parse_model,
    serialize,
)


def test_iwasawa_parse():
    m = parse_model("dim 3; d p3 = -1 * p1^p2")
    assert m.n == 3
    assert m == catalog("iwasawa3")
    assert d(Form.gen(m, 2)) == Form.parse(m, "-1 * p1^p2")


def test_torus_and_kt():
    t = parse_model("dim 3")
    assert t.is_abelian()
    kt = parse_model("dim 2; d p2 = p1^q1")
    assert check_integrability(kt).passed


def test_report_contents(iwasawa):
    rep = check_integrability(iwasawa)
    assert rep.passed
    assert rep.components[2][(2, 0)] and not rep.components[2][(1, 1)]
    assert "PASS=yes" in str(rep)


def test_integrability_failure():
    with pytest.raises(IntegrabilityError):
        parse_model("dim 2; d p2 = q1^q2")
    rep = check_integrability(parse_model("dim 2; d p2 = q1^q2", validate=False))
    assert not rep.integrable and "PASS=no" in str(rep)


def test_nilpotency_failure():
    with pytest.raises(NilpotencyError) as e:
        parse_model("dim 3; d p3 = p1^p2; d p1 = p1^p3")
    assert "d^2" in str(e.value)


@pytest.mark.parametrize(
    "text",
    ["dim 2; d p2 = p1^p1", "dim 2; d p3 = p1^p2", "dim x", "dim 2; d q1 = p1^p2", "d p1 = p1^p2", "dim 2; d p2 = 2 * * p1"],
)
def test_syntax_errors(text):
    with pytest.raises(ModelError):
        parse_model(text)


def test_syntax_error_location():
    with pytest.raises(ModelSyntaxError) as e:
        parse_model("dim 2\nd p2 = p1 ^ zz")
    assert e.value.line == 2


def test_coefficients_and_ordering():
    m = parse_model("dim 3\n# comment\nd p3 = (1/2 + 3/4 i) * p2^p1 + 2 * p1^q2")
    # p2^p1 normalizes to -p1^p2
    got = d(Form.gen(m, 2))
    want = Form.parse(m, "(-1/2 - 3/4 i) * p1^p2 + 2 * p1^q2")
    assert got == want


@pytest.mark.parametrize("name", ["iwasawa3", "torus1", "torus2", "torus3", "kodaira-thurston"])
def test_serialize_roundtrip(name):
    m = catalog(name)
    assert parse_model(serialize(m)) == m


def test_catalog_names_and_errors(tmp_path, monkeypatch):
    assert {"iwasawa3", "torus1", "torus2", "torus3", "kodaira-thurston"} <= set(catalog_names())
    with pytest.raises(KeyError):
        catalog("nope")
    (tmp_path / "mine.model").write_text("dim 2\nd p2 = p1^q1\n")
    monkeypatch.setenv("NILCOHOM_CATALOG_DIR", str(tmp_path))
    assert "mine" in catalog_names()
    assert catalog("mine").n == 2
    assert load_model(str(tmp_path / "mine.model")).n == 2


def test_d_squared_and_conjugation_on_generators():
    for name in catalog_names():
        m = catalog(name)
        for a in range(2 * m.n):
            g = Form.monomial(m, (a,))
            assert d(d(g)).is_zero()
            assert d(g.conjugate()) == d(g).conjugate()


def test_frame_structure(iwasawa, kt):
    assert frame_structure(catalog("torus2")) == {}
    assert bracket_of(iwasawa, 0, 1) == {2: GaussRational(1)}
    # complex parallelizable: no mixed brackets [Z_i, conj Z_j]
    assert all((a < 3) == (b < 3) for a, b in frame_structure(iwasawa))
    br = bracket_of(kt, 0, 2)  # [Z1, conj Z1]
    assert 1 in br
