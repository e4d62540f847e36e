from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loghh.errors import ParseError
from loghh.fields import QQ, field
from loghh.polys import PolyRing, Poly, p_add, p_mul, parse_poly

R = PolyRing(QQ, ["x", "y", "z"])


def test_precedence_and_parentheses():
    assert R.parse("x + y*z") == R.parse("(y*z) + x")
    assert R.parse("-x^2") == R.parse("-(x^2)")
    assert R.parse("2*(x - 1)^2") == R.parse("2*x^2 - 4*x + 2")


def test_double_caret_reports_second_caret():
    with pytest.raises(ParseError) as ei:
        parse_poly("x^^2", R, "relations.0")
    assert ei.value.line == 1
    assert ei.value.column == 3
    assert "integer" in ei.value.expected
    assert "relations.0" in str(ei.value)


@pytest.mark.parametrize("text", ["x +", "x / y", "(x", "w", "x^y", "", "x y"])
def test_rejected_inputs(text):
    with pytest.raises(ParseError):
        parse_poly(text, R)


def test_non_string_rejected():
    with pytest.raises(ParseError):
        parse_poly(3, R)


def test_partner_variables():
    S = PolyRing(QQ, ["u"], ["u"])
    assert S.names == ("u", "u_inv")
    rel = S.partner_relations()
    assert rel == [S.parse("u*u_inv - 1").terms]


def test_coefficients_in_prime_field():
    F3 = field(3)
    S = PolyRing(F3, ["x"])
    assert S.parse("3*x + 1") == S.parse("1")
    assert S.parse("2*x + 2*x") == S.parse("x")


def test_duplicate_names_rejected():
    with pytest.raises(ValueError):
        PolyRing(QQ, ["x", "x"])
    with pytest.raises(ValueError):
        PolyRing(QQ, ["x"], ["y"])


def test_homogeneity():
    G = PolyRing(QQ, ["x", "y"], weights={"x": 1, "y": 2})
    assert G.is_homogeneous(G.parse("x^2 - y").terms)
    assert not G.is_homogeneous(G.parse("x - y").terms)


terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
    st.integers(-5, 5).map(Fraction).filter(bool),
    max_size=5,
)


@given(terms)
def test_to_str_round_trip(f):
    assert R.parse(R.to_str(f)).terms == f


@settings(max_examples=60)
@given(terms, terms, terms)
def test_ring_axioms(f, g, h):
    assert p_mul(f, g) == p_mul(g, f)
    assert p_mul(f, p_add(g, h)) == p_add(p_mul(f, g), p_mul(f, h))
    assert p_mul(p_mul(f, g), h) == p_mul(f, p_mul(g, h))


def test_poly_operators():
    x, y = Poly(R, R.parse("x").terms), Poly(R, R.parse("y").terms)
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y
    assert (x - x).is_zero()
