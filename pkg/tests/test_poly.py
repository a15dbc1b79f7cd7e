from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dqw.poly import ParseError, PolyError, Polynomial, parse_polynomial


def P(text, dim=None):
    return parse_polynomial(text, dim)


class TestBasics:
    def test_zero_and_constant(self):
        z = Polynomial.zero(3)
        assert z.is_zero()
        assert z.total_degree() == -1
        c = Polynomial.constant(3, Fraction(2, 3))
        assert c.constant_term() == Fraction(2, 3)
        assert c.total_degree() == 0

    def test_variable(self):
        x2 = Polynomial.variable(3, 2)
        assert x2.coefficient((0, 1, 0)) == 1
        with pytest.raises(PolyError):
            Polynomial.variable(3, 4)

    def test_no_zero_terms_stored(self):
        p = Polynomial(2, {(1, 0): Fraction(0), (0, 1): Fraction(2)})
        assert (1, 0) not in p.terms

    def test_evaluate(self):
        p = P("x1^2 - x2", dim=2)
        assert p.evaluate((3, 2)) == 7

    def test_derive(self):
        p = P("x1^2*x2 + x2", dim=2)
        assert p.derive(1) == P("2*x1*x2", dim=2)
        assert p.derive(2) == P("x1^2 + 1", dim=2)
        assert p.derive(1, 3).is_zero()

    def test_substitute_scalar_and_poly(self):
        p = P("x1^2 + x2", dim=2)
        assert p.substitute(1, Fraction(2)) == P("4 + x2", dim=2)
        assert p.substitute(2, P("x1*x1", dim=2)) == P("2*x1^2", dim=2)

    def test_dim_mismatch(self):
        with pytest.raises(PolyError):
            P("x1", dim=1) + P("x1", dim=2)

    def test_pow(self):
        p = P("x1 + 1", dim=1)
        assert p**3 == P("x1^3 + 3*x1^2 + 3*x1 + 1", dim=1)
        assert p**0 == Polynomial.one(1)


class TestParsing:
    def test_rationals(self):
        assert P("2/3", dim=1) == Polynomial.constant(1, Fraction(2, 3))

    def test_precedence(self):
        assert P("2*x1^3 - 1/2", dim=1) == Polynomial(
            1, {(3,): Fraction(2), (0,): Fraction(-1, 2)}
        )

    def test_parens_and_unary(self):
        assert P("-(x1 - 2)*(x1 + 2)", dim=1) == P("4 - x1^2", dim=1)

    def test_whitespace_insignificant(self):
        assert P("  x1 +   2* x2 ", dim=2) == P("x1+2*x2", dim=2)

    def test_dim_inference(self):
        p = P("x3 + 1")
        assert p.dim == 3

    def test_error_positions(self):
        with pytest.raises(ParseError) as err:
            P("x1 + ?")
        assert err.value.position == 5
        with pytest.raises(ParseError):
            P("x1 +")
        with pytest.raises(ParseError):
            P("x9", dim=2)
        with pytest.raises(ParseError):
            P("1/0")


def polys(dim=3, max_degree=3, max_terms=4):
    exps = st.tuples(*[st.integers(0, max_degree) for _ in range(dim)])
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    return st.dictionaries(exps, coeff, max_size=max_terms).map(
        lambda d: Polynomial(dim, d)
    )


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + Polynomial.zero(3) == a
    assert a * Polynomial.one(3) == a


@settings(max_examples=60, deadline=None)
@given(polys())
def test_text_round_trip(p):
    assert parse_polynomial(p.to_text(), dim=3) == p


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_leibniz(a, b):
    assert (a * b).derive(1) == a.derive(1) * b + a * b.derive(1)
