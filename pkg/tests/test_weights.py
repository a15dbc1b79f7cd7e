"""Tests for the iterated-integral weight engine."""

import itertools
from fractions import Fraction
from math import factorial

import pytest

from dqw.bernoulli import bernoulli_number, bernoulli_polynomial
from dqw.freelie import lie_to_lgraph, parse_bracket
from dqw.graphs import (
    UNIT_GRAPH,
    build_w_computable,
    chain_graph,
    classify,
    enumerate_graphs,
    graph_product,
    parse_graph,
)
from dqw.poly import Polynomial, parse_polynomial
from dqw.weights import (
    Weight,
    WeightError,
    ground_integral,
    iterated_integral_weight,
    normalized_weight,
    pn_polynomial,
    product_weight,
    wedge_transform,
    weight_w_computable,
)

F = Fraction


class TestTransform:
    def test_constant(self):
        assert wedge_transform(Polynomial.one(1)) == parse_polynomial("1/2 - x1", dim=1)

    def test_iterated(self):
        assert wedge_transform(wedge_transform(Polynomial.one(1))) == parse_polynomial(
            "1/2*x1^2 - 1/2*x1 + 1/12", dim=1
        )

    def test_antiderivative_pinned_at_zero(self):
        # T[g](u) = C - G(u) with G(0) = 0, so T[g](0) is the ground value
        g = parse_polynomial("3*x1^2 - x1", dim=1)
        t = wedge_transform(g)
        assert t.evaluate((F(0),)) == ground_integral(g)

    def test_ground_integral_values(self):
        assert ground_integral(Polynomial.one(1)) == F(1, 2)
        assert ground_integral(parse_polynomial("x1", dim=1)) == F(1, 6)
        assert ground_integral(Polynomial.zero(1)) == 0

    def test_linearity(self):
        g = parse_polynomial("x1^3 - 2*x1", dim=1)
        h = parse_polynomial("5*x1^2 + 1/3", dim=1)
        assert wedge_transform(g + h) == wedge_transform(g) + wedge_transform(
            h
        ) - wedge_transform(Polynomial.zero(1))
        assert ground_integral(g + h) == ground_integral(g) + ground_integral(h)

    def test_dimension_guard(self):
        with pytest.raises(WeightError):
            wedge_transform(Polynomial.one(2))


class TestPnLadder:
    def test_matches_reflected_bernoulli(self):
        for n in range(13):
            pn = pn_polynomial(n)
            bhat = bernoulli_polynomial(n, variant="modified")
            reflected = Polynomial(
                1, {(k,): c * F((-1) ** k) for (k,), c in bhat.terms.items()}
            )
            assert pn == reflected * F(1, factorial(n))

    def test_ground_values_are_bernoulli(self):
        for n in range(1, 13):
            assert pn_polynomial(n).evaluate((F(0),)) == bernoulli_number(
                n, variant="modified"
            ) / factorial(n)


class TestDirectWeights:
    def test_chains(self):
        assert weight_w_computable(chain_graph(1)) == Weight(1, F(1, 2), F(1, 2))
        assert weight_w_computable(chain_graph(2)) == Weight(2, F(1, 12), F(1, 24))
        for m in range(1, 10):
            w = weight_w_computable(chain_graph(m))
            assert w.integral == bernoulli_number(m, variant="modified") / factorial(m)

    def test_odd_chains_vanish(self):
        for m in (3, 5, 7, 9):
            assert weight_w_computable(chain_graph(m)).integral == 0

    def test_three_vertex_star(self):
        g = parse_graph("1:(X,Y);2:(X,1);3:(X,1)")
        assert weight_w_computable(g).integral == F(1, 24)

    def test_unit(self):
        assert weight_w_computable(UNIT_GRAPH) == Weight(0, F(1), F(1))

    def test_strictness(self):
        with pytest.raises(WeightError):
            weight_w_computable(parse_graph("1:(Y,X)"))
        with pytest.raises(WeightError):
            weight_w_computable(graph_product(chain_graph(1), chain_graph(1)))

    def test_builder_route(self):
        g = build_w_computable([1, 1, 2])
        assert weight_w_computable(g).n == 4


class TestNormalizedWeights:
    def test_mirror_sign(self):
        assert normalized_weight(parse_graph("1:(Y,X)")).integral == F(-1, 2)

    def test_flip_sign(self):
        # chain2 with vertex 2 feet reversed
        assert normalized_weight(parse_graph("1:(X,Y);2:(1,X)")).integral == F(-1, 12)

    def test_lie_graph_weights_match_hausdorff(self):
        # the two degree-3 bracket monomials both weigh 1/12, matching their
        # series coefficients
        for text in ("[X,[X,Y]]", "[[X,Y],Y]"):
            g = lie_to_lgraph(parse_bracket(text))
            assert normalized_weight(g).integral == F(1, 12)

    def test_uncovered_graph_raises(self):
        g = lie_to_lgraph(parse_bracket("[[X,[X,Y]],[X,Y]]"))
        with pytest.raises(WeightError):
            normalized_weight(g)

    def test_loop_never_normalizes(self):
        with pytest.raises(WeightError):
            normalized_weight(parse_graph("1:(X,2);2:(Y,1)"))

    def test_consistency_with_direct(self):
        for m in (1, 2, 3):
            assert normalized_weight(chain_graph(m)) == weight_w_computable(chain_graph(m))


class TestMultiplicativity:
    def test_pair_of_singletons(self):
        g = graph_product(chain_graph(1), chain_graph(1))
        assert iterated_integral_weight(g) == Weight(2, F(1, 4), F(1, 8))
        assert product_weight(g) == Weight(2, F(1, 4), F(1, 8))

    def test_dual_route_agreement(self):
        primes = [chain_graph(1), chain_graph(2), chain_graph(3),
                  parse_graph("1:(X,Y);2:(X,1);3:(X,1)")]
        for parts in itertools.product(primes, repeat=2):
            g = graph_product(*parts)
            if g.n > 6:
                continue
            assert iterated_integral_weight(g) == product_weight(g)
        triple = graph_product(graph_product(primes[0], primes[1]), primes[1])
        assert iterated_integral_weight(triple) == product_weight(triple)

    def test_integral_multiplies_weight_does_not(self):
        a, b = chain_graph(1), chain_graph(2)
        g = graph_product(a, b)
        wa, wb = weight_w_computable(a), weight_w_computable(b)
        combined = iterated_integral_weight(g)
        assert combined.integral == wa.integral * wb.integral
        assert combined.weight == combined.integral / factorial(3)
        assert combined.weight != wa.weight * wb.weight

    def test_product_weight_handles_flipped_factors(self):
        g = graph_product(parse_graph("1:(Y,X)"), chain_graph(2))
        assert product_weight(g).integral == F(-1, 2) * F(1, 12)
