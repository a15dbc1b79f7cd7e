"""Ten acceptance checks, one test each, all at exact rational equality.

Run with -v to get one PASSED/FAILED line per criterion; each test also
prints its own summary line for -s runs.
"""

from fractions import Fraction as F
from itertools import product
from math import comb, factorial

import pytest

from dqw.bernoulli import bernoulli_number, bernoulli_polynomial
from dqw.freelie import hausdorff_linear_in_y, hausdorff_series
from dqw.graphs import (
    GROUND_X,
    GROUND_Y,
    AdmissibleGraph,
    chain_graph,
    classify,
    enumerate_graphs,
    graph_product,
    parse_graph,
    symmetry_count,
)
from dqw.kontsevich import (
    assemble_linear_star,
    assemble_xn_star_y,
    graph_to_operator,
    half_poisson,
)
from dqw.liealg import heisenberg, killing_matrix, solvable2, strictly_upper
from dqw.pbw import uea_star
from dqw.poly import Polynomial
from dqw.star import (
    cbh_product,
    check_associativity,
    check_equivalence,
    moyal_product,
    random_polynomials,
    uea_product,
    xn_star_y,
)
from dqw.weights import (
    iterated_integral_weight,
    pn_polynomial,
    weight_w_computable,
)


def test_c01_bernoulli_convolution_identities():
    for n in range(31):
        plain = sum(
            F(factorial(n), factorial(k) * factorial(n - k) * (n - k + 1))
            * bernoulli_number(k, "modified")
            for k in range(n + 1)
        )
        assert plain == 1, f"n={n}: {plain}"
        if n >= 1:
            alternating = sum(
                F(factorial(n), factorial(k) * factorial(n - k) * (n - k + 1))
                * (-1) ** k
                * bernoulli_number(k, "modified")
                for k in range(n + 1)
            )
            assert alternating == 0, f"n={n}: {alternating}"
    print("PASS 1: convolution = 1 and alternating convolution = 0 for n <= 30")


def test_c02_hausdorff_low_degrees_and_linear_part():
    H = hausdorff_series(3)
    assert dict(H.terms) == {
        ("X",): F(1),
        ("Y",): F(1),
        ("X", "Y"): F(1, 2),
        ("X", "X", "Y"): F(1, 12),
        ("X", "Y", "Y"): F(1, 12),
    }
    coeffs = hausdorff_linear_in_y(10)
    for k, coeff in enumerate(coeffs, start=1):
        assert coeff == bernoulli_number(k, "modified") / factorial(k), f"k={k}"
    print("PASS 2: Hausdorff degrees 1-3 exact; linear-in-y coefficients "
          "match modified Bernoulli / k! for k <= 10")


def test_c03_weights_and_polynomial_ladder():
    assert weight_w_computable(chain_graph(1)).integral == F(1, 2)
    assert weight_w_computable(chain_graph(2)).integral == F(1, 12)
    u = Polynomial.variable(1, 1)
    for n in range(13):
        via_transform = pn_polynomial(n)
        reflected = bernoulli_polynomial(n, "modified").substitute(1, -u) * F(
            1, factorial(n)
        )
        assert via_transform == reflected, f"n={n}"
    print("PASS 3: chain weights 1/2 and 1/12; transform ladder equals "
          "reflected Bernoulli polynomials / n! for n <= 12")


def test_c04_enumeration_counts():
    for n, expected in [(0, 1), (1, 2), (2, 36), (3, 1728)]:
        got = sum(1 for _ in enumerate_graphs(n))
        assert got == expected == (n * (n + 1)) ** n
    print("PASS 4: |G_n| = 1, 2, 36, 1728 by exhaustive generation")


def test_c05_closed_form_equals_straightening():
    for c in (heisenberg(), strictly_upper(4)):
        x = Polynomial.variable(c.dim, 1)
        y = Polynomial.variable(c.dim, 2)
        for n in range(1, 7):
            closed = xn_star_y(c, n, 6)
            straightened = uea_star(c, x**n, y, 6)
            assert closed == straightened, f"dim={c.dim} n={n}"
    print("PASS 5: x^n * y closed form equals the straightening oracle for "
          "n <= 6 on heisenberg and strictly_upper(4)")


def test_c06_chain_assembly_and_bookkeeping():
    for c in (heisenberg(), strictly_upper(4)):
        for n in range(1, 6):
            assert assemble_xn_star_y(c, n, 5) == xn_star_y(c, n, 5)
    for m in range(1, 9):
        chain = chain_graph(m)
        lhs = symmetry_count(chain) * weight_w_computable(chain).weight * F(1, 2**m)
        assert lhs == bernoulli_number(m, "modified") / factorial(m), f"m={m}"
    print("PASS 6: graph assembly of x^n * y equals the closed form for n <= 5; "
          "symmetry * weight * 2^-m identity for m <= 8")


def _generic_antisymmetric_4():
    rows = [
        [0, 1, F(1, 2), -1],
        [-1, 0, 2, F(1, 3)],
        [F(-1, 2), -2, 0, 1],
        [1, F(-1, 3), -1, 0],
    ]
    return tuple(tuple(F(v) for v in row) for row in rows)


def test_c07_associativity_with_negative_control():
    for matrix in (
        ((F(0), F(1), F(0), F(0)),
         (F(-1), F(0), F(0), F(0)),
         (F(0), F(0), F(0), F(1)),
         (F(0), F(0), F(-1), F(0))),
        _generic_antisymmetric_4(),
    ):
        star = moyal_product(matrix, 6)
        triples = list(
            zip(
                random_polynomials(4, 20, 3, 11),
                random_polynomials(4, 20, 3, 12),
                random_polynomials(4, 20, 3, 13),
            )
        )
        report = check_associativity(star, triples)
        assert report.ok and report.trials == 20
    c = strictly_upper(4)
    triples = list(
        zip(
            random_polynomials(6, 8, 2, 21),
            random_polynomials(6, 8, 2, 22),
            random_polynomials(6, 8, 2, 23),
        )
    )
    for star in (uea_product(c, 4), cbh_product(c, 4), assemble_linear_star(c, 4).star):
        report = check_associativity(star, triples)
        assert report.ok, star.name
    broken = cbh_product(solvable2(), 4, override={("X", "X", "Y"): F(1, 10)})
    x1 = Polynomial.variable(2, 1)
    x2 = Polynomial.variable(2, 2)
    bad = check_associativity(broken, [(x1**2, x1 * x2, x2**2)])
    assert not bad.ok
    residual_levels = [f["residual"][0]["eps"] for f in bad.failures]
    assert min(residual_levels) >= 2
    print("PASS 7: Moyal associative to eps^6 on 20 seeded triples (two matrices); "
          "uea/cbh/assembled associative to eps^4 on strictly_upper(4); "
          "perturbed eps^2 coefficient breaks associativity")


def test_c08_three_constructions_agree():
    for c in (heisenberg(), strictly_upper(4)):
        uea = uea_product(c, 5)
        cbh = cbh_product(c, 5)
        assembled = assemble_linear_star(c, 5).star
        first = check_equivalence(uea, cbh, degree_bound=5)
        second = check_equivalence(cbh, assembled, degree_bound=5)
        assert first.ok and second.ok, f"dim={c.dim}"
        assert first.pairs == second.pairs > 0
    print("PASS 8: straightening, Hausdorff, and graph-assembled products agree "
          "on all monomial pairs of total degree <= 5 at order 5 "
          "on heisenberg and strictly_upper(4)")


def test_c09_loop_vanishing_with_negative_control():
    pi = half_poisson(strictly_upper(5))
    checked = 0
    for n in (2, 3):
        for g in enumerate_graphs(n):
            if classify(g).loop:
                checked += 1
                assert graph_to_operator(g, pi, n).is_zero(), g
    assert checked == 16 + 1216
    s = solvable2()
    op = graph_to_operator(parse_graph("1:(X,2);2:(Y,1)"), half_poisson(s), 2)
    assert not op.is_zero()
    k = killing_matrix(s)
    terms = dict(op.sorted_terms())
    assert terms[(2, (1, 0), (1, 0))] == Polynomial.constant(2, k[0][0] * F(1, 4))
    print("PASS 9: all 1232 loop graphs with <= 3 vertices compile to zero on "
          "strictly_upper(5); the 2-loop on solvable2 is the Killing operator / 4")


def _labeled_w_computable(n: int) -> list[AdmissibleGraph]:
    out = []
    for base in range(1, n + 1):
        rest = [v for v in range(1, n + 1) if v != base]
        target_choices = [[t for t in range(1, n + 1) if t != v] for v in rest]
        for targets in product(*target_choices):
            edges = [None] * n
            edges[base - 1] = (GROUND_X, GROUND_Y)
            for v, t in zip(rest, targets):
                edges[v - 1] = (GROUND_X, t)
            g = AdmissibleGraph(tuple(edges))
            if classify(g).w_computable:
                out.append(g)
    return out


def test_c10_product_weights():
    wedge = chain_graph(1)
    square = graph_product(wedge, wedge)
    w = iterated_integral_weight(square)
    assert w.integral == F(1, 4)
    assert w.weight == F(1, 8) == F(1, factorial(2)) * F(1, 2) ** 2
    factors = {n: _labeled_w_computable(n) for n in range(1, 6)}
    pairs = 0
    for n1 in range(1, 6):
        for n2 in range(1, 7 - n1):
            for g1 in factors[n1]:
                for g2 in factors[n2]:
                    left = iterated_integral_weight(graph_product(g1, g2)).integral
                    right = (
                        weight_w_computable(g1).integral
                        * weight_w_computable(g2).integral
                    )
                    assert left == right, (g1, g2)
                    pairs += 1
    cube = graph_product(square, wedge)
    assert iterated_integral_weight(cube).integral == F(1, 8)
    print(f"PASS 10: product weight 1/8 for the doubled wedge; integral "
          f"multiplicativity on {pairs} products with total size <= 6")
