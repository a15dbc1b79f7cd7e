"""Compiling admissible graphs against a Poisson structure, and assembling
the graph expansion of the star product for linear structures.

`graph_to_operator` turns one graph into a bidifferential operator by summing
over edge colorings: vertex k with edges colored (i, j) contributes the
coefficient alpha^{ij}, differentiated once for every incoming edge's color;
edges into the grounds collect the derivative multi-indices acting on the two
arguments.  The search backtracks over the sparse support of alpha and prunes
as soon as a vertex coefficient differentiates to zero — on a linear
structure a second incoming derivative kills the branch immediately.

For a linear structure with strictly increasing brackets the compilation
sorts every graph into three bins: graphs with an aerial in-degree >= 2
vanish by the derivative count, graphs with a directed aerial cycle vanish
because every cyclic contraction of the structure constants is a trace of
strictly triangular matrices, and the rest — disjoint unions of rooted
binary trees — are exactly the graphs the symmetrized expansion generates.

`assemble_linear_star` builds the product as the symbol exponential of a
generator with one term per prime tree type.  The generator coefficients come
either from the Hausdorff series (grouped by canonical graph type with flip
signs) or from the integral weight engine (symmetry count times weight times
the half-structure normalisation), with uncovered types falling back and
recorded.  `assemble_xn_star_y` specialises to a power of a linear argument
against a linear argument, where only the chain types survive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .bidiff import BiDiffOp
from .freelie import free_lie, hausdorff_series, lie_to_lgraph
from .graphs import (
    GROUND_X,
    GROUND_Y,
    AdmissibleGraph,
    canonical_form,
    chain_graph,
    classify,
    enumerate_graphs,
    format_graph,
    symmetry_count,
)
from .liealg import PoissonStructure, StructureConstants, linear_poisson
from .poly import Polynomial
from .series import EpsSeries
from .star import StarProduct
from .weights import WeightError, normalized_weight, weight_w_computable

__all__ = [
    "KontsevichError",
    "graph_to_operator",
    "half_poisson",
    "loop_vanishing_report",
    "LoopReport",
    "assemble_xn_star_y",
    "prime_type_table",
    "TypeRow",
    "AssembledStar",
    "assemble_linear_star",
    "coverage_report",
    "CoverageReport",
]


class KontsevichError(ValueError):
    pass


def half_poisson(c: StructureConstants) -> PoissonStructure:
    """The linear structure of the algebra with every entry halved (the
    normalisation the graph expansion contracts against)."""
    pi = linear_poisson(c)
    entries = tuple(
        tuple(p * Fraction(1, 2) for p in row) for row in pi.entries
    )
    return PoissonStructure(pi.dim, "linear", entries)


def graph_to_operator(g: AdmissibleGraph, pi: PoissonStructure, order: int) -> BiDiffOp:
    """Sum over edge colorings of the graph, contracted against `pi`.

    The result sits at eps degree g.n (with n = 0 giving the identity).
    """
    d = pi.dim
    n = g.n
    if n == 0:
        return BiDiffOp.identity(d, order)
    if n > order:
        return BiDiffOp.zero(d, order)
    support = [
        (i, j, pi.entry(i, j))
        for i in range(1, d + 1)
        for j in range(1, d + 1)
        if not pi.entry(i, j).is_zero()
    ]
    terms: dict = {}

    def color(v: int, factors: dict, pending: dict, left: tuple, right: tuple):
        if v > n:
            total = Polynomial.one(d)
            for poly in factors.values():
                total = total * poly
            key = (n, left, right)
            acc = terms.get(key)
            acc = total if acc is None else acc + total
            if acc.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = acc
            return
        t1, t2 = g.edges[v - 1]
        for i, j, base in support:
            poly = base
            for idx in pending.get(v, ()):
                poly = poly.derive(idx)
                if poly.is_zero():
                    break
            if poly.is_zero():
                continue
            new_factors = dict(factors)
            new_pending = dict(pending)
            new_left, new_right = left, right
            new_factors[v] = poly
            dead = False
            for target, idx in ((t1, i), (t2, j)):
                if target == GROUND_X:
                    new_left = tuple(
                        e + 1 if m == idx else e for m, e in enumerate(new_left, start=1)
                    )
                elif target == GROUND_Y:
                    new_right = tuple(
                        e + 1 if m == idx else e for m, e in enumerate(new_right, start=1)
                    )
                elif target < v:
                    derived = new_factors[target].derive(idx)
                    if derived.is_zero():
                        dead = True
                        break
                    new_factors[target] = derived
                else:
                    new_pending[target] = new_pending.get(target, ()) + (idx,)
            if dead:
                continue
            color(v + 1, new_factors, new_pending, new_left, new_right)

    zero = (0,) * d
    color(1, {}, {}, zero, zero)
    return BiDiffOp(d, order, terms)


# -- loop analysis ---------------------------------------------------------------


@dataclass
class LoopReport:
    max_n: int
    checked: int = 0
    nonzero: list[str] = field(default_factory=list)

    @property
    def all_vanish(self) -> bool:
        return not self.nonzero

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "check": "loops",
            "max_n": self.max_n,
            "checked": self.checked,
            "all_vanish": self.all_vanish,
            "nonzero": self.nonzero,
        }


def loop_vanishing_report(c: StructureConstants, max_n: int) -> LoopReport:
    """Compile every loop graph with up to max_n vertices against the halved
    linear structure and record the ones that survive."""
    pi = half_poisson(c)
    report = LoopReport(max_n)
    for n in range(2, max_n + 1):
        for g in enumerate_graphs(n):
            if not classify(g).loop:
                continue
            report.checked += 1
            if not graph_to_operator(g, pi, n).is_zero():
                report.nonzero.append(format_graph(g))
    return report


# -- chains against a linear second argument ------------------------------------------


def assemble_xn_star_y(
    c: StructureConstants,
    n: int,
    order: int,
    x: Polynomial | None = None,
    y: Polynomial | None = None,
) -> EpsSeries:
    """Graph expansion of (x)^n * y for linear x, y.

    With a linear second argument every graph holding a vertex pair aimed at
    it twice dies, aerial in-degree >= 2 dies on the linear structure, loops
    die by triangularity, and a branching tree would need two (X, Y) leaves;
    what survives at eps^m is the m-chain alone, counted symmetry * weight.
    """
    if not c.is_triangular_nilpotent():
        raise KontsevichError(
            "the chain reduction needs strictly increasing brackets"
        )
    d = c.dim
    if d < 2 and (x is None or y is None):
        raise KontsevichError("default x, y need dim >= 2")
    x = Polynomial.variable(d, 1) if x is None else x
    y = Polynomial.variable(d, 2) if y is None else y
    if max((sum(e) for e in y.terms), default=0) > 1:
        raise KontsevichError("second argument must be linear")
    pi = half_poisson(c)
    f = x**n
    total = EpsSeries.from_polynomial(f * y, order)
    for m in range(1, order + 1):
        chain = chain_graph(m)
        w = weight_w_computable(chain).weight
        if not w:
            continue
        count = symmetry_count(chain)
        op = graph_to_operator(chain, pi, order)
        total = total + op.apply(f, y) * (w * count)
    return total


# -- the assembled star product ---------------------------------------------------------


@dataclass(frozen=True)
class TypeRow:
    graph: str
    n: int
    omega: Fraction
    source: str  # "hausdorff" | "integral" | "zeroed-loop"
    symmetry: int
    integral: Fraction | None
    words: tuple[str, ...] = ()


@lru_cache(maxsize=None)
def prime_type_table(order: int) -> tuple[tuple[AdmissibleGraph, Fraction, tuple], ...]:
    """Canonical prime tree types from the Hausdorff series up to eps^order.

    Rows are (canonical graph, summed signed coefficient, contributing words);
    degree-d Lyndon monomials land at eps degree d - 1.
    """
    fl = free_lie(("X", "Y"))
    H = hausdorff_series(order + 1)
    table: dict[AdmissibleGraph, Fraction] = {}
    words: dict[AdmissibleGraph, list] = {}
    for word, coeff in sorted(H.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
        if len(word) < 2:
            continue
        graph = lie_to_lgraph(fl.bracket_tree(word))
        canon, sign = canonical_form(graph)
        table[canon] = table.get(canon, Fraction(0)) + sign * coeff
        words.setdefault(canon, []).append("".join(word))
    return tuple(
        (graph, omega, tuple(words[graph]))
        for graph, omega in sorted(
            table.items(), key=lambda kv: (kv[0].n, kv[0].edges)
        )
    )


def _integral_omega(graph: AdmissibleGraph) -> Fraction | None:
    """symmetry * (integral / n!) * (1/2)^n, when the engine covers the type."""
    try:
        w = normalized_weight(graph)
    except WeightError:
        return None
    return symmetry_count(graph) * w.weight * Fraction(1, 2**graph.n)


@dataclass
class AssembledStar:
    star: StarProduct
    rows: list[TypeRow]
    uncovered: list[str]
    loop_rows: list[TypeRow]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "product": self.star.name,
            "order": self.star.order,
            "types": [
                {
                    "graph": r.graph,
                    "n": r.n,
                    "omega": str(r.omega),
                    "source": r.source,
                    "symmetry": r.symmetry,
                    "integral": None if r.integral is None else str(r.integral),
                    "words": list(r.words),
                }
                for r in self.rows
            ],
            "uncovered": self.uncovered,
            "loop_types": [
                {"graph": r.graph, "n": r.n, "symmetry": r.symmetry, "source": r.source}
                for r in self.loop_rows
            ],
        }


def _loop_type_rows(c: StructureConstants, order: int) -> list[TypeRow]:
    """Canonical loop types with up to min(order, 3) vertices, each verified
    to compile to zero on the algebra's halved structure."""
    pi = half_poisson(c)
    rows: list[TypeRow] = []
    seen: set[AdmissibleGraph] = set()
    for n in range(2, min(order, 3) + 1):
        for g in enumerate_graphs(n):
            if not classify(g).loop:
                continue
            canon, _ = canonical_form(g)
            if canon in seen:
                continue
            seen.add(canon)
            if not graph_to_operator(canon, pi, n).is_zero():
                raise KontsevichError(
                    f"loop type {format_graph(canon)} does not vanish on this algebra"
                )
            rows.append(
                TypeRow(
                    graph=format_graph(canon),
                    n=n,
                    omega=Fraction(0),
                    source="zeroed-loop",
                    symmetry=symmetry_count(canon),
                    integral=None,
                )
            )
    return rows


def assemble_linear_star(
    c: StructureConstants,
    order: int,
    weight_source: str = "hausdorff",
    include_loop_rows: bool = True,
) -> AssembledStar:
    """Star product as exp of the prime-type generator.

    weight_source "hausdorff" reads every generator coefficient off the
    series; "integral" replaces it with symmetry * weight * 2^-n wherever the
    weight engine can normalise the type, falling back (and recording the
    type under `uncovered`) where it cannot.
    """
    if weight_source not in ("hausdorff", "integral"):
        raise KontsevichError(f"unknown weight source {weight_source!r}")
    if not c.is_triangular_nilpotent():
        raise KontsevichError("assembly needs strictly increasing brackets")
    pi = linear_poisson(c)
    rows: list[TypeRow] = []
    uncovered: list[str] = []
    generator = BiDiffOp.zero(c.dim, order)
    for graph, hausdorff_omega, contributing in prime_type_table(order):
        integral_omega = _integral_omega(graph)
        if weight_source == "integral":
            if integral_omega is None:
                uncovered.append(format_graph(graph))
                omega, source = hausdorff_omega, "hausdorff"
            else:
                omega, source = integral_omega, "integral"
        else:
            omega, source = hausdorff_omega, "hausdorff"
        rows.append(
            TypeRow(
                graph=format_graph(graph),
                n=graph.n,
                omega=omega,
                source=source,
                symmetry=symmetry_count(graph),
                integral=None if integral_omega is None else integral_omega,
                words=contributing,
            )
        )
        if omega:
            generator = generator + graph_to_operator(graph, pi, order).scale(omega)
    op = generator.exp()
    star = StarProduct("kontsevich", c.dim, order, op.apply, op)
    loop_rows = _loop_type_rows(c, order) if include_loop_rows else []
    return AssembledStar(star, rows, uncovered, loop_rows)


# -- the classification actually exhausts the graphs -------------------------------------


@dataclass
class CoverageReport:
    n: int
    total: int = 0
    sym_admissible: int = 0
    loop: int = 0
    high_in_degree: int = 0
    loops_vanish: bool = True
    high_in_degree_vanishes: bool = True

    @property
    def consistent(self) -> bool:
        return (
            self.total == self.sym_admissible + self.loop + self.high_in_degree
            and self.loops_vanish
            and self.high_in_degree_vanishes
        )

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "check": "coverage",
            "n": self.n,
            "total": self.total,
            "sym_admissible": self.sym_admissible,
            "loop": self.loop,
            "high_in_degree": self.high_in_degree,
            "loops_vanish": self.loops_vanish,
            "high_in_degree_vanishes": self.high_in_degree_vanishes,
            "consistent": self.consistent,
        }


def coverage_report(c: StructureConstants, n: int, compile_all: bool = True) -> CoverageReport:
    """Sort all graphs with n aerial vertices into the three bins and verify
    that the two discarded bins compile to zero on the algebra."""
    pi = half_poisson(c)
    report = CoverageReport(n)
    for g in enumerate_graphs(n):
        report.total += 1
        cls = classify(g)
        if cls.sym_admissible:
            report.sym_admissible += 1
            continue
        if cls.loop:
            report.loop += 1
            if compile_all and not graph_to_operator(g, pi, n).is_zero():
                report.loops_vanish = False
            continue
        report.high_in_degree += 1
        if compile_all and not graph_to_operator(g, pi, n).is_zero():
            report.high_in_degree_vanishes = False
    return report
