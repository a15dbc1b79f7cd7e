"""Admissible diagrams: two ground vertices X, Y plus n aerial vertices,
each aerial vertex carrying an ordered pair of edges to distinct targets.

Targets are encoded as ints: GROUND_X = -2, GROUND_Y = -1, aerial vertices
1..n.  Natural int order therefore gives the target order X < Y < 1 < ... < n
used for lexicographic enumeration and canonical forms.

Text form: "1:(X,Y);2:(X,1)" (the empty string is the vertex-free unit graph).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import factorial
from typing import Iterator, Sequence

GROUND_X = -2
GROUND_Y = -1

__all__ = [
    "GROUND_X",
    "GROUND_Y",
    "AdmissibleGraph",
    "GraphClass",
    "GraphError",
    "classify",
    "enumerate_graphs",
    "graph_product",
    "factorize",
    "decompose_nonloop",
    "rebuild_from_peel",
    "build_w_computable",
    "chain_graph",
    "symmetry_count",
    "canonical_form",
    "mirror",
    "flip_edges",
    "is_disjoint_binary_forest",
    "parse_graph",
    "format_graph",
    "to_dot",
]


class GraphError(ValueError):
    pass


EdgePair = tuple[int, int]


@dataclass(frozen=True)
class AdmissibleGraph:
    edges: tuple[EdgePair, ...]

    def __post_init__(self):
        n = len(self.edges)
        for k, pair in enumerate(self.edges, start=1):
            if len(pair) != 2:
                raise GraphError(f"vertex {k}: edge pair must have two targets")
            a, b = pair
            for t in pair:
                if not (t in (GROUND_X, GROUND_Y) or 1 <= t <= n):
                    raise GraphError(f"vertex {k}: target {t} out of range")
                if t == k:
                    raise GraphError(f"vertex {k}: self-loop")
            if a == b:
                raise GraphError(f"vertex {k}: the two edge targets must differ")

    @property
    def n(self) -> int:
        return len(self.edges)

    def aerial_targets(self, k: int) -> list[int]:
        return [t for t in self.edges[k - 1] if t >= 1]

    def in_degree(self, k: int) -> int:
        return sum(1 for pair in self.edges for t in pair if t == k)

    def __repr__(self):
        return f"AdmissibleGraph({format_graph(self)!r})"


UNIT_GRAPH = AdmissibleGraph(())


@dataclass(frozen=True)
class GraphClass:
    loop: bool
    prime: bool
    sym_admissible: bool
    lie_admissible: bool
    w_computable: bool


def _has_directed_cycle(g: AdmissibleGraph) -> bool:
    color = {}  # 0 in progress, 1 done

    def visit(v: int) -> bool:
        state = color.get(v)
        if state == 0:
            return True
        if state == 1:
            return False
        color[v] = 0
        for t in g.aerial_targets(v):
            if visit(t):
                return True
        color[v] = 1
        return False

    return any(visit(v) for v in range(1, g.n + 1))


def _aerial_components(g: AdmissibleGraph) -> list[list[int]]:
    adjacency = {v: set() for v in range(1, g.n + 1)}
    for v in range(1, g.n + 1):
        for t in g.aerial_targets(v):
            adjacency[v].add(t)
            adjacency[t].add(v)
    seen: set[int] = set()
    components = []
    for v in range(1, g.n + 1):
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        components.append(sorted(comp))
    return components


def classify(g: AdmissibleGraph) -> GraphClass:
    loop = _has_directed_cycle(g)
    prime = g.n >= 1 and len(_aerial_components(g)) == 1
    sym = (not loop) and all(g.in_degree(v) <= 1 for v in range(1, g.n + 1))
    base_pairs = [pair for pair in g.edges if pair == (GROUND_X, GROUND_Y)]
    others_ok = all(
        pair == (GROUND_X, GROUND_Y) or (pair[0] == GROUND_X and pair[1] >= 1)
        for pair in g.edges
    )
    w_comp = g.n >= 1 and not loop and len(base_pairs) == 1 and others_ok
    return GraphClass(
        loop=loop,
        prime=prime,
        sym_admissible=sym,
        lie_admissible=sym and prime,
        w_computable=w_comp,
    )


def is_disjoint_binary_forest(g: AdmissibleGraph) -> bool:
    """Independent structural check: after splitting the grounds into one leaf
    per incoming edge, the aerial vertices must form a disjoint union of binary
    trees (each vertex reachable exactly once from the in-degree-0 roots)."""
    roots = [v for v in range(1, g.n + 1) if g.in_degree(v) == 0]
    visits = {v: 0 for v in range(1, g.n + 1)}
    stack = list(roots)
    for r in roots:
        visits[r] += 1
    while stack:
        v = stack.pop()
        if visits[v] > 1:
            return False
        for t in g.aerial_targets(v):
            visits[t] += 1
            if visits[t] > 1:
                return False
            stack.append(t)
    return all(count == 1 for count in visits.values())


def enumerate_graphs(n: int) -> Iterator[AdmissibleGraph]:
    """All admissible graphs with n aerial vertices, in lexicographic order of
    their edge-target tuples (target order X < Y < 1 < ... < n)."""
    if n < 0:
        raise GraphError("n must be >= 0")
    if n == 0:
        yield UNIT_GRAPH
        return
    per_vertex = []
    for k in range(1, n + 1):
        targets = [GROUND_X, GROUND_Y] + [v for v in range(1, n + 1) if v != k]
        pairs = [(a, b) for a in targets for b in targets if a != b]
        pairs.sort()
        per_vertex.append(pairs)
    for combo in itertools.product(*per_vertex):
        yield AdmissibleGraph(tuple(combo))


def graph_product(a: AdmissibleGraph, b: AdmissibleGraph) -> AdmissibleGraph:
    """Concatenate two graphs over shared grounds; b's aerial labels shift up."""
    shift = a.n

    def lift(t: int) -> int:
        return t + shift if t >= 1 else t

    edges = a.edges + tuple((lift(p), lift(q)) for p, q in b.edges)
    return AdmissibleGraph(edges)


def factorize(g: AdmissibleGraph) -> list[AdmissibleGraph]:
    """Prime components (aerial connectivity classes with their ground feet),
    ordered by smallest original vertex label and relabeled 1..k each."""
    factors = []
    for comp in _aerial_components(g):
        relabel = {old: new for new, old in enumerate(comp, start=1)}
        edges = tuple(
            tuple(relabel[t] if t >= 1 else t for t in g.edges[old - 1])
            for old in comp
        )
        factors.append(AdmissibleGraph(edges))
    return factors


def _heights(g: AdmissibleGraph) -> dict[int, int]:
    if _has_directed_cycle(g):
        raise GraphError("loop graphs have no height function")
    memo: dict[int, int] = {}

    def height(v: int) -> int:
        if v in memo:
            return memo[v]
        memo[v] = 1 + max((height(t) for t in g.aerial_targets(v)), default=0)
        return memo[v]

    for v in range(1, g.n + 1):
        height(v)
    return memo


def decompose_nonloop(g: AdmissibleGraph) -> list[tuple[int, EdgePair]]:
    """Peel free aerial vertices in order of decreasing height (original labels
    kept; ties broken by smallest label).  Replaying the list in reverse via
    `rebuild_from_peel` reconstructs the graph."""
    heights = _heights(g)
    remaining = {v: g.edges[v - 1] for v in range(1, g.n + 1)}
    order = sorted(remaining, key=lambda v: (-heights[v], v))
    peel = []
    for v in order:
        if any(t == v for pair in remaining.values() for t in pair):
            raise GraphError(f"internal: vertex {v} peeled while still referenced")
        peel.append((v, remaining.pop(v)))
    return peel


def rebuild_from_peel(peel: Sequence[tuple[int, EdgePair]]) -> AdmissibleGraph:
    edges: dict[int, EdgePair] = {}
    for v, pair in reversed(peel):
        edges[v] = pair
    if sorted(edges) != list(range(1, len(edges) + 1)):
        raise GraphError("peel does not cover vertices 1..n")
    return AdmissibleGraph(tuple(edges[v] for v in sorted(edges)))


def build_w_computable(concatenations: Sequence[int]) -> AdmissibleGraph:
    """Base wedge on the grounds, then one vertex per entry with feet
    (X, entry); each entry must name an existing aerial vertex."""
    edges: list[EdgePair] = [(GROUND_X, GROUND_Y)]
    for i, target in enumerate(concatenations, start=2):
        if not 1 <= target <= i - 1:
            raise GraphError(f"concatenation target {target} does not exist yet")
        edges.append((GROUND_X, target))
    return AdmissibleGraph(tuple(edges))


def chain_graph(m: int) -> AdmissibleGraph:
    """The m-vertex chain: wedge, then each vertex hooked onto the previous one."""
    if m < 0:
        raise GraphError("m must be >= 0")
    if m == 0:
        return UNIT_GRAPH
    return build_w_computable(list(range(1, m)))


def _relabeled_edges(g: AdmissibleGraph, perm: Sequence[int]) -> list[EdgePair]:
    """perm maps old label k -> perm[k-1]; returns the edge table of the
    relabeled graph (entry i holds the pair of new vertex i+1)."""
    n = g.n
    out: list[EdgePair] = [None] * n  # type: ignore[list-item]
    for old in range(1, n + 1):
        pair = tuple(perm[t - 1] if t >= 1 else t for t in g.edges[old - 1])
        out[perm[old - 1] - 1] = pair  # type: ignore[index]
    return out  # type: ignore[return-value]


def symmetry_count(g: AdmissibleGraph) -> int:
    """Number of labeled, edge-ordered admissible graphs sharing g's
    topological type: n! 2^n divided by the automorphism count of the
    unlabeled, edge-unordered type."""
    n = g.n
    if n == 0:
        return 1
    unordered = [frozenset(pair) for pair in g.edges]
    stabilizer = 0
    for perm in itertools.permutations(range(1, n + 1)):
        for old in range(1, n + 1):
            mapped = frozenset(
                perm[t - 1] if t >= 1 else t for t in g.edges[old - 1]
            )
            if mapped != unordered[perm[old - 1] - 1]:
                break
        else:
            stabilizer += 1
    total = factorial(n) * 2**n
    assert total % stabilizer == 0
    return total // stabilizer


def canonical_form(g: AdmissibleGraph) -> tuple[AdmissibleGraph, int]:
    """Minimal edge tuple over relabelings and edge flips.

    Returns (canonical graph, parity): parity is (-1)^(flips used) for the
    group elements reaching the minimum, or 0 when both parities reach it
    (which forces any flip-antisymmetric quantity on the type to vanish).
    """
    n = g.n
    if n == 0:
        return g, 1
    best: tuple[EdgePair, ...] | None = None
    parities: set[int] = set()
    for perm in itertools.permutations(range(1, n + 1)):
        flips = 0
        table = []
        for pair in _relabeled_edges(g, perm):
            if pair[0] > pair[1]:
                pair = (pair[1], pair[0])
                flips += 1
            table.append(pair)
        candidate = tuple(table)
        if best is None or candidate < best:
            best = candidate
            parities = {(-1) ** flips}
        elif candidate == best:
            parities.add((-1) ** flips)
    sign = parities.pop() if len(parities) == 1 else 0
    return AdmissibleGraph(best), sign  # type: ignore[arg-type]


def mirror(g: AdmissibleGraph) -> tuple[AdmissibleGraph, int]:
    """Swap the two grounds; the weight picks up (-1)^n."""
    swap = {GROUND_X: GROUND_Y, GROUND_Y: GROUND_X}
    edges = tuple(tuple(swap.get(t, t) for t in pair) for pair in g.edges)
    return AdmissibleGraph(edges), (-1) ** g.n


def flip_edges(g: AdmissibleGraph, vertices: Sequence[int]) -> tuple[AdmissibleGraph, int]:
    """Swap the ordered edge pair at each listed vertex; each flip is a -1."""
    chosen = set(vertices)
    for v in chosen:
        if not 1 <= v <= g.n:
            raise GraphError(f"vertex {v} out of range")
    edges = tuple(
        (pair[1], pair[0]) if k in chosen else pair
        for k, pair in enumerate(g.edges, start=1)
    )
    return AdmissibleGraph(edges), (-1) ** len(chosen)


# -- text and dot forms ------------------------------------------------------

_VERTEX_RE = re.compile(r"^(\d+):\(([^,()]+),([^,()]+)\)$")


def _target_to_text(t: int) -> str:
    if t == GROUND_X:
        return "X"
    if t == GROUND_Y:
        return "Y"
    return str(t)


def _target_from_text(s: str) -> int:
    s = s.strip()
    if s == "X":
        return GROUND_X
    if s == "Y":
        return GROUND_Y
    if s.isdigit():
        return int(s)
    raise GraphError(f"bad edge target {s!r}")


def format_graph(g: AdmissibleGraph) -> str:
    return ";".join(
        f"{k}:({_target_to_text(a)},{_target_to_text(b)})"
        for k, (a, b) in enumerate(g.edges, start=1)
    )


def parse_graph(text: str) -> AdmissibleGraph:
    text = text.strip()
    if not text:
        return UNIT_GRAPH
    entries = {}
    for chunk in text.split(";"):
        chunk = chunk.strip().replace(" ", "")
        m = _VERTEX_RE.match(chunk)
        if not m:
            raise GraphError(f"bad vertex entry {chunk!r} (expected k:(a,b))")
        k = int(m.group(1))
        if k in entries:
            raise GraphError(f"vertex {k} listed twice")
        entries[k] = (_target_from_text(m.group(2)), _target_from_text(m.group(3)))
    if sorted(entries) != list(range(1, len(entries) + 1)):
        raise GraphError("vertex labels must cover 1..n")
    return AdmissibleGraph(tuple(entries[k] for k in sorted(entries)))


def to_dot(g: AdmissibleGraph) -> str:
    lines = ["digraph admissible {"]
    lines.append('  X [shape=box];')
    lines.append('  Y [shape=box];')
    lines.append("  { rank=sink; X; Y; }")
    for k in range(1, g.n + 1):
        lines.append(f"  v{k} [shape=circle, label=\"{k}\"];")
    for k, (a, b) in enumerate(g.edges, start=1):
        for target, style in ((a, "solid"), (b, "dashed")):
            name = _target_to_text(target)
            node = name if target < 0 else f"v{name}"
            lines.append(f"  v{k} -> {node} [style={style}];")
    lines.append("}")
    return "\n".join(lines)
