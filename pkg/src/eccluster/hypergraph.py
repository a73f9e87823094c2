"""Edge-colored hypergraphs and the clustering objectives defined on them.

An instance is a hypergraph whose edges each carry one color out of ``k``.
A solution assigns one color to every node; an edge is satisfied when all of
its nodes carry the edge's color.  Everything downstream (relaxations,
rounding, branching) works over the types in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Edge",
    "EdgeColoredHypergraph",
    "Coloring",
    "ConflictGraph",
    "Problem",
    "MAX",
    "MIN",
    "COLORFAIR",
    "pmean",
    "protected",
    "ParseError",
    "CoverViolation",
    "parse_instance",
    "is_satisfied",
    "color_error_vector",
    "objective",
    "build_conflict_graph",
    "find_conflict",
    "extend_coloring",
    "triangle_gadget",
]

#: A coloring is a total assignment, node v (1-based) -> entry [v-1] in [1, k].
Coloring = tuple[int, ...]


class ParseError(ValueError):
    """Raised on malformed instance text; message carries the line number."""


class CoverViolation(ValueError):
    """Raised when a deletion set leaves two conflicting edges alive."""


@dataclass(frozen=True)
class Edge:
    """One hyperedge: a color, a nonnegative weight, and its node set."""

    color: int
    weight: float
    nodes: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.nodes) == 0:
            raise ValueError("edge has no nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node within one edge")
        if not math.isfinite(self.weight) or self.weight < 0:
            raise ValueError(f"edge weight must be finite and >= 0, got {self.weight}")
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))


@dataclass(frozen=True)
class EdgeColoredHypergraph:
    """Validated instance: ``node_count`` nodes, ``color_count`` colors, edges in file order."""

    node_count: int
    color_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ValueError("node_count must be positive")
        if self.color_count < 1:
            raise ValueError("color_count must be positive")
        object.__setattr__(self, "edges", tuple(self.edges))
        for i, e in enumerate(self.edges):
            if not 1 <= e.color <= self.color_count:
                raise ValueError(f"edge {i}: color {e.color} out of range [1, {self.color_count}]")
            for v in e.nodes:
                if not 1 <= v <= self.node_count:
                    raise ValueError(f"edge {i}: node {v} out of range [1, {self.node_count}]")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def rank(self) -> int:
        """Largest edge size (2 for ordinary graphs); 1 if there are no edges."""
        return max((len(e.nodes) for e in self.edges), default=1)

    @cached_property
    def total_weight(self) -> float:
        return float(sum(e.weight for e in self.edges))

    @cached_property
    def color_classes(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids per color, index c-1, each ascending."""
        classes: list[list[int]] = [[] for _ in range(self.color_count)]
        for i, e in enumerate(self.edges):
            classes[e.color - 1].append(i)
        return tuple(tuple(c) for c in classes)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Incident edge ids per node, index v-1, each ascending."""
        inc: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, e in enumerate(self.edges):
            for v in e.nodes:
                inc[v - 1].append(i)
        return tuple(tuple(sorted(ids)) for ids in inc)


@dataclass(frozen=True)
class ConflictGraph:
    """One vertex per hyperedge; adjacency between overlapping, distinctly colored pairs."""

    edge_count: int
    adjacency: frozenset[tuple[int, int]]
    colors: tuple[int, ...]

    def neighbors(self, e: int) -> tuple[int, ...]:
        out = [b if a == e else a for (a, b) in self.adjacency if e in (a, b)]
        return tuple(sorted(out))


@dataclass(frozen=True)
class Problem:
    """Which objective to evaluate or optimize.

    ``kind`` is one of max, min, pmean, colorfair, protected.  ``p`` belongs to
    pmean (math.inf allowed), ``protected_color`` and ``budget`` to protected.
    """

    kind: str
    p: Optional[float] = None
    protected_color: Optional[int] = None
    budget: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in ("max", "min", "pmean", "colorfair", "protected"):
            raise ValueError(f"unknown problem kind {self.kind!r}")
        if self.kind == "pmean":
            if self.p is None or not (self.p > 0):
                raise ValueError("pmean requires p > 0 (math.inf allowed)")
        elif self.p is not None:
            raise ValueError("p is only meaningful for pmean")
        if self.kind == "protected":
            if self.protected_color is None or self.protected_color < 1:
                raise ValueError("protected requires a protected color >= 1")
            if self.budget is not None and self.budget < 0:
                raise ValueError("budget must be >= 0")
        elif self.protected_color is not None or self.budget is not None:
            raise ValueError("protected_color/budget only apply to the protected problem")


MAX = Problem("max")
MIN = Problem("min")
COLORFAIR = Problem("colorfair")


def pmean(p: float) -> Problem:
    """The (sum_c m_c^p)^(1/p) objective over per-color unsatisfied weights."""
    return Problem("pmean", p=float(p))


def protected(protected_color: int, budget: Optional[float] = None) -> Problem:
    """Minimize total unsatisfied weight, tracking one protected color's share."""
    return Problem("protected", protected_color=protected_color, budget=budget)


def parse_instance(text: str) -> EdgeColoredHypergraph:
    """Parse the whitespace instance format into a validated hypergraph.

    Format (UTF-8, LF or CRLF): any line starting with ``#`` is a comment and
    blank lines are ignored.  The first data line is the header ``n m k``.
    Each of the following m data lines describes one edge as
    ``c w s v1 v2 ... vs`` with color c in [1,k], weight w >= 0, and s
    distinct node ids in [1,n].  Errors report 1-based line numbers.
    """
    header: Optional[tuple[int, int, int]] = None
    edges: list[Edge] = []
    expected_edges = 0

    def fail(lineno: int, msg: str) -> None:
        raise ParseError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 3:
                fail(lineno, f"header must be 'n m k', got {len(tokens)} tokens")
            try:
                n, m, k = (int(t) for t in tokens)
            except ValueError:
                fail(lineno, f"non-numeric token in header {tokens!r}")
            if n < 1 or m < 0 or k < 1:
                fail(lineno, f"header values out of range: n={n} m={m} k={k}")
            header = (n, m, k)
            expected_edges = m
            continue
        if len(edges) >= expected_edges:
            fail(lineno, f"expected exactly {expected_edges} edge lines, found extra data")
        n, _, k = header
        if len(tokens) < 3:
            fail(lineno, "edge line needs at least 'c w s' fields")
        try:
            color = int(tokens[0])
        except ValueError:
            fail(lineno, f"non-numeric color token {tokens[0]!r}")
        try:
            weight = float(tokens[1])
        except ValueError:
            fail(lineno, f"non-numeric weight token {tokens[1]!r}")
        try:
            size = int(tokens[2])
        except ValueError:
            fail(lineno, f"non-numeric size token {tokens[2]!r}")
        if size < 1:
            fail(lineno, f"edge size must be >= 1, got {size}")
        if len(tokens) != 3 + size:
            fail(lineno, f"expected {size} node ids, found {len(tokens) - 3}")
        try:
            nodes = tuple(int(t) for t in tokens[3:])
        except ValueError:
            fail(lineno, "non-numeric node id")
        if not 1 <= color <= k:
            fail(lineno, f"color {color} out of range [1, {k}]")
        if not (math.isfinite(weight) and weight >= 0):
            fail(lineno, f"weight must be finite and >= 0, got {tokens[1]}")
        if len(set(nodes)) != len(nodes):
            fail(lineno, "duplicate node within one edge")
        for v in nodes:
            if not 1 <= v <= n:
                fail(lineno, f"node {v} out of range [1, {n}]")
        edges.append(Edge(color=color, weight=weight, nodes=nodes))

    if header is None:
        raise ParseError("line 1: empty document, missing 'n m k' header")
    if len(edges) != expected_edges:
        raise ParseError(
            f"line {len(text.splitlines()) + 1}: expected {expected_edges} edge lines, found {len(edges)}"
        )
    n, _, k = header
    return EdgeColoredHypergraph(node_count=n, color_count=k, edges=tuple(edges))


def is_satisfied(h: EdgeColoredHypergraph, lam: Sequence[int], e: int) -> bool:
    """True iff every node of edge ``e`` carries the edge's color."""
    if not 0 <= e < h.edge_count:
        raise IndexError(f"unknown edge id {e}")
    edge = h.edges[e]
    return all(lam[v - 1] == edge.color for v in edge.nodes)


def _check_coloring(h: EdgeColoredHypergraph, lam: Sequence[int]) -> None:
    if len(lam) != h.node_count:
        raise ValueError(f"coloring has {len(lam)} entries, instance has {h.node_count} nodes")
    for v, c in enumerate(lam, start=1):
        if not 1 <= c <= h.color_count:
            raise ValueError(f"node {v}: color {c} out of range [1, {h.color_count}]")


def color_error_vector(h: EdgeColoredHypergraph, lam: Sequence[int]) -> np.ndarray:
    """Per-color unsatisfied weight, entry c-1 for color c."""
    _check_coloring(h, lam)
    out = np.zeros(h.color_count)
    for e, edge in enumerate(h.edges):
        if not is_satisfied(h, lam, e):
            out[edge.color - 1] += edge.weight
    return out


def objective(h: EdgeColoredHypergraph, lam: Sequence[int], problem: Problem):
    """Evaluate a coloring under a problem; protected returns (total, protected) pair."""
    errors = color_error_vector(h, lam)
    unsat = float(errors.sum())
    if problem.kind == "max":
        return h.total_weight - unsat
    if problem.kind == "min":
        return unsat
    if problem.kind == "colorfair":
        return float(errors.max()) if h.color_count else 0.0
    if problem.kind == "pmean":
        p = problem.p
        assert p is not None
        if math.isinf(p):
            return float(errors.max())
        return float(np.sum(errors**p) ** (1.0 / p))
    if problem.kind == "protected":
        c1 = problem.protected_color
        assert c1 is not None
        if not 1 <= c1 <= h.color_count:
            raise ValueError(f"protected color {c1} out of range [1, {h.color_count}]")
        return unsat, float(errors[c1 - 1])
    raise ValueError(f"unknown problem kind {problem.kind!r}")


def build_conflict_graph(h: EdgeColoredHypergraph) -> ConflictGraph:
    """Adjacency between every pair of overlapping, distinctly colored edges."""
    pairs: set[tuple[int, int]] = set()
    for ids in h.incidence:
        for a_pos in range(len(ids)):
            a = ids[a_pos]
            for b in ids[a_pos + 1 :]:
                if h.edges[a].color != h.edges[b].color:
                    pairs.add((a, b))
    return ConflictGraph(
        edge_count=h.edge_count,
        adjacency=frozenset(pairs),
        colors=tuple(e.color for e in h.edges),
    )


def find_conflict(
    h: EdgeColoredHypergraph, alive: Iterable[int]
) -> Optional[tuple[int, int, int]]:
    """First (node, edge, edge) conflict among alive edges.

    Scan order is deterministic: ascending node id, then the lexicographically
    smallest conflicting edge-id pair at that node.  Returns None when the
    alive set is conflict-free.
    """
    alive_set = set(alive)
    for v in range(1, h.node_count + 1):
        ids = [e for e in h.incidence[v - 1] if e in alive_set]
        if len(ids) < 2:
            continue
        first = ids[0]
        first_color = h.edges[first].color
        for e in ids[1:]:
            if h.edges[e].color != first_color:
                return (v, first, e)
    return None


def extend_coloring(
    h: EdgeColoredHypergraph,
    s: Iterable[int],
    fallback: Optional[Sequence[int]] = None,
) -> Coloring:
    """Coloring that satisfies every edge outside the deletion set ``s``.

    Each node incident to a surviving edge takes the survivors' common color;
    two surviving edges demanding different colors at one node raise
    CoverViolation.  Uncommitted nodes take ``fallback[v-1]`` when a fallback
    vector is given, else color 1.
    """
    dead = set(s)
    assigned: list[Optional[int]] = [None] * h.node_count
    assigner: list[int] = [-1] * h.node_count
    for e, edge in enumerate(h.edges):
        if e in dead:
            continue
        for v in edge.nodes:
            cur = assigned[v - 1]
            if cur is None:
                assigned[v - 1] = edge.color
                assigner[v - 1] = e
            elif cur != edge.color:
                raise CoverViolation(
                    f"cover violation: surviving edges {assigner[v - 1]} and {e} "
                    f"conflict at node {v}"
                )
    out: list[int] = []
    for v in range(h.node_count):
        c = assigned[v]
        if c is None:
            c = int(fallback[v]) if fallback is not None else 1
            if not 1 <= c <= h.color_count:
                raise ValueError(f"fallback color {c} out of range [1, {h.color_count}]")
        out.append(c)
    return tuple(out)


def triangle_gadget() -> EdgeColoredHypergraph:
    """Three nodes, three two-node edges in three distinct colors, unit weights.

    The smallest instance where every pair of edges conflicts; its fractional
    relaxations sit at half-integral optima, making it the standard worst case
    for the min-max color objective.
    """
    return EdgeColoredHypergraph(
        node_count=3,
        color_count=3,
        edges=(
            Edge(color=1, weight=1.0, nodes=(1, 2)),
            Edge(color=2, weight=1.0, nodes=(2, 3)),
            Edge(color=3, weight=1.0, nodes=(1, 3)),
        ),
    )
