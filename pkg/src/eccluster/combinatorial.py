"""Combinatorial solvers: greedy matching, bounded-depth branching, brute force.

These need no linear algebra.  The matching pass gives a linear-time factor-k
approximation for the min-max color objective; the branching searches decide
budgeted feasibility questions exactly in time exponential only in the
budget; brute force enumerates all colorings and is the ground truth at desk
scale.
"""

from __future__ import annotations

import itertools
import math
from typing import Optional

from .hypergraph import (
    Coloring,
    EdgeColoredHypergraph,
    Problem,
    extend_coloring,
    find_conflict,
)

_BRANCH_TOL = 1e-9
_BRUTE_CAP = 1 << 24


def matching_approximation(
    h: EdgeColoredHypergraph,
) -> tuple[Coloring, frozenset[int]]:
    """Greedy conflict matching; the deleted set is a maximal conflict matching.

    Scans nodes in ascending id and, at each node, its live incident edges in
    ascending id.  A registry holds the live edges already seen at the current
    node; since an edge is registered only when nothing differently colored is
    waiting, the registry stays monochromatic, so each lookup touches one
    entry and the whole pass is linear in total edge size.

    Deleting both sides of a maximal conflict matching removes every conflict,
    and any coloring must leave at least one edge of each matched pair
    unsatisfied, so the max per-color deleted weight is at most k times the
    optimum of the min-max color objective.
    """
    dead = [False] * h.edge_count
    matched: list[int] = []
    for v in range(1, h.node_count + 1):
        registry: list[int] = []
        for e in h.incidence[v - 1]:
            if dead[e]:
                continue
            color = h.edges[e].color
            partner = -1
            for pos, f in enumerate(registry):
                if h.edges[f].color != color:
                    partner = pos
                    break
            if partner >= 0:
                f = registry.pop(partner)
                dead[e] = True
                dead[f] = True
                matched.extend((f, e))
            else:
                registry.append(e)
    deleted = frozenset(matched)
    return extend_coloring(h, deleted), deleted


def fpt_colorfair(h: EdgeColoredHypergraph, tau: float) -> Optional[Coloring]:
    """Coloring with per-color unsatisfied weight <= tau, or None.

    Branches on the first conflict: one of its two edges must be deleted in
    any feasible solution, and a deletion adds the edge's weight to its
    color's tally, so every root-leaf path keeps each tally within tau.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    alive = set(range(h.edge_count))
    tallies = [0.0] * h.color_count

    def search() -> Optional[Coloring]:
        conflict = find_conflict(h, alive)
        if conflict is None:
            return extend_coloring(h, set(range(h.edge_count)) - alive)
        _, e1, e2 = conflict
        for e in (e1, e2):
            c = h.edges[e].color
            w = h.edges[e].weight
            if tallies[c - 1] + w <= tau + _BRANCH_TOL:
                tallies[c - 1] += w
                alive.discard(e)
                found = search()
                alive.add(e)
                tallies[c - 1] -= w
                if found is not None:
                    return found
        return None

    return search()


def fpt_protected(
    h: EdgeColoredHypergraph,
    t: float,
    b: float,
    protected_color: int,
) -> Optional[Coloring]:
    """Coloring with total unsatisfied weight <= t and protected share <= b.

    Same branching as the color-budget search with two tallies.  Since the
    protected share can never exceed the total, the protected budget is
    clamped to min(b, t) up front.
    """
    if t < 0 or b < 0:
        raise ValueError("budgets must be >= 0")
    if not 1 <= protected_color <= h.color_count:
        raise ValueError("protected color out of range")
    b_eff = min(b, t)
    alive = set(range(h.edge_count))
    totals = [0.0, 0.0]  # (all colors, protected color)

    def search() -> Optional[Coloring]:
        conflict = find_conflict(h, alive)
        if conflict is None:
            return extend_coloring(h, set(range(h.edge_count)) - alive)
        _, e1, e2 = conflict
        for e in (e1, e2):
            w = h.edges[e].weight
            is_protected = h.edges[e].color == protected_color
            if totals[0] + w > t + _BRANCH_TOL:
                continue
            if is_protected and totals[1] + w > b_eff + _BRANCH_TOL:
                continue
            totals[0] += w
            if is_protected:
                totals[1] += w
            alive.discard(e)
            found = search()
            alive.add(e)
            totals[0] -= w
            if is_protected:
                totals[1] -= w
            if found is not None:
                return found
        return None

    return search()


def _evaluate_errors(errors: list[float], problem: Problem, total_weight: float) -> float:
    if problem.kind == "max":
        return total_weight - sum(errors)
    if problem.kind == "min":
        return sum(errors)
    if problem.kind == "colorfair":
        return max(errors)
    if problem.kind == "pmean":
        p = problem.p
        assert p is not None
        if math.isinf(p):
            return max(errors)
        return sum(err**p for err in errors) ** (1.0 / p)
    if problem.kind == "protected":
        return sum(errors)
    raise ValueError(f"unknown problem kind {problem.kind!r}")


def brute_force(
    h: EdgeColoredHypergraph, problem: Problem
) -> tuple[float, Coloring]:
    """Exact optimum by enumerating colorings of the non-isolated nodes.

    Isolated nodes are pinned to color 1, so the search space is
    k^(non-isolated nodes) and is capped at 2^24 states.  Ties keep the
    lexicographically smallest coloring.  For the protected problem the value
    is the least total unsatisfied weight among colorings whose protected
    share stays within the budget (no budget means unconstrained).
    """
    populated = [v for v in range(1, h.node_count + 1) if h.incidence[v - 1]]
    states = h.color_count ** len(populated)
    if states > _BRUTE_CAP:
        raise ValueError(
            f"{states} colorings exceed the enumeration cap of {_BRUTE_CAP}"
        )
    edges = [(e.color, e.nodes, e.weight) for e in h.edges]
    k = h.color_count
    total_weight = h.total_weight
    maximize = problem.kind == "max"
    budget = None
    if problem.kind == "protected":
        budget = math.inf if problem.budget is None else problem.budget
        protected_idx = problem.protected_color - 1
        if not 0 <= protected_idx < k:
            raise ValueError("protected color out of range")

    lam = [1] * h.node_count
    best_value: Optional[float] = None
    best_lam: Optional[tuple[int, ...]] = None
    for combo in itertools.product(range(1, k + 1), repeat=len(populated)):
        for idx, v in enumerate(populated):
            lam[v - 1] = combo[idx]
        errors = [0.0] * k
        for color, nodes, w in edges:
            for v in nodes:
                if lam[v - 1] != color:
                    errors[color - 1] += w
                    break
        if budget is not None and errors[protected_idx] > budget + _BRANCH_TOL:
            continue
        value = _evaluate_errors(errors, problem, total_weight)
        if (
            best_value is None
            or (maximize and value > best_value)
            or (not maximize and value < best_value)
        ):
            best_value = value
            best_lam = tuple(lam)
    if best_value is None:
        raise ValueError("no coloring satisfies the protected budget")
    assert best_lam is not None
    return best_value, best_lam
