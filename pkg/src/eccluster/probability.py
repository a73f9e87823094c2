"""Probabilities of event counts among independent events, and the extremal
weighted sums the rounding analysis rests on.

Everything here is exact when fed ``fractions.Fraction`` inputs and plain
floating point otherwise; arithmetic is written generically so both work.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = [
    "event_count_distribution",
    "exactly_t_probability",
    "at_most_one_probability",
    "weighted_series",
    "is_admissible_sequence",
    "min_weighted_series",
    "grid_min_weighted_series",
    "harmonic_coefficients",
    "two_endpoint_coefficients",
]

TWO_THIRDS = Fraction(2, 3)
ONE_THIRD = Fraction(1, 3)
GRID_POINT_CAP = 1 << 22


def event_count_distribution(x: Sequence) -> list:
    """Distribution of the number of occurring events among independents.

    Entry t is the probability that exactly t of the m independent events with
    probabilities ``x`` occur.  Computed by the O(m^2) subset-sum recurrence;
    all terms are nonnegative, so no cancellation occurs.
    """
    probs = [1]
    for xi in x:
        nxt = [probs[0] * (1 - xi)]
        for t in range(1, len(probs)):
            nxt.append(probs[t] * (1 - xi) + probs[t - 1] * xi)
        nxt.append(probs[-1] * xi)
        probs = nxt
    return probs


def exactly_t_probability(x: Sequence, t: int):
    """Probability that exactly ``t`` of the independent events occur.

    Out-of-range counts (t < 0 or t > len(x)) have probability 0; the empty
    family has probability 1 of zero occurrences.
    """
    if t < 0 or t > len(x):
        return 0
    return event_count_distribution(x)[t]


def at_most_one_probability(x: Sequence):
    """Probability that at most one of the independent events occurs."""
    dist = event_count_distribution(x)
    return dist[0] + (dist[1] if len(dist) > 1 else 0)


def weighted_series(x: Sequence, a: Sequence):
    """sum_t a_t * Pr[exactly t events occur]; ``a`` must have length len(x)+1."""
    if len(a) != len(x) + 1:
        raise ValueError(f"need {len(x) + 1} coefficients, got {len(a)}")
    dist = event_count_distribution(x)
    total = 0
    for at, pt in zip(a, dist):
        total += at * pt
    return total


def is_admissible_sequence(a: Sequence) -> bool:
    """True iff ``a`` is nonincreasing and convex (2a_{t+1} <= a_t + a_{t+2})."""
    if len(a) < 3:
        raise ValueError("sequence needs at least 3 entries")
    if any(a[t + 1] > a[t] for t in range(len(a) - 1)):
        return False
    return all(2 * a[t + 1] <= a[t] + a[t + 2] for t in range(len(a) - 2))


def min_weighted_series(a: Sequence):
    """Minimum of weighted_series(x, a) over {x in [0, 2/3]^m : sum x <= 1}.

    For admissible coefficient sequences the minimizer concentrates the mass
    as (2/3, 1/3, 0, ...), giving the closed form 2/9 (a_0 + a_2) + 5/9 a_1.
    Exact when ``a`` holds Fractions.
    """
    if not is_admissible_sequence(a):
        raise ValueError("coefficient sequence is not nonincreasing and convex")
    return Fraction(2, 9) * (a[0] + a[2]) + Fraction(5, 9) * a[1]


def grid_min_weighted_series(a: Sequence, m: int, step: Fraction):
    """Exhaustive rational-grid minimum of weighted_series over the capped box.

    Enumerates x in {0, step, 2*step, ...}^m limited to entries <= 2/3 and
    sum <= 1 and returns (min value, first argmin).  ``step`` must divide both
    2/3 and 1/3 exactly so the closed-form minimizer lies on the grid.
    """
    step = Fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    for boundary in (TWO_THIRDS, ONE_THIRD):
        if (boundary / step).denominator != 1:
            raise ValueError(f"step {step} does not divide {boundary} exactly")
    if len(a) != m + 1:
        raise ValueError(f"need {m + 1} coefficients, got {len(a)}")
    levels = int(TWO_THIRDS / step)
    if (levels + 1) ** m > GRID_POINT_CAP:
        raise ValueError("grid too large to enumerate")

    values = [step * j for j in range(levels + 1)]
    best_value = None
    best_point: tuple = ()
    point = [Fraction(0)] * m

    def recurse(i: int, remaining: Fraction) -> None:
        nonlocal best_value, best_point
        if i == m:
            val = weighted_series(point, a)
            if best_value is None or val < best_value:
                best_value = val
                best_point = tuple(point)
            return
        for v in values:
            if v > remaining:
                break
            point[i] = v
            recurse(i + 1, remaining - v)
        point[i] = Fraction(0)

    recurse(0, Fraction(1))
    assert best_value is not None
    return best_value, best_point


def harmonic_coefficients(m: int, offset: int = 0) -> list[Fraction]:
    """a_t = 1 / (1 + offset + t) for t = 0..m, as exact Fractions.

    These are the per-node success coefficients of priority rounding: a node
    wanting its target color plus t competitors adopts the target with
    probability 1/(t+1) under a uniform priority order (offset shifts t).
    """
    return [Fraction(1, 1 + offset + t) for t in range(m + 1)]


def two_endpoint_coefficients(m: int) -> list[Fraction]:
    """Expected reciprocal coefficients for an edge with two endpoints.

    a_t = E_s[1/(t + s + 1)] where s, the partner endpoint's number of wanted
    competitors at the extremal mass split (2/3, 1/3, 0), takes values 0, 1, 2
    with probabilities 2/9, 5/9, 2/9.  Exact Fractions, t = 0..m.
    """
    out = []
    for t in range(m + 1):
        out.append(
            Fraction(2, 9) * (Fraction(1, t + 1) + Fraction(1, t + 3))
            + Fraction(5, 9) * Fraction(1, t + 2)
        )
    return out
