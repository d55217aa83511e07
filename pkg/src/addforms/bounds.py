"""Scalar bound functions and inequality checkers, all in exact rationals.

Two piecewise families live here under deliberately distinct names: the
piecewise-linear lower bound `bollobas_h` on 3-cycle density versus pair
density (right-open intervals [1 - 1/t, 1 - 1/(t+1))), and the scalloped
energy calculus `energy_upper_bound` / `delta` built from the fractional
part of 1/alpha (closed overlapping intervals [1/(t+1), 1/t]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .abelian import (
    GroupSubset,
    additive_energy,
    signed_iterated_sumset,
    stabilizer,
    sumset,
)


@dataclass(frozen=True)
class PiecewiseRational:
    """A function given by an interval family indexed by t plus a closed-form
    rational expression per interval."""

    branch_of: Callable[[Fraction], int]
    branch_bounds: Callable[[int], tuple[Fraction, Fraction]]
    branch_eval: Callable[[int, Fraction], Fraction]

    def __call__(self, x: Fraction) -> Fraction:
        return self.branch_eval(self.branch_of(x), x)

    def on_branch(self, t: int, x: Fraction) -> Fraction:
        return self.branch_eval(t, x)

    def breakpoint_gap(self, t: int) -> Fraction:
        """Difference of adjacent branch values at the breakpoint shared by
        branches t and t+1; zero where the function is continuous."""
        lo_t, hi_t = self.branch_bounds(t)
        lo_next, hi_next = self.branch_bounds(t + 1)
        shared = hi_t if hi_t in (lo_next, hi_next) else lo_t
        return self.branch_eval(t + 1, shared) - self.branch_eval(t, shared)


# ---------------------------------------------------------------------------
# Piecewise-linear lower bound on 3-cycle density vs pair density.


def _graph_branch(x: Fraction) -> int:
    if not 0 <= x < 1:
        raise ValueError("branch lookup needs 0 <= x < 1")
    return int(Fraction(1) / (1 - x))


def _graph_eval(t: int, x: Fraction) -> Fraction:
    return Fraction(3 * t * t - t - 2, t * (t + 1)) * x - Fraction(2 * (t - 1), t + 1)


bollobas_piecewise = PiecewiseRational(
    branch_of=_graph_branch,
    branch_bounds=lambda t: (1 - Fraction(1, t), 1 - Fraction(1, t + 1)),
    branch_eval=_graph_eval,
)


def bollobas_h(x) -> Fraction:
    """Piecewise-linear lower bound; h(1 - 1/t) = (t-1)(t-2)/t^2 and h(1) = 1."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"argument {x} outside [0, 1]")
    if x == 1:
        return Fraction(1)
    return bollobas_piecewise(x)


def in_region_R_graph(x, y) -> bool:
    """Membership in {(x, y) in [0,1]^2 : y >= bollobas_h(x)}."""
    x, y = Fraction(x), Fraction(y)
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise ValueError("point outside the unit box")
    return y >= bollobas_h(x)


# ---------------------------------------------------------------------------
# Energy upper bound and the gap calculus.


def energy_upper_bound(alpha) -> Fraction:
    """alpha^3 - alpha^4*(frac - frac^2) with frac the fractional part of
    1/alpha; equals alpha^3 exactly iff 1/alpha is an integer (or alpha = 0)."""
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError(f"density {alpha} outside [0, 1]")
    if alpha == 0:
        return Fraction(0)
    inv = 1 / alpha
    frac = inv - (inv.numerator // inv.denominator)
    return alpha**3 - alpha**4 * (frac - frac * frac)


def in_region_R_energy(alpha, beta) -> bool:
    """Membership in {(alpha, beta) in [0,1]^2 : beta <= energy_upper_bound(alpha)}."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if not (0 <= alpha <= 1 and 0 <= beta <= 1):
        raise ValueError("point outside the unit box")
    return beta <= energy_upper_bound(alpha)


def delta_branch(alpha) -> int:
    """Branch index t with alpha in [1/(t+1), 1/t]; the lower-t branch wins
    at shared endpoints (alpha = 1/m sits in branch m-1)."""
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError(f"density {alpha} outside (0, 1]")
    return max(1, math.ceil(1 / alpha) - 1)


def delta_on_branch(t: int, alpha) -> Fraction:
    alpha = Fraction(alpha)
    return -t * (t + 1) * alpha**4 + (2 * t + 1) * alpha**3 - alpha**2


def delta_prime_on_branch(t: int, alpha) -> Fraction:
    alpha = Fraction(alpha)
    return -4 * t * (t + 1) * alpha**3 + 3 * (2 * t + 1) * alpha**2 - 2 * alpha


def delta_double_prime_on_branch(t: int, alpha) -> Fraction:
    alpha = Fraction(alpha)
    return -12 * t * (t + 1) * alpha**2 + 6 * (2 * t + 1) * alpha - 2


delta_piecewise = PiecewiseRational(
    branch_of=delta_branch,
    branch_bounds=lambda t: (Fraction(1, t + 1), Fraction(1, t)),
    branch_eval=delta_on_branch,
)


def delta(alpha) -> Fraction:
    """Gap alpha^3 - energy_upper_bound(alpha); zero exactly at alpha = 1/n."""
    alpha = Fraction(alpha)
    if alpha == 0:
        return Fraction(0)
    return delta_on_branch(delta_branch(alpha), alpha)


def delta_prime(alpha) -> Fraction:
    return delta_prime_on_branch(delta_branch(alpha), alpha)


def delta_double_prime(alpha) -> Fraction:
    return delta_double_prime_on_branch(delta_branch(alpha), alpha)


@dataclass(frozen=True)
class SegmentResult:
    """Grid verdict for one claim interval, evaluated on its own branch."""

    name: str
    lo: Fraction
    hi: Fraction
    branch: int
    points: int
    extreme: Fraction
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lo": str(self.lo),
            "hi": str(self.hi),
            "branch": self.branch,
            "points": self.points,
            "extreme": str(self.extreme),
            "violations": list(self.violations),
            "ok": self.ok,
        }


def _grid_points(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    points = [lo]
    first = math.ceil(lo / step)
    last = math.floor(hi / step)
    for i in range(first, last + 1):
        p = i * step
        if lo < p < hi:
            points.append(p)
    if hi != lo:
        points.append(hi)
    return points


@dataclass(frozen=True)
class DeltaClaimsReport:
    step: Fraction
    t_max: int
    segments: tuple[SegmentResult, ...]
    boundary_values: dict

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.segments)

    def to_dict(self) -> dict:
        return {
            "step": str(self.step),
            "t_max": self.t_max,
            "segments": [s.to_dict() for s in self.segments],
            "boundary_values": self.boundary_values,
            "ok": self.ok,
        }


def verify_delta_derivative_claims(
    step=Fraction(1, 1000), t_max: int = 20
) -> DeltaClaimsReport:
    """Grid sanity suite (not a continuum proof): delta' >= 1/20 on
    [1/3, 2/5] and [1/2, 7/10]; delta'' <= -1/2 on [2/5, 1/2], [7/10, 1] and
    every [1/(t+1), 1/t] for t = 3..t_max.  Every claim interval sits inside
    one branch, and is evaluated on that branch; both branch values at shared
    endpoints are reported separately."""
    step = Fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    lower = Fraction(1, 20)
    upper = Fraction(-1, 2)
    prime_segments = [
        ("delta_prime[1/3,2/5]", Fraction(1, 3), Fraction(2, 5), 2),
        ("delta_prime[1/2,7/10]", Fraction(1, 2), Fraction(7, 10), 1),
    ]
    second_segments = [
        ("delta_second[2/5,1/2]", Fraction(2, 5), Fraction(1, 2), 2),
        ("delta_second[7/10,1]", Fraction(7, 10), Fraction(1), 1),
    ]
    for t in range(3, t_max + 1):
        second_segments.append(
            (f"delta_second[1/{t + 1},1/{t}]", Fraction(1, t + 1), Fraction(1, t), t)
        )
    segments = []
    for name, lo, hi, t in prime_segments:
        points = _grid_points(lo, hi, step)
        values = [delta_prime_on_branch(t, p) for p in points]
        bad = tuple(
            f"delta'({p}) = {v} < {lower}" for p, v in zip(points, values) if v < lower
        )
        segments.append(
            SegmentResult(name, lo, hi, t, len(points), min(values), bad)
        )
    for name, lo, hi, t in second_segments:
        points = _grid_points(lo, hi, step)
        values = [delta_double_prime_on_branch(t, p) for p in points]
        bad = tuple(
            f"delta''({p}) = {v} > {upper}" for p, v in zip(points, values) if v > upper
        )
        segments.append(
            SegmentResult(name, lo, hi, t, len(points), max(values), bad)
        )
    boundary = {}
    for label, point, ts in [
        ("1/3", Fraction(1, 3), (2, 3)),
        ("2/5", Fraction(2, 5), (2,)),
        ("1/2", Fraction(1, 2), (1, 2)),
        ("7/10", Fraction(7, 10), (1,)),
    ]:
        boundary[label] = {
            f"branch_{t}": {
                "delta_prime": str(delta_prime_on_branch(t, point)),
                "delta_second": str(delta_double_prime_on_branch(t, point)),
            }
            for t in ts
        }
    return DeltaClaimsReport(
        step=step, t_max=t_max, segments=tuple(segments), boundary_values=boundary
    )


# ---------------------------------------------------------------------------
# Classical inequality checkers (exact left-hand sides).


def check_kneser(a: GroupSubset, b: GroupSubset) -> tuple[Fraction, bool]:
    """alpha(A+B) - alpha(A) - alpha(B) + alpha(stabilizer(A+B)) >= 0."""
    s = sumset(a, b)
    lhs = s.density() - a.density() - b.density() + stabilizer(s).density()
    return lhs, lhs >= 0


def check_plunnecke_ruzsa(
    a: GroupSubset, b: GroupSubset, r: int, s: int
) -> tuple[Fraction, bool]:
    """alpha(A+B)^(r+s) - alpha(A)^(r+s-1) * alpha(rB - sB) >= 0."""
    if a.size == 0:
        raise ValueError("A must be nonempty")
    if r + s < 1:
        raise ValueError("need r + s >= 1")
    lhs = sumset(a, b).density() ** (r + s) - a.density() ** (
        r + s - 1
    ) * signed_iterated_sumset(b, r, s).density()
    return lhs, lhs >= 0


def check_energy_doubling(a: GroupSubset) -> tuple[Fraction, bool]:
    """normalized_energy(A) * alpha(A+A) - alpha(A)^4 >= 0."""
    if a.size == 0:
        return Fraction(0), True
    lhs = additive_energy(a) * sumset(a, a).density() - a.density() ** 4
    return lhs, lhs >= 0


def check_energy_bound(a: GroupSubset) -> tuple[Fraction, bool]:
    """Slack energy_upper_bound(alpha(A)) - normalized_energy(A) >= 0."""
    if a.size == 0:
        raise ValueError("A must be nonempty")
    slack = energy_upper_bound(a.density()) - additive_energy(a)
    return slack, slack >= 0
