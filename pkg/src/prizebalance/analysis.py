"""Closed-form thresholds for even k-top rules.

Notation used throughout: ``x`` total budget, ``Q`` sum of squared budgets,
``S_k`` combined budget of the top ``k`` clubs, ``T_k = x - S_k``.

* ``improves(X, k, E)``: the k-top award of E does not raise the HHI, i.e.
  ``x^2 (E + 2 S_k) <= k (E + 2x) Q``.
* ``classify_k``: whether that holds for every E, for no E > 0, or for
  ``E <= e_hat`` only.
* ``e_star``: endowment at which the post-award HHI stops falling and starts
  rising as E grows.
* ``k_star``: smallest k whose k-top rule improves balance at E.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import BadGridError, KOutOfRangeError, PremiseViolatedError, SingleCrossingViolation
from .index import Band, band, hhi, to_points
from .model import BudgetDistribution, EvenTopK, check_endowment
from .rules import post_hhi

THRESHOLD_RTOL = 1e-9


class Kind(str, enum.Enum):
    ALWAYS_IMPROVES = "AlwaysImproves"
    NEVER_IMPROVES = "NeverImproves"
    THRESHOLD = "ThresholdAt"

    def __str__(self) -> str:
        return self.value


class Peak(enum.Enum):
    """Sentinel for ``e_star`` at k = n, where the HHI never turns upward."""

    ALWAYS_DECREASING = "AlwaysDecreasing"

    def __str__(self) -> str:
        return self.value


ALWAYS_DECREASING = Peak.ALWAYS_DECREASING


@dataclass(frozen=True)
class KClassification:
    k: int
    kind: Kind
    e_hat: float | None = None

    def __str__(self) -> str:
        if self.kind is Kind.THRESHOLD:
            return f"ThresholdAt({self.e_hat:g})"
        return self.kind.value


@dataclass(frozen=True)
class _Moments:
    x: float
    Q: float
    prefix: tuple[float, ...]  # prefix[k] = S_k, prefix[0] = 0


def _moments(X: BudgetDistribution) -> _Moments:
    b = X.budgets
    prefix = tuple(math.fsum(b[:k]) for k in range(X.n + 1))
    return _Moments(prefix[-1], math.fsum(v * v for v in b), prefix)


def _le(a: float, b: float) -> bool:
    return a <= b + THRESHOLD_RTOL * max(abs(a), abs(b))


def _check_k(X: BudgetDistribution, k) -> None:
    if isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= X.n:
        raise KOutOfRangeError(f"k must be an integer in [1, {X.n}], got {k!r}")


def improves(X: BudgetDistribution, k: int, E: float) -> bool:
    """Whether awarding E evenly to the top k clubs weakly lowers the HHI.

    Evaluated from budget moments alone; never recomputes the HHI.
    """
    _check_k(X, k)
    return _improves(_moments(X), k, check_endowment(E))


def _improves(m: _Moments, k: int, E: float) -> bool:
    lhs = m.x * m.x * (E + 2.0 * m.prefix[k])
    rhs = k * (E + 2.0 * m.x) * m.Q
    return _le(lhs, rhs)


def classify_k(X: BudgetDistribution, k: int) -> KClassification:
    _check_k(X, k)
    m = _moments(X)
    kq = k * m.Q
    x2 = m.x * m.x
    xs = m.x * m.prefix[k]
    if _le(x2, kq):
        return KClassification(k, Kind.ALWAYS_IMPROVES)
    if _le(kq, xs):
        return KClassification(k, Kind.NEVER_IMPROVES)
    return KClassification(k, Kind.THRESHOLD, 2.0 * m.x * (kq - xs) / (x2 - kq))


def e_hat(X: BudgetDistribution, k: int) -> float:
    """Largest endowment for which the k-top rule still improves balance.

    :raises PremiseViolatedError: if k improves for every E or for no E > 0.
    """
    c = classify_k(X, k)
    if c.kind is not Kind.THRESHOLD:
        raise PremiseViolatedError(f"k={k} is {c.kind.value}; no finite threshold")
    return c.e_hat


def e_star(X: BudgetDistribution, k: int) -> Union[float, Peak]:
    _check_k(X, k)
    if k == X.n:
        return ALWAYS_DECREASING
    m = _moments(X)
    tail = m.x - m.prefix[k]
    return max(0.0, (k * m.Q - m.x * m.prefix[k]) / tail)


def k_star(X: BudgetDistribution, E: float) -> int:
    """Smallest k whose even k-top rule improves balance at endowment E.

    Scans every k and raises ``SingleCrossingViolation`` if the improving
    set is not an upper interval of 1..n.
    """
    E = check_endowment(E)
    m = _moments(X)
    flags = [_improves(m, k, E) for k in range(1, X.n + 1)]
    first = flags.index(True) if True in flags else None
    if first is None or not all(flags[first:]):
        raise SingleCrossingViolation(f"improvement pattern over k is not single-crossing: {flags}")
    return first + 1


@dataclass(frozen=True)
class ThresholdReport:
    E: float
    k_star: int
    classifications: tuple[KClassification, ...]
    e_star: tuple[tuple[int, Union[float, Peak]], ...]
    improves: tuple[bool, ...] = field(default=())

    def as_dict(self) -> dict:
        rows = []
        for c, (_, peak), imp in zip(self.classifications, self.e_star, self.improves):
            rows.append({
                "k": c.k,
                "classification": c.kind.value,
                "e_hat": c.e_hat,
                "e_star": peak.value if isinstance(peak, Peak) else peak,
                "improves": imp,
            })
        return {"E": self.E, "k_star": self.k_star, "rows": rows}


def threshold_report(X: BudgetDistribution, E: float) -> ThresholdReport:
    ks = range(1, X.n + 1)
    return ThresholdReport(
        E=check_endowment(E),
        k_star=k_star(X, E),
        classifications=tuple(classify_k(X, k) for k in ks),
        e_star=tuple((k, e_star(X, k)) for k in ks),
        improves=tuple(improves(X, k, E) for k in ks),
    )


@dataclass(frozen=True)
class SweepRow:
    E: float
    hhi: float
    hhi_points: float
    band: Band
    delta: float


@dataclass(frozen=True)
class SweepResult:
    k: int
    baseline: float
    rows: tuple[SweepRow, ...]


def check_grid(E_grid: Sequence[float]) -> list[float]:
    grid = [float(e) for e in E_grid]
    if not grid:
        raise BadGridError("endowment grid is empty")
    if any(not math.isfinite(e) or e < 0 for e in grid):
        raise BadGridError("grid values must be finite and >= 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise BadGridError("grid values must be strictly increasing")
    return grid


def sweep_e(X: BudgetDistribution, k: int, E_grid: Sequence[float]) -> SweepResult:
    """Post-award HHI of the even k-top rule at each endowment in ``E_grid``."""
    _check_k(X, k)
    grid = check_grid(E_grid)
    base = hhi(X)
    rule = EvenTopK(k)
    rows = []
    for E in grid:
        h = post_hhi(X, rule, E)
        points = to_points(h)
        rows.append(SweepRow(E, h, points, band(points), h - base))
    return SweepResult(k, base, tuple(rows))


def uniform_grid(lo: float, hi: float, steps: int) -> list[float]:
    """``steps`` equal intervals from lo to hi inclusive (steps + 1 points)."""
    if steps < 1 or not hi > lo:
        raise BadGridError(f"need max > min and steps >= 1, got {lo}:{hi}:{steps}")
    return [lo + (hi - lo) * i / steps for i in range(steps + 1)]
