"""Concentration indices: Herfindahl-Hirschman index, DOJ bands, concentration ratio."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import MOutOfRangeError, OutOfRangeError
from .model import BudgetDistribution

POINTS = 10000.0
UNCONCENTRATED_BELOW = 1000.0
HIGH_ABOVE = 1800.0


class Band(str, enum.Enum):
    UNCONCENTRATED = "Unconcentrated"
    MODERATE = "Moderate"
    HIGH = "High"

    def __str__(self) -> str:
        return self.value


def hhi(X: BudgetDistribution) -> float:
    """Sum of squared budget shares, in (0, 1]."""
    budgets = X.budgets
    x = math.fsum(budgets)
    return math.fsum(b * b for b in budgets) / (x * x)


def to_points(h: float) -> float:
    return h * POINTS


def band(hhi_points: float) -> Band:
    """DOJ classification of an HHI on the 0-10000 scale.

    Both endpoints (1000 and 1800) count as moderately concentrated.
    """
    if not math.isfinite(hhi_points) or hhi_points < 0 or hhi_points > POINTS * (1 + 1e-12):
        raise OutOfRangeError(f"HHI points must lie in [0, 10000], got {hhi_points!r}")
    if hhi_points < UNCONCENTRATED_BELOW:
        return Band.UNCONCENTRATED
    if hhi_points > HIGH_ABOVE:
        return Band.HIGH
    return Band.MODERATE


def concentration_ratio(X: BudgetDistribution, m: int) -> float:
    """Combined budget share of the ``m`` largest clubs."""
    if isinstance(m, bool) or not isinstance(m, int) or not 1 <= m <= X.n:
        raise MOutOfRangeError(f"m must be an integer in [1, {X.n}], got {m!r}")
    budgets = X.budgets
    if m == X.n:
        return 1.0
    return math.fsum(budgets[:m]) / math.fsum(budgets)


@dataclass(frozen=True)
class ConcentrationReport:
    hhi_raw: float
    hhi_points: float
    band: Band
    cr: tuple[int, float] | None = None

    def as_dict(self) -> dict:
        d = {"hhi_raw": self.hhi_raw, "hhi_points": self.hhi_points, "band": self.band.value}
        if self.cr is not None:
            d["cr"] = {"m": self.cr[0], "value": self.cr[1]}
        return d


def concentration_report(X: BudgetDistribution, m: int | None = None) -> ConcentrationReport:
    h = hhi(X)
    points = to_points(h)
    cr = None if m is None else (m, concentration_ratio(X, m))
    return ConcentrationReport(h, points, band(points), cr)
