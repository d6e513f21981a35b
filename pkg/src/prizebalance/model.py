"""Budget distributions and prize-sharing rules.

A league is a ``BudgetDistribution``: labelled club budgets kept in
nonincreasing order (ties keep their input order). Sharing rules describe how
an endowment ``E`` is split among clubs by canonical rank.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import (
    AmountsMismatchError,
    EmptyOrSingletonError,
    KOutOfRangeError,
    NegativeEndowmentError,
    NonfiniteBudgetError,
    NonpositiveBudgetError,
    WeightsNotMonotoneError,
    WeightsNotNormalizedError,
)

# Relative tolerance for "sums to 1" / "sums to E" checks.
SUM_RTOL = 1e-9


@dataclass(frozen=True)
class BudgetDistribution:
    clubs: tuple[tuple[str, float], ...]

    def __post_init__(self):
        if len(self.clubs) < 2:
            raise EmptyOrSingletonError(f"need at least 2 clubs, got {len(self.clubs)}")
        for label, budget in self.clubs:
            _check_budget(label, budget)
        budgets = [b for _, b in self.clubs]
        if any(b < nxt for b, nxt in zip(budgets, budgets[1:])):
            raise ValueError("clubs must be in nonincreasing budget order; use canonicalize()")

    @classmethod
    def from_budgets(cls, budgets: Iterable[float], labels: Sequence[str] | None = None) -> "BudgetDistribution":
        budgets = list(budgets)
        if labels is None:
            labels = [f"club{i + 1}" for i in range(len(budgets))]
        return canonicalize(list(zip(labels, budgets)))

    @property
    def n(self) -> int:
        return len(self.clubs)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.clubs)

    @property
    def budgets(self) -> tuple[float, ...]:
        return tuple(b for _, b in self.clubs)

    @property
    def total(self) -> float:
        return math.fsum(self.budgets)

    def scaled(self, c: float) -> "BudgetDistribution":
        return BudgetDistribution(tuple((label, b * c) for label, b in self.clubs))

    def __len__(self) -> int:
        return self.n


def _check_budget(label, budget) -> None:
    if isinstance(budget, bool) or not isinstance(budget, (int, float)):
        raise NonfiniteBudgetError(f"budget for {label!r} is not a number: {budget!r}")
    if not math.isfinite(budget):
        raise NonfiniteBudgetError(f"budget for {label!r} is not finite: {budget!r}")
    if budget <= 0:
        raise NonpositiveBudgetError(f"budget for {label!r} must be > 0, got {budget!r}")


def canonicalize(raw: Iterable[tuple[str, float]]) -> BudgetDistribution:
    """Sort ``(label, budget)`` pairs into nonincreasing budget order.

    Sorting is stable, so tied clubs keep their input order. Accepts an
    existing ``BudgetDistribution`` too (idempotent).
    """
    if isinstance(raw, BudgetDistribution):
        return raw
    pairs = [(str(label), budget) for label, budget in raw]
    if len(pairs) < 2:
        raise EmptyOrSingletonError(f"need at least 2 clubs, got {len(pairs)}")
    for label, budget in pairs:
        _check_budget(label, budget)
    pairs = [(label, float(budget)) for label, budget in pairs]
    pairs.sort(key=lambda p: -p[1])
    return BudgetDistribution(tuple(pairs))


def shares(X: BudgetDistribution) -> list[float]:
    x = X.total
    return [b / x for b in X.budgets]


def check_endowment(E: float) -> float:
    if not isinstance(E, (int, float)) or isinstance(E, bool) or not math.isfinite(E):
        raise NegativeEndowmentError(f"endowment must be a finite number, got {E!r}")
    if E < 0:
        raise NegativeEndowmentError(f"endowment must be >= 0, got {E!r}")
    return float(E)


@dataclass(frozen=True)
class EvenTopK:
    """Split E equally among the k largest-budget clubs."""

    k: int


@dataclass(frozen=True)
class WeightedTopK:
    """Give share ``weights[i]`` of E to the (i+1)-th largest club."""

    weights: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.weights)

    @property
    def strictly_uneven(self) -> bool:
        return self.weights[0] > 1.0 / self.k


@dataclass(frozen=True)
class General:
    """Explicit per-club amounts, indexed by canonical rank."""

    amounts: tuple[float, ...]


SharingRule = Union[EvenTopK, WeightedTopK, General]


def _check_k(k, n: int) -> None:
    if isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= n:
        raise KOutOfRangeError(f"k must be an integer in [1, {n}], got {k!r}")


def validate_rule(rule: SharingRule, X: BudgetDistribution, E: float) -> SharingRule:
    """Check ``rule`` against the league size and endowment.

    Returns the rule itself, except that a uniform ``WeightedTopK`` comes
    back as the equivalent ``EvenTopK``.
    """
    E = check_endowment(E)
    n = X.n
    if isinstance(rule, EvenTopK):
        _check_k(rule.k, n)
        return rule
    if isinstance(rule, WeightedTopK):
        a = [float(w) for w in rule.weights]
        _check_k(len(a), n)
        if any(not math.isfinite(w) or w <= 0 for w in a):
            raise WeightsNotMonotoneError(f"weights must be positive and finite: {a}")
        if any(w < nxt for w, nxt in zip(a, a[1:])):
            raise WeightsNotMonotoneError(f"weights must be nonincreasing: {a}")
        if abs(math.fsum(a) - 1.0) > SUM_RTOL:
            raise WeightsNotNormalizedError(f"weights sum to {math.fsum(a)!r}, expected 1")
        k = len(a)
        # Nonincreasing and summing to 1: uniform iff the first weight is 1/k.
        if a[0] - 1.0 / k <= SUM_RTOL:
            return EvenTopK(k)
        return rule
    if isinstance(rule, General):
        amounts = [float(v) for v in rule.amounts]
        if len(amounts) != n:
            raise AmountsMismatchError(f"expected {n} amounts, got {len(amounts)}")
        if any(not math.isfinite(v) or v < 0 for v in amounts):
            raise AmountsMismatchError(f"amounts must be finite and >= 0: {amounts}")
        s = math.fsum(amounts)
        if abs(s - E) > SUM_RTOL * max(1.0, E):
            raise AmountsMismatchError(f"amounts sum to {s!r}, endowment is {E!r}")
        return rule
    raise TypeError(f"unknown sharing rule: {rule!r}")


def allocation(rule: SharingRule, n: int, E: float) -> list[float]:
    """Per-rank award vector of length ``n`` for an already validated rule."""
    if isinstance(rule, EvenTopK):
        return [E / rule.k] * rule.k + [0.0] * (n - rule.k)
    if isinstance(rule, WeightedTopK):
        return [w * E for w in rule.weights] + [0.0] * (n - rule.k)
    return [float(v) for v in rule.amounts]
