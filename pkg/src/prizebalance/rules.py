"""Applying sharing rules to a league and measuring the HHI change."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .index import hhi
from .model import (
    BudgetDistribution,
    SharingRule,
    allocation,
    canonicalize,
    check_endowment,
    validate_rule,
)

NEUTRAL_RTOL = 1e-12


class Effect(str, enum.Enum):
    HURTS = "hurts"
    IMPROVES = "improves"
    NEUTRAL = "neutral"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PostAwardDistribution:
    base: BudgetDistribution
    rule: SharingRule
    E: float
    awarded: BudgetDistribution


def apply(X: BudgetDistribution, rule: SharingRule, E: float) -> PostAwardDistribution:
    """Add each club's award to its budget and re-sort the result.

    Awards are assigned by the canonical rank of ``X``; a rule that lifts a
    lower club above a higher one is fine, ``awarded`` is re-canonicalized.
    """
    E = check_endowment(E)
    rule = validate_rule(rule, X, E)
    awards = allocation(rule, X.n, E)
    awarded = canonicalize(
        [(label, b + r) for (label, b), r in zip(X.clubs, awards)]
    )
    return PostAwardDistribution(X, rule, E, awarded)


def post_hhi(X: BudgetDistribution, rule: SharingRule, E: float) -> float:
    return hhi(apply(X, rule, E).awarded)


def delta_hhi(X: BudgetDistribution, rule: SharingRule, E: float) -> float:
    """``post_hhi - hhi(X)``; positive means the award concentrates the league."""
    return post_hhi(X, rule, E) - hhi(X)


def neutral_tolerance(base_hhi: float) -> float:
    return NEUTRAL_RTOL * max(1.0, base_hhi)


def classify_delta(delta: float, base_hhi: float) -> Effect:
    if abs(delta) <= neutral_tolerance(base_hhi):
        return Effect.NEUTRAL
    return Effect.HURTS if delta > 0 else Effect.IMPROVES


def effect(X: BudgetDistribution, rule: SharingRule, E: float) -> Effect:
    base = hhi(X)
    return classify_delta(post_hhi(X, rule, E) - base, base)
