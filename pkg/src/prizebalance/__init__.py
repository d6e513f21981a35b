"""Competitive balance (HHI) of league budgets under prize-sharing rules."""
from .analysis import (
    ALWAYS_DECREASING,
    KClassification,
    Kind,
    ThresholdReport,
    classify_k,
    e_hat,
    e_star,
    improves,
    k_star,
    sweep_e,
    threshold_report,
)
from .index import Band, ConcentrationReport, band, concentration_ratio, concentration_report, hhi
from .model import BudgetDistribution, EvenTopK, General, WeightedTopK, canonicalize, shares, validate_rule
from .rules import Effect, apply, delta_hhi, effect, post_hhi

__version__ = "0.1.0"
