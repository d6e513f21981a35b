from fractions import Fraction

import pytest
from hypothesis import strategies as st

from prizebalance import BudgetDistribution

budget_values = st.floats(min_value=0.01, max_value=1e4, allow_nan=False, allow_infinity=False)
budget_lists = st.lists(budget_values, min_size=2, max_size=25)
endowments = st.floats(min_value=1e-3, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def distributions(draw, min_size=2, max_size=25):
    return BudgetDistribution.from_budgets(draw(st.lists(budget_values, min_size=min_size, max_size=max_size)))


def exact_hhi(budgets):
    """Rational-arithmetic HHI, used as an independent reference."""
    b = [Fraction(v) for v in budgets]
    return sum(v * v for v in b) / sum(b) ** 2


@pytest.fixture
def five():
    return BudgetDistribution.from_budgets([5, 4, 3, 2, 1])


@pytest.fixture
def three():
    return BudgetDistribution.from_budgets([3, 2, 1])
