"""Brute-force checks for the closed forms in ``analysis``.

Nothing here uses the moment formulas from ``analysis``: thresholds are found
by recomputing the post-award HHI directly, and peaks by scanning a uniform
grid (no assumption of unimodality).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import SingleCrossingViolation
from .index import hhi
from .model import BudgetDistribution, EvenTopK, WeightedTopK
from .rules import apply, neutral_tolerance


@dataclass(frozen=True)
class RandomInstanceSpec:
    n_range: tuple[int, int] = (2, 30)
    budget_range: tuple[float, float] = (1.0, 1e3)  # log-uniform, 3 decades
    e_range: tuple[float, float] = (1.0, 1e4)  # log-uniform, 4 decades
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.n_range
        if not 2 <= lo <= hi:
            raise ValueError(f"bad n range {self.n_range}")
        for name, (a, b) in (("budget", self.budget_range), ("E", self.e_range)):
            if not 0 < a <= b or not math.isfinite(b):
                raise ValueError(f"bad {name} range {(a, b)}")


@dataclass(frozen=True)
class Instance:
    index: int
    X: BudgetDistribution
    E: float


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def instances(spec: RandomInstanceSpec, count: int) -> Iterator[Instance]:
    """Deterministic stream of random leagues and endowments for ``spec.seed``."""
    rng = np.random.default_rng(spec.seed)
    for i in range(count):
        n = int(rng.integers(spec.n_range[0], spec.n_range[1] + 1))
        budgets = _log_uniform(rng, *spec.budget_range, size=n)
        E = float(_log_uniform(rng, *spec.e_range))
        yield Instance(i, BudgetDistribution.from_budgets(budgets.tolist()), E)


def direct_deltas(X: BudgetDistribution, E: float) -> list[float]:
    """HHI change of every even k-top rule, k = 1..n, by full recomputation."""
    base = hhi(X)
    return [hhi(apply(X, EvenTopK(k), E).awarded) - base for k in range(1, X.n + 1)]


def brute_k_star(X: BudgetDistribution, E: float) -> int:
    """Smallest k whose k-top award does not raise the HHI beyond the neutral band."""
    tol = neutral_tolerance(hhi(X))
    flags = [d <= tol for d in direct_deltas(X, E)]
    if True not in flags:
        raise SingleCrossingViolation(f"no improving k at E={E!r}")
    first = flags.index(True)
    if not all(flags[first:]):
        raise SingleCrossingViolation(f"sign pattern over k is not single-crossing: {flags}")
    return first + 1


def hhi_curve(X: BudgetDistribution, k: int, grid: np.ndarray) -> np.ndarray:
    """Post-award HHI of the even k-top rule at each grid endowment.

    Computed in extended precision straight from the awarded budgets.
    """
    b = np.asarray(X.budgets, dtype=np.longdouble)
    E = np.asarray(grid, dtype=np.longdouble)
    top = b[:k][None, :] + (E / k)[:, None]
    squares = (top * top).sum(axis=1) + (b[k:] * b[k:]).sum()
    total = b.sum() + E
    return squares / (total * total)


def grid_peak(X: BudgetDistribution, k: int, E_max: float, steps: int = 10000) -> float:
    """Endowment on a uniform grid over [0, E_max] minimising the post-award HHI."""
    grid = np.linspace(0.0, E_max, steps + 1)
    return float(grid[int(np.argmin(hhi_curve(X, k, grid)))])


def is_valley(values, atol: float = 0.0) -> bool:
    """True if ``values`` never rise and then fall again (differences within atol ignored)."""
    d = np.diff(np.asarray(values, dtype=float))
    signs = [s for s in np.sign(np.where(np.abs(d) <= atol, 0.0, d)) if s != 0]
    return all(not (a > 0 and b < 0) for a, b in zip(signs, signs[1:]))


def random_weight_vectors(k: int, count: int, seed: int = 0) -> list[tuple[float, ...]]:
    """Admissible strictly uneven weights: positive, nonincreasing, summing to 1, a1 > 1/k."""
    if k < 2:
        raise ValueError("uneven weight vectors need k >= 2")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a = np.sort(rng.dirichlet(np.ones(k)))[::-1]
        a = a / a.sum()
        if a[-1] > 0 and a[0] > 1.0 / k + 1e-9:
            out.append(tuple(float(v) for v in a))
    return out


# -- aggregated verification, used by ``prizebalance verify`` ---------------

PROPERTIES = (
    "top1-hurts/all-improves",
    "monotone-in-k",
    "single-crossing/k*",
    "even-beats-uneven",
    "peak-location",
    "thresholds-monotone",
)


@dataclass
class PropertyTally:
    checked: int = 0
    failures: int = 0
    max_deviation: float = 0.0
    first_failure: str | None = None

    def record(self, ok: bool, deviation: float, detail: str) -> None:
        self.checked += 1
        self.max_deviation = max(self.max_deviation, deviation)
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = detail


@dataclass
class VerifyReport:
    spec: RandomInstanceSpec
    instances: int
    tallies: dict[str, PropertyTally] = field(default_factory=lambda: {p: PropertyTally() for p in PROPERTIES})

    @property
    def failures(self) -> int:
        return sum(t.failures for t in self.tallies.values())

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def summary(self) -> str:
        return f"{len(self.tallies)} properties, {self.instances} instances, {self.failures} failures"


def _describe(inst: Instance) -> str:
    return f"instance #{inst.index}: E={inst.E!r} budgets={list(inst.X.budgets)!r}"


def verify(spec: RandomInstanceSpec, count: int = 10000, peak_steps: int = 10000,
           peak_every: int = 10, weights_per_instance: int = 10) -> VerifyReport:
    """Check every closed-form result against brute force on ``count`` random instances.

    The grid-peak and uneven-weight checks are the expensive ones and run on
    every ``peak_every``-th instance only.
    """
    from . import analysis  # closed forms under test

    report = VerifyReport(spec, count)
    t = report.tallies
    for inst in instances(spec, count):
        X, E, n = inst.X, inst.E, inst.X.n
        where = _describe(inst)
        tol = neutral_tolerance(hhi(X))
        deltas = direct_deltas(X, E)

        dev = max(-deltas[0], deltas[-1], 0.0)
        t["top1-hurts/all-improves"].record(deltas[0] >= -tol and deltas[-1] <= tol, dev, where)

        rises = [b - a for a, b in zip(deltas, deltas[1:])]
        t["monotone-in-k"].record(all(r <= tol for r in rises), max(rises + [0.0]), where)

        try:
            brute = brute_k_star(X, E)
            closed = analysis.k_star(X, E)
            ok = brute == closed
            ok &= all(analysis.improves(X, k, E) == (deltas[k - 1] <= tol) for k in range(1, n + 1))
            t["single-crossing/k*"].record(ok, abs(brute - closed), where)
        except SingleCrossingViolation as exc:
            t["single-crossing/k*"].record(False, float("inf"), f"{where}: {exc}")

        ks = [analysis.classify_k(X, k) for k in range(1, n + 1)]
        hats = [c.e_hat for c in ks if c.e_hat is not None]
        ok = all(b > a for a, b in zip(hats, hats[1:]))
        E2 = E * 2.0
        ok &= analysis.k_star(X, E) <= analysis.k_star(X, E2)
        t["thresholds-monotone"].record(ok, 0.0, where)

        if inst.index % peak_every:
            continue
        rng = np.random.default_rng([spec.seed, inst.index])
        k = int(rng.integers(1, n)) if n > 2 else 1
        peak = analysis.e_star(X, k)
        E_max = (peak if peak > 0 else X.total) * float(rng.uniform(1.2, 3.0))
        step = E_max / peak_steps
        grid = np.linspace(0.0, E_max, peak_steps + 1)
        curve = hhi_curve(X, k, grid)
        found = float(grid[int(np.argmin(curve))])
        dev = abs(found - peak) / step
        ok = dev <= 1.0 + 1e-9 and is_valley(curve, atol=1e-15)
        t["peak-location"].record(ok, dev, f"{where} k={k}")

        k = int(rng.integers(2, n + 1))
        even = hhi(apply(X, EvenTopK(k), E).awarded)
        seed = int(rng.integers(2**31))
        worst = 0.0
        ok = True
        for a in random_weight_vectors(k, weights_per_instance, seed):
            uneven = hhi(apply(X, WeightedTopK(a), E).awarded)
            worst = max(worst, even - uneven)
            ok &= even <= uneven + 1e-12
        t["even-beats-uneven"].record(ok, worst, f"{where} k={k}")
    return report
