"""Trace-level simulation of the trading policies, plus Monte Carlo aggregation.

All executions use the sell-all-rebuy normalization: at every step the whole
portfolio is liquidated at current prices and a fresh feasible set is bought
at the same prices.  Cash flows and profits are exact rationals within a
trace; only the Monte Carlo aggregates are floats.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import InputError
from .matroids import Matroid, StockSet, max_weight_feasible_set
from .pricing import (
    JointDiscreteDistribution,
    PriceVector,
    as_fraction,
    format_fraction,
    mean,
    sample,
)

POLICY_ONLINE_IID = "online_iid"
POLICY_ONLINE_RANDOM_ORDER = "online_random_order"
POLICY_OFFLINE = "offline"
POLICIES = (POLICY_ONLINE_IID, POLICY_ONLINE_RANDOM_ORDER, POLICY_OFFLINE)

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class IIDModel:
    """Every step's price vector is an independent draw from one distribution."""

    distribution: JointDiscreteDistribution


@dataclass(frozen=True)
class RandomOrderModel:
    """One draw from each distribution, revealed in a uniformly random order."""

    distributions: tuple[JointDiscreteDistribution, ...]

    def __init__(self, distributions: Sequence[JointDiscreteDistribution]):
        object.__setattr__(self, "distributions", tuple(distributions))


Model = Union[IIDModel, RandomOrderModel]


@dataclass(frozen=True)
class MarketInstance:
    matroid: Matroid
    model: Model
    horizon: int
    seed: int

    def __post_init__(self):
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise InputError(f"horizon must be a positive integer, got {self.horizon!r}")
        if not isinstance(self.seed, int):
            raise InputError(f"seed must be an integer, got {self.seed!r}")
        k = self.matroid.ground_size
        if isinstance(self.model, IIDModel):
            if self.model.distribution.k != k:
                raise InputError("distribution and matroid disagree on the number of stocks")
        elif isinstance(self.model, RandomOrderModel):
            ds = self.model.distributions
            if not ds:
                raise InputError("random-order model needs at least one distribution")
            if any(d.k != k for d in ds):
                raise InputError("distributions and matroid disagree on the number of stocks")
            if self.horizon != len(ds):
                raise InputError(
                    f"random-order horizon must equal the number of distributions "
                    f"({len(ds)}), got {self.horizon}"
                )
        else:
            raise InputError(f"unknown model type {type(self.model).__name__}")


@dataclass(frozen=True)
class Trace:
    """One realized run: prices seen, sets held after acting, per-step cash flow."""

    prices: tuple[PriceVector, ...]
    holdings: tuple[StockSet, ...]
    cashflows: tuple[Fraction, ...]
    total_profit: Fraction


def _price_rng(seed: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed & _SEED_MASK, spawn_key=(trial, 0))
    return np.random.default_rng(ss)


def _perm_rng(seed: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed & _SEED_MASK, spawn_key=(trial, 1))
    return np.random.default_rng(ss)


def _random_permutation(rng: np.random.Generator, n: int) -> list[int]:
    # Fisher-Yates over 1..n, consuming one integer per swap.
    items = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        items[i], items[j] = items[j], items[i]
    return items


def _build_trace(prices: Sequence[PriceVector], holdings: Sequence[StockSet]) -> Trace:
    cashflows = []
    prev: StockSet = frozenset()
    for t, held in enumerate(holdings):
        flow = sum((prices[t][s - 1] for s in prev), Fraction(0))
        flow -= sum((prices[t][s - 1] for s in held), Fraction(0))
        cashflows.append(flow)
        prev = held
    total = sum(cashflows, Fraction(0))
    return Trace(tuple(prices), tuple(holdings), tuple(cashflows), total)


def _run_buy_low_policy(
    m: Matroid, target: Sequence[Fraction], prices: Sequence[PriceVector]
) -> Trace:
    # Buy the best feasible set under weights target - price; hold nothing at
    # the final step (a terminal purchase would be liquidated at cost).
    n = len(prices)
    holdings: list[StockSet] = []
    for t, vec in enumerate(prices):
        if t == n - 1:
            holdings.append(frozenset())
        else:
            weights = [mu - x for mu, x in zip(target, vec)]
            holdings.append(max_weight_feasible_set(m, weights)[0])
    return _build_trace(prices, holdings)


def sample_price_path(inst: MarketInstance, trial: int = 0) -> tuple[PriceVector, ...]:
    """Realized price sequence for the given trial of the instance.

    IID draws one vector per step; random order first draws a permutation
    (from a stream separate from the price stream), then reveals one draw per
    distribution in that order.
    """
    rng = _price_rng(inst.seed, trial)
    if isinstance(inst.model, IIDModel):
        d = inst.model.distribution
        return tuple(sample(d, rng) for _ in range(inst.horizon))
    ds = inst.model.distributions
    order = _random_permutation(_perm_rng(inst.seed, trial), len(ds))
    return tuple(sample(ds[i - 1], rng) for i in order)


def run_online_iid(inst: MarketInstance, trial: int = 0) -> Trace:
    """Mean-threshold policy: hold the best feasible set under mean - price."""
    if not isinstance(inst.model, IIDModel):
        raise InputError("run_online_iid requires an IID model")
    target = mean(inst.model.distribution)
    return _run_buy_low_policy(inst.matroid, target, sample_price_path(inst, trial))


def mixture_mean(ds: Sequence[JointDiscreteDistribution]) -> tuple[Fraction, ...]:
    """Mean of the uniform mixture, i.e. the average of the component means."""
    n = len(ds)
    acc = [Fraction(0)] * ds[0].k
    for d in ds:
        for s, x in enumerate(mean(d)):
            acc[s] += x
    return tuple(x / n for x in acc)


def run_online_random_order(inst: MarketInstance, trial: int = 0) -> Trace:
    """Same policy as the IID case, with the mixture mean as the fixed target."""
    if not isinstance(inst.model, RandomOrderModel):
        raise InputError("run_online_random_order requires a random-order model")
    target = mixture_mean(inst.model.distributions)
    return _run_buy_low_policy(inst.matroid, target, sample_price_path(inst, trial))


def run_offline_optimal(
    prices: Sequence[Sequence], m: Matroid
) -> tuple[Trace, Fraction]:
    """Hindsight-optimal run over a realized price sequence.

    At each step t < n the portfolio is the maximum-weight feasible set under
    next-price minus current-price; the returned profit equals the sum of
    those set weights and the trace's cash-flow total.
    """
    if not prices:
        raise InputError("need at least one price vector")
    vecs = [tuple(as_fraction(x) for x in vec) for vec in prices]
    k = m.ground_size
    for vec in vecs:
        if len(vec) != k:
            raise InputError(f"price vector of length {len(vec)}, expected {k}")
    n = len(vecs)
    holdings: list[StockSet] = []
    profit = Fraction(0)
    for t in range(n):
        if t == n - 1:
            holdings.append(frozenset())
        else:
            deltas = [nxt - cur for nxt, cur in zip(vecs[t + 1], vecs[t])]
            chosen, weight = max_weight_feasible_set(m, deltas)
            holdings.append(chosen)
            profit += weight
    trace = _build_trace(vecs, holdings)
    assert trace.total_profit == profit
    return trace, profit


@dataclass(frozen=True)
class MonteCarloStats:
    trials: int
    mean_profit: float
    stderr: float
    per_step_mean: float


def _trial_profit(inst: MarketInstance, policy: str, trial: int) -> Fraction:
    if policy == POLICY_ONLINE_IID:
        return run_online_iid(inst, trial).total_profit
    if policy == POLICY_ONLINE_RANDOM_ORDER:
        return run_online_random_order(inst, trial).total_profit
    if policy == POLICY_OFFLINE:
        return run_offline_optimal(sample_price_path(inst, trial), inst.matroid)[1]
    raise InputError(f"unknown policy {policy!r}; expected one of {POLICIES}")


def monte_carlo(inst: MarketInstance, policy: str, trials: int) -> MonteCarloStats:
    """Aggregate ``trials`` independent runs of a policy.

    Trial i draws its randomness from a child stream derived from
    (instance seed, i), so results do not depend on execution order.
    """
    if not isinstance(trials, int) or trials < 1:
        raise InputError(f"trials must be a positive integer, got {trials!r}")
    profits = np.empty(trials, dtype=np.float64)
    for i in range(trials):
        profits[i] = float(_trial_profit(inst, policy, i))
    mean_profit = float(profits.mean())
    stderr = float(profits.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    per_step = mean_profit / (inst.horizon - 1) if inst.horizon >= 2 else 0.0
    return MonteCarloStats(trials, mean_profit, stderr, per_step)


def write_trace_csv(trace: Trace, path) -> None:
    """One row per step: step, price vector, held set, cash flow."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "prices", "held", "cashflow"])
        for t in range(len(trace.prices)):
            writer.writerow(
                [
                    t + 1,
                    ";".join(format_fraction(x) for x in trace.prices[t]),
                    ";".join(str(s) for s in sorted(trace.holdings[t])),
                    format_fraction(trace.cashflows[t]),
                ]
            )


def write_stats_csv(rows: Sequence[tuple[str, MonteCarloStats]], path) -> None:
    """Schema: policy, trials, mean, stderr, per_step_mean."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["policy", "trials", "mean", "stderr", "per_step_mean"])
        for policy, stats in rows:
            writer.writerow(
                [
                    policy,
                    stats.trials,
                    repr(stats.mean_profit),
                    repr(stats.stderr),
                    repr(stats.per_step_mean),
                ]
            )
