"""Exact per-step expected profits, competitive ratios, and inequality checks.

Everything here is computed in exact rational arithmetic by enumerating
distribution atoms (or atom pairs), so the guarantees can be certified as
strict inequalities rather than approximate ones.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CapacityError, InputError
from .matroids import Matroid, UniformMatroid, max_feasible_weight, max_weight_feasible_set
from .pricing import (
    JointDiscreteDistribution,
    MarginalDistribution,
    as_fraction,
    format_fraction,
    half_hardness_instance,
    matroid_hardness_instance,
    mean,
    product,
    uniform_ratio_hardness_instance,
)

DEFAULT_ATOM_LIMIT = 20_000
DEFAULT_PAIR_LIMIT = 250_000
SUBSET_ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class RatioReport:
    """Per-step online and offline values with the guarantee they are held to.

    ``ratio`` is None when the offline value is zero (both players earn
    nothing); the bound counts as satisfied in that case.
    """

    online_per_step: Fraction
    offline_per_step: Fraction
    ratio: Optional[Fraction]
    bound: Fraction
    satisfied: bool
    instance_id: str = ""
    matroid_kind: str = ""
    density: Optional[Fraction] = field(default=None)


def exact_online_per_step(
    m: Matroid, d: JointDiscreteDistribution, *, atom_limit: int = DEFAULT_ATOM_LIMIT
) -> Fraction:
    """Expected weight of the best feasible set under mean - price, exact."""
    if len(d.atoms) > atom_limit:
        raise CapacityError(f"{len(d.atoms)} atoms exceed the limit of {atom_limit}")
    mu = mean(d)
    total = Fraction(0)
    for atom, p in d.items():
        weights = [a - b for a, b in zip(mu, atom)]
        total += p * max_feasible_weight(m, weights)
    return total


def exact_offline_per_step(
    m: Matroid, d: JointDiscreteDistribution, *, pair_limit: int = DEFAULT_PAIR_LIMIT
) -> Fraction:
    """Expected weight of the best feasible set under the difference of two
    independent draws (next price minus current price), exact."""
    n_pairs = len(d.atoms) ** 2
    if n_pairs > pair_limit:
        raise CapacityError(f"{n_pairs} atom pairs exceed the limit of {pair_limit}")
    total = Fraction(0)
    for cur, p_cur in d.items():
        for nxt, p_nxt in d.items():
            weights = [a - b for a, b in zip(nxt, cur)]
            total += p_cur * p_nxt * max_feasible_weight(m, weights)
    return total


def exact_ratio(
    m: Matroid,
    d: JointDiscreteDistribution,
    bound,
    *,
    offline_matroid: Optional[Matroid] = None,
    instance_id: str = "",
    atom_limit: int = DEFAULT_ATOM_LIMIT,
    pair_limit: int = DEFAULT_PAIR_LIMIT,
) -> RatioReport:
    """Assemble both exact per-step values and compare against ``bound``.

    ``offline_matroid`` lets the hindsight player run under a different
    constraint (resource augmentation); it defaults to ``m``.
    """
    bound = as_fraction(bound)
    online = exact_online_per_step(m, d, atom_limit=atom_limit)
    offline = exact_offline_per_step(offline_matroid or m, d, pair_limit=pair_limit)
    if offline == 0:
        ratio = None
        satisfied = True
    else:
        ratio = online / offline
        satisfied = online >= bound * offline
    return RatioReport(
        online_per_step=online,
        offline_per_step=offline,
        ratio=ratio,
        bound=bound,
        satisfied=satisfied,
        instance_id=instance_id,
        matroid_kind=m.kind,
        density=m.density(),
    )


def exact_random_order_offline(
    m: Matroid,
    ds: Sequence[JointDiscreteDistribution],
    *,
    pair_limit: int = DEFAULT_PAIR_LIMIT,
) -> Fraction:
    """Per-step hindsight value when consecutive draws come from two distinct
    distributions chosen uniformly at random (ordered, without replacement)."""
    n = len(ds)
    if n < 2:
        raise InputError("random-order analysis needs at least two distributions")
    n_pairs = sum(
        len(a.atoms) * len(b.atoms) for i, a in enumerate(ds) for j, b in enumerate(ds) if i != j
    )
    if n_pairs > pair_limit:
        raise CapacityError(f"{n_pairs} atom pairs exceed the limit of {pair_limit}")
    total = Fraction(0)
    for i, d_cur in enumerate(ds):
        for j, d_nxt in enumerate(ds):
            if i == j:
                continue
            for cur, p_cur in d_cur.items():
                for nxt, p_nxt in d_nxt.items():
                    weights = [a - b for a, b in zip(nxt, cur)]
                    total += p_cur * p_nxt * max_feasible_weight(m, weights)
    return total / (n * (n - 1))


def leave_one_out_means(ds: Sequence[JointDiscreteDistribution]) -> list[tuple[Fraction, ...]]:
    """Mean of the uniform mixture of all distributions except each one in turn."""
    n = len(ds)
    if n < 2:
        raise InputError("leave-one-out means need at least two distributions")
    means = [mean(d) for d in ds]
    k = ds[0].k
    overall = [sum(mu[s] for mu in means) for s in range(k)]
    out = []
    for mu in means:
        out.append(tuple((overall[s] - mu[s]) / (n - 1) for s in range(k)))
    return out


def exact_random_order_online(
    m: Matroid, ds: Sequence[JointDiscreteDistribution]
) -> Fraction:
    """Per-step expected profit of the mixture-mean policy under random order.

    The bought set maximizes mixture-mean minus price, but the realized resale
    value is governed by the leave-one-out mean of the distribution the
    current draw came from.
    """
    n = len(ds)
    if n < 2:
        raise InputError("random-order analysis needs at least two distributions")
    means = [mean(d) for d in ds]
    k = ds[0].k
    mu = tuple(sum(mv[s] for mv in means) / n for s in range(k))
    loo = leave_one_out_means(ds)
    total = Fraction(0)
    for i, d in enumerate(ds):
        for atom, p in d.items():
            weights = [a - b for a, b in zip(mu, atom)]
            chosen, _ = max_weight_feasible_set(m, weights)
            gain = sum((loo[i][s - 1] - atom[s - 1] for s in chosen), Fraction(0))
            total += p * gain
    return total / n


def _capped_prefix_add(totals: list[Fraction], values: Sequence[Fraction], p: Fraction) -> None:
    # totals[cap-1] += p * (sum of the min(cap, #positive) largest positive values)
    positive = sorted((v for v in values if v > 0), reverse=True)
    acc = Fraction(0)
    prefix = [acc]
    for v in positive:
        acc += v
        prefix.append(acc)
    top = len(positive)
    for cap in range(1, len(totals) + 1):
        totals[cap - 1] += p * prefix[min(cap, top)]


def uniform_online_values(
    d: JointDiscreteDistribution, *, atom_limit: int = DEFAULT_ATOM_LIMIT
) -> list[Fraction]:
    """exact_online_per_step for every uniform cap 1..k, in one pass.

    Entry cap-1 equals exact_online_per_step(UniformMatroid(k, cap), d).
    """
    if len(d.atoms) > atom_limit:
        raise CapacityError(f"{len(d.atoms)} atoms exceed the limit of {atom_limit}")
    mu = mean(d)
    totals = [Fraction(0)] * d.k
    for atom, p in d.items():
        _capped_prefix_add(totals, [a - b for a, b in zip(mu, atom)], p)
    return totals


def uniform_offline_values(
    d: JointDiscreteDistribution, *, pair_limit: int = DEFAULT_PAIR_LIMIT
) -> list[Fraction]:
    """exact_offline_per_step for every uniform cap 1..k, in one pass."""
    n_pairs = len(d.atoms) ** 2
    if n_pairs > pair_limit:
        raise CapacityError(f"{n_pairs} atom pairs exceed the limit of {pair_limit}")
    totals = [Fraction(0)] * d.k
    for cur, p_cur in d.items():
        for nxt, p_nxt in d.items():
            _capped_prefix_add(totals, [a - b for a, b in zip(nxt, cur)], p_cur * p_nxt)
    return totals


def check_density_lemma(m: Matroid, weights: Sequence) -> bool:
    """Sum of positive weights is at most density times the best feasible weight."""
    w = [as_fraction(x) for x in weights]
    positive_sum = sum((x for x in w if x > 0), Fraction(0))
    return positive_sum <= m.density() * max_feasible_weight(m, w)


def _bernoulli_capped_count(probs: Sequence[Fraction], cap: int) -> Fraction:
    """Sum over all subsets S of min(|S|, cap) * prod_in(p) * prod_out(1-p).

    Enumerated by a branch-per-element recursion; zero-probability branches
    are pruned, every surviving leaf is one subset.
    """
    k = len(probs)
    total = Fraction(0)

    def descend(i: int, count: int, weight: Fraction) -> None:
        nonlocal total
        if weight == 0:
            return
        if i == k:
            total += min(count, cap) * weight
            return
        descend(i + 1, count + 1, weight * probs[i])
        descend(i + 1, count, weight * (1 - probs[i]))

    descend(0, 0, Fraction(1))
    return total


def check_polynomial_inequality(k: int, ell: int, a: Sequence) -> bool:
    """max{2, k/ell} * E[min(successes, ell)] >= 2*sum(a) - (2/(k-1))*sum of pair products.

    The left expectation is over independent Bernoulli indicators with
    success probabilities ``a``; evaluated exactly over all 2^k subsets.
    """
    if not isinstance(k, int) or k < 2:
        raise InputError(f"k must be an integer >= 2, got {k!r}")
    if k > SUBSET_ENUMERATION_LIMIT:
        raise CapacityError(f"subset enumeration supports k <= {SUBSET_ENUMERATION_LIMIT}")
    if not isinstance(ell, int) or ell < 1:
        raise InputError(f"ell must be a positive integer, got {ell!r}")
    probs = [as_fraction(x) for x in a]
    if len(probs) != k:
        raise InputError(f"expected {k} values, got {len(probs)}")
    if any(not 0 <= p <= 1 for p in probs):
        raise InputError("all values must lie in [0, 1]")
    lhs = max(Fraction(2), Fraction(k, ell)) * _bernoulli_capped_count(probs, ell)
    pair_sum = Fraction(0)
    for s in range(k):
        for t in range(s + 1, k):
            pair_sum += probs[s] * probs[t]
    rhs = 2 * sum(probs) - Fraction(2, k - 1) * pair_sum
    return lhs >= rhs


def _drop_tail_probability(m: MarginalDistribution, x: Fraction) -> Fraction:
    """Pr[-X >= x], i.e. the chance the price sits at or below -x."""
    return sum((p for a, p in zip(m.atoms, m.probs) if a <= -x), Fraction(0))


def _drop_breakpoints(marginals: Sequence[MarginalDistribution]) -> list[Fraction]:
    values = {-a for m in marginals for a in m.atoms if a < 0}
    return sorted(values)


def _require_zero_mean(marginals: Sequence[MarginalDistribution]) -> None:
    for i, m in enumerate(marginals):
        if m.mean() != 0:
            raise InputError(
                f"marginal {i + 1} has mean {m.mean()}, expected 0 (shift first)"
            )


def check_uniform_offline_bound(
    marginals: Sequence[MarginalDistribution],
    ell_prime: int,
    *,
    max_atoms: int = DEFAULT_ATOM_LIMIT,
) -> bool:
    """Hindsight per-step value is bounded by a pairwise tail-probability sum.

    For a zero-mean independent instance, E of the capped best price increase
    is at most the integral over x > 0 of
    2*sum_s Pr[-X_s >= x] - (2/(k-1)) * sum_{s<s'} Pr[-X_s >= x] Pr[-X_s' >= x],
    evaluated exactly as a sum over the distinct drop magnitudes.
    """
    k = len(marginals)
    if k < 2:
        raise InputError("this bound needs at least two stocks")
    if not isinstance(ell_prime, int) or not 1 <= ell_prime <= k:
        raise InputError(f"ell_prime must satisfy 1 <= ell_prime <= {k}")
    _require_zero_mean(marginals)
    lhs = exact_offline_per_step(
        UniformMatroid(k, ell_prime), product(marginals, max_atoms=max_atoms)
    )
    rhs = Fraction(0)
    prev = Fraction(0)
    for x in _drop_breakpoints(marginals):
        tails = [_drop_tail_probability(m, x) for m in marginals]
        pair_sum = Fraction(0)
        for s in range(k):
            for t in range(s + 1, k):
                pair_sum += tails[s] * tails[t]
        integrand = 2 * sum(tails) - Fraction(2, k - 1) * pair_sum
        rhs += (x - prev) * integrand
        prev = x
    return lhs <= rhs


def check_uniform_online_formula(
    marginals: Sequence[MarginalDistribution],
    ell: int,
    *,
    max_atoms: int = DEFAULT_ATOM_LIMIT,
) -> bool:
    """The online per-step value equals its tail-probability breakpoint sum.

    For a zero-mean independent instance, E of the capped sum of price drops
    equals the integral over x > 0 of E[min(#{s : -X_s >= x}, ell)],
    evaluated exactly over the distinct drop magnitudes.
    """
    k = len(marginals)
    if not isinstance(ell, int) or not 1 <= ell <= k:
        raise InputError(f"ell must satisfy 1 <= ell <= {k}")
    _require_zero_mean(marginals)
    if k > SUBSET_ENUMERATION_LIMIT:
        raise CapacityError(f"subset enumeration supports k <= {SUBSET_ENUMERATION_LIMIT}")
    lhs = exact_online_per_step(
        UniformMatroid(k, ell), product(marginals, max_atoms=max_atoms)
    )
    rhs = Fraction(0)
    prev = Fraction(0)
    for x in _drop_breakpoints(marginals):
        tails = [_drop_tail_probability(m, x) for m in marginals]
        rhs += (x - prev) * _bernoulli_capped_count(tails, ell)
        prev = x
    return lhs == rhs


def hardness_sweep(
    generator: str,
    epsilons: Sequence,
    *,
    k: int,
    r: Optional[int] = None,
    ell: Optional[int] = None,
    ell_prime: Optional[int] = None,
) -> list[tuple[Fraction, RatioReport]]:
    """Exact ratio of a named hardness generator across a schedule of epsilons.

    ``matroid_hardness`` needs ``r`` (bound 1/(1+k/r)); ``uniform_ratio`` and
    ``half`` need ``ell`` and optionally ``ell_prime`` (bound min{1/2, ell/k}).
    """
    rows = []
    for eps_in in epsilons:
        eps = as_fraction(eps_in)
        if generator == "matroid_hardness":
            if r is None:
                raise InputError("matroid_hardness sweep needs r")
            m = UniformMatroid(k, r)
            d = matroid_hardness_instance(k, r, eps)
            bound = Fraction(r, k + r)
            report = exact_ratio(
                m, d, bound,
                instance_id=f"matroid_hardness(k={k},r={r},eps={format_fraction(eps)})",
            )
        elif generator in ("uniform_ratio", "half"):
            if ell is None:
                raise InputError(f"{generator} sweep needs ell")
            lp = ell_prime if ell_prime is not None else ell
            if lp > ell:
                raise InputError("offline cap ell_prime must not exceed ell")
            make = (
                uniform_ratio_hardness_instance
                if generator == "uniform_ratio"
                else half_hardness_instance
            )
            d = product(make(k, eps))
            bound = min(Fraction(1, 2), Fraction(ell, k))
            report = exact_ratio(
                UniformMatroid(k, ell),
                d,
                bound,
                offline_matroid=UniformMatroid(k, lp),
                instance_id=(
                    f"{generator}(k={k},ell={ell},ell'={lp},eps={format_fraction(eps)})"
                ),
            )
        else:
            raise InputError(
                f"unknown generator {generator!r}; expected matroid_hardness, "
                f"uniform_ratio, or half"
            )
        rows.append((eps, report))
    return rows


def write_ratio_reports(reports: Sequence[RatioReport], path) -> None:
    """Schema: instance_id, matroid_kind, density, online, offline, ratio, bound, satisfied."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["instance_id", "matroid_kind", "density", "online", "offline",
             "ratio", "bound", "satisfied"]
        )
        for rep in reports:
            writer.writerow(
                [
                    rep.instance_id,
                    rep.matroid_kind,
                    format_fraction(rep.density) if rep.density is not None else "",
                    format_fraction(rep.online_per_step),
                    format_fraction(rep.offline_per_step),
                    format_fraction(rep.ratio) if rep.ratio is not None else "undefined",
                    format_fraction(rep.bound),
                    "true" if rep.satisfied else "false",
                ]
            )
