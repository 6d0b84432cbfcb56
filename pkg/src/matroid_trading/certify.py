"""Randomized certification of every guarantee the library claims.

Each property draws a fresh seeded corpus, evaluates an exact inequality or
identity on every instance, and reports a failure count.  ``run_certification``
is what the CLI ``certify`` subcommand executes; the test suite runs the same
properties at larger trial counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Callable, Optional, Sequence

import numpy as np

from . import analytics, engine
from .corpus import (
    random_binary_explicit_matroid,
    random_fraction,
    random_joint_distribution,
    random_matroid,
    random_order_corpus_instance,
    random_partition_matroid,
    random_product_marginals,
    random_weights,
)
from .matroids import (
    ExplicitMatroid,
    Matroid,
    max_feasible_weight,
    max_weight_feasible_set,
    verify_matroid_axioms,
)
from .pricing import (
    JointDiscreteDistribution,
    mean,
    shift,
    uniform_mixture,
)

DEFAULT_COUNTS = {
    "kruskal_bruteforce": 2000,
    "density_consistency": 40,
    "density_lemma": 2000,
    "decomposition_bound": 2000,
    "matroid_guarantee": 150,
    "uniform_guarantee": 100,
    "polynomial_inequality": 2000,
    "uniform_offline_bound": 300,
    "uniform_online_formula": 300,
    "random_order_guarantee": 60,
    "mixture_pair_bound": 60,
    "mean_discrepancy_bound": 60,
    "hardness_tightness": 1,
    "zero_shift_invariance": 60,
}


@dataclass(frozen=True)
class PropertyResult:
    name: str
    trials: int
    failures: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0


def brute_force_max_weights(m: ExplicitMatroid, numerators: np.ndarray) -> np.ndarray:
    """Max over feasible sets of the clipped member-weight sum, per weight row.

    ``numerators`` is (trials, k) int64; returns the (trials,) int64 maxima.
    Direct family scan, independent of the greedy implementation.
    """
    masks = sorted(m.feasible_masks)
    k = m.ground_size
    member = np.array(
        [[(mask >> e) & 1 for e in range(k)] for mask in masks], dtype=np.int64
    )
    return (member @ np.maximum(numerators, 0).T).max(axis=0)


def family_density(masks: Sequence[int], k: int) -> Fraction:
    """Density from the raw family: rank(X) = largest member inside X."""
    fam = sorted(masks)
    pops = [f.bit_count() for f in fam]
    best = Fraction(1)
    for x in range(1, 1 << k):
        size = x.bit_count()
        if size <= best:
            continue
        r = max(p for f, p in zip(fam, pops) if f & ~x == 0)
        ratio = Fraction(size, r)
        if ratio > best:
            best = ratio
    return best


def explicit_copy(m: Matroid) -> ExplicitMatroid:
    """Materialize any small matroid's family through its feasibility oracle."""
    k = m.ground_size
    masks = [mask for mask in range(1 << k) if m._feasible_mask(mask)]
    return ExplicitMatroid.from_masks(k, masks)


def _check_kruskal_bruteforce(rnd: Random, trials: int) -> tuple[int, int, str]:
    per_matroid = 50
    n_matroids = max(1, trials // per_matroid)
    failures = 0
    detail = ""
    for _ in range(n_matroids):
        m = random_binary_explicit_matroid(rnd, min_k=3, max_k=8, max_rows=4)
        if not verify_matroid_axioms(m):
            failures += 1
            detail = detail or f"generated family is not a matroid: {m!r}"
            continue
        k = m.ground_size
        nums = np.array(
            [[rnd.randint(-50, 50) for _ in range(k)] for _ in range(per_matroid)],
            dtype=np.int64,
        )
        dens = [rnd.randint(1, 8) for _ in range(per_matroid)]
        best = brute_force_max_weights(m, nums)
        for t in range(per_matroid):
            w = [Fraction(int(nums[t, j]), dens[t]) for j in range(k)]
            _, weight = max_weight_feasible_set(m, w)
            if weight != Fraction(int(best[t]), dens[t]):
                failures += 1
                detail = detail or f"greedy weight {weight} != brute force on {m!r}"
    return n_matroids * per_matroid, failures, detail


def _check_density_consistency(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        m = random_matroid(rnd, max_k=6)
        reference = family_density(sorted(explicit_copy(m).feasible_masks), m.ground_size)
        if m.density() != reference:
            failures += 1
            detail = detail or f"density {m.density()} != family scan {reference} on {m!r}"
        if m.kind == "partition":
            closed = max(
                Fraction(1),
                max(Fraction(len(s), c) for s, c in m.blocks),
            )
            if m.density() != closed:
                failures += 1
                detail = detail or f"partition density {m.density()} != {closed}"
    return trials, failures, detail


def _check_density_lemma(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        m = random_matroid(rnd, max_k=6)
        w = random_weights(rnd, m.ground_size, max_num=30, max_den=6)
        if not analytics.check_density_lemma(m, w):
            failures += 1
            detail = detail or f"density bound failed on {m!r}, w={w}"
    return trials, failures, detail


def _check_decomposition_bound(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        m = random_matroid(rnd, max_k=6)
        k = m.ground_size
        x = random_weights(rnd, k, max_num=30, max_den=6)
        x2 = random_weights(rnd, k, max_num=30, max_den=6)
        lhs = max_feasible_weight(m, [b - a for a, b in zip(x, x2)])
        rhs = (
            max_feasible_weight(m, [-a for a in x])
            + sum(x2)
            + m.density() * max_feasible_weight(m, [-b for b in x2])
        )
        if lhs > rhs:
            failures += 1
            detail = detail or f"difference split failed on {m!r}"
    return trials, failures, detail


def _check_matroid_guarantee(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        m = random_matroid(rnd, max_k=6)
        d = random_joint_distribution(rnd, m.ground_size, max_atoms=8, zero_mean=True)
        online = analytics.exact_online_per_step(m, d)
        offline = analytics.exact_offline_per_step(m, d)
        if (1 + m.density()) * online < offline:
            failures += 1
            detail = detail or f"guarantee failed: online={online} offline={offline} on {m!r}"
    return trials, failures, detail


def _check_uniform_guarantee(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        k = rnd.randint(2, 5)
        marginals = random_product_marginals(rnd, k, max_atoms_per=4, joint_budget=64)
        d = analytics.product(marginals)
        online = analytics.uniform_online_values(d)
        offline = analytics.uniform_offline_values(d)
        for ell in range(1, k + 1):
            for ell_prime in range(1, ell + 1):
                bound = min(Fraction(1, 2), Fraction(ell, k))
                if online[ell - 1] < bound * offline[ell_prime - 1]:
                    failures += 1
                    detail = detail or (
                        f"uniform guarantee failed at k={k}, ell={ell}, "
                        f"ell'={ell_prime}"
                    )
    return trials, failures, detail


def _check_polynomial_inequality(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        k = rnd.randint(2, 8)
        ell = rnd.randint(1, k)
        a = []
        for _ in range(k):
            roll = rnd.random()
            if roll < 0.1:
                a.append(Fraction(0))
            elif roll < 0.2:
                a.append(Fraction(1))
            else:
                den = rnd.randint(1, 6)
                a.append(Fraction(rnd.randint(0, den), den))
        if not analytics.check_polynomial_inequality(k, ell, a):
            failures += 1
            detail = detail or f"polynomial inequality failed at k={k}, ell={ell}, a={a}"
    return trials, failures, detail


def _check_uniform_offline_bound(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        k = rnd.randint(2, 3)
        marginals = random_product_marginals(
            rnd, k, max_atoms_per=3, joint_budget=27, zero_mean=True
        )
        ell_prime = rnd.randint(1, k)
        if not analytics.check_uniform_offline_bound(marginals, ell_prime):
            failures += 1
            detail = detail or f"offline tail bound failed at k={k}, ell'={ell_prime}"
    return trials, failures, detail


def _check_uniform_online_formula(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        k = rnd.randint(1, 3)
        marginals = random_product_marginals(
            rnd, k, max_atoms_per=3, joint_budget=27, zero_mean=True
        )
        ell = rnd.randint(1, k)
        if not analytics.check_uniform_online_formula(marginals, ell):
            failures += 1
            detail = detail or f"online breakpoint identity failed at k={k}, ell={ell}"
    return trials, failures, detail


def _check_random_order_guarantee(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        m, ds = random_order_corpus_instance(rnd)
        n = len(ds)
        online = analytics.exact_random_order_online(m, ds)
        offline = analytics.exact_random_order_offline(m, ds)
        bound = Fraction(1, 1 + m.density()) - Fraction(2, n)
        if online < bound * offline:
            failures += 1
            detail = detail or f"random-order guarantee failed at n={n} on {m!r}"
    return trials, failures, detail


def _check_mixture_pair_bound(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        m, ds = random_order_corpus_instance(rnd)
        n = len(ds)
        mixed = uniform_mixture(ds)
        with_replacement = analytics.exact_offline_per_step(m, mixed)
        without_replacement = analytics.exact_random_order_offline(m, ds)
        if with_replacement < Fraction(n - 1, n) * without_replacement:
            failures += 1
            detail = detail or f"mixture pair bound failed at n={n} on {m!r}"
    return trials, failures, detail


def _check_mean_discrepancy_bound(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        m, ds = random_order_corpus_instance(rnd)
        n = len(ds)
        mixed = uniform_mixture(ds)
        mu = mean(mixed)
        loo = analytics.leave_one_out_means(ds)
        discrepancy = sum(
            (abs(mu[s] - loo[i][s]) for i in range(n) for s in range(m.ground_size)),
            Fraction(0),
        ) / n
        rhs = Fraction(2 * m.density(), n - 1) * analytics.exact_online_per_step(m, mixed)
        if discrepancy > rhs:
            failures += 1
            detail = detail or f"mean discrepancy bound failed at n={n} on {m!r}"
    return trials, failures, detail


HARDNESS_EPSILONS = (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000))


def _check_hardness_tightness(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    checks = 0

    def expect(ok: bool, what: str) -> None:
        nonlocal failures, detail, checks
        checks += 1
        if not ok:
            failures += 1
            detail = detail or what

    # Correlated instance on a rank-2 uniform matroid over 4 stocks.
    k, r = 4, 2
    rows = analytics.hardness_sweep("matroid_hardness", HARDNESS_EPSILONS, k=k, r=r)
    ratios = []
    for eps, rep in rows:
        expect(
            rep.online_per_step == Fraction(r) * (1 - k * eps / (1 + k * eps)),
            f"closed-form online value mismatch at eps={eps}",
        )
        expect(rep.ratio is not None, "undefined ratio in hardness sweep")
        ratios.append(rep.ratio)
        expect(
            abs(rep.ratio - Fraction(r, k + r)) <= 5 * eps * k,
            f"ratio {rep.ratio} too far from {Fraction(r, k + r)} at eps={eps}",
        )
    expect(ratios[0] > ratios[1] > ratios[2], "matroid-hardness ratios not decreasing")

    for generator, kk, ell, limit in (
        ("uniform_ratio", 4, 1, Fraction(1, 4)),
        ("half", 2, 1, Fraction(1, 2)),
    ):
        rows = analytics.hardness_sweep(generator, HARDNESS_EPSILONS, k=kk, ell=ell)
        ratios = [rep.ratio for _, rep in rows]
        for (eps, rep), ratio in zip(rows, ratios):
            expect(ratio is not None, f"undefined ratio in {generator} sweep")
            expect(
                abs(ratio - limit) <= 5 * eps * kk,
                f"{generator} ratio {ratio} too far from {limit} at eps={eps}",
            )
        expect(
            ratios[0] > ratios[1] > ratios[2],
            f"{generator} ratios not decreasing",
        )
    return checks, failures, detail


def _check_zero_shift_invariance(rnd: Random, trials: int) -> tuple[int, int, str]:
    failures = 0
    detail = ""
    for _ in range(trials):
        m = random_matroid(rnd, max_k=4)
        d = random_joint_distribution(rnd, m.ground_size, max_atoms=6)
        centered = shift(d, mean(d))
        seed = rnd.randrange(1 << 32)
        horizon = rnd.randint(2, 6)
        inst = engine.MarketInstance(m, engine.IIDModel(d), horizon, seed)
        inst_c = engine.MarketInstance(m, engine.IIDModel(centered), horizon, seed)
        if engine.run_online_iid(inst).holdings != engine.run_online_iid(inst_c).holdings:
            failures += 1
            detail = detail or f"shifted run chose different sets on {m!r}"
        if analytics.exact_offline_per_step(m, d) != analytics.exact_offline_per_step(
            m, centered
        ):
            failures += 1
            detail = detail or f"shifted offline value changed on {m!r}"
    return trials, failures, detail


_PROPERTIES: list[tuple[str, Callable[[Random, int], tuple[int, int, str]]]] = [
    ("kruskal_bruteforce", _check_kruskal_bruteforce),
    ("density_consistency", _check_density_consistency),
    ("density_lemma", _check_density_lemma),
    ("decomposition_bound", _check_decomposition_bound),
    ("matroid_guarantee", _check_matroid_guarantee),
    ("uniform_guarantee", _check_uniform_guarantee),
    ("polynomial_inequality", _check_polynomial_inequality),
    ("uniform_offline_bound", _check_uniform_offline_bound),
    ("uniform_online_formula", _check_uniform_online_formula),
    ("random_order_guarantee", _check_random_order_guarantee),
    ("mixture_pair_bound", _check_mixture_pair_bound),
    ("mean_discrepancy_bound", _check_mean_discrepancy_bound),
    ("hardness_tightness", _check_hardness_tightness),
    ("zero_shift_invariance", _check_zero_shift_invariance),
]

PROPERTY_NAMES = tuple(name for name, _ in _PROPERTIES)


def run_certification(
    seed: int = 2024, counts: Optional[dict[str, int]] = None
) -> list[PropertyResult]:
    """Run every property at its configured trial count."""
    overrides = counts or {}
    results = []
    for name, fn in _PROPERTIES:
        trials = overrides.get(name, DEFAULT_COUNTS[name])
        rnd = Random(f"{seed}:{name}")
        ran, failures, detail = fn(rnd, trials)
        results.append(PropertyResult(name, ran, failures, detail))
    return results
