"""Shared brute-force oracles, independent of the library's algorithms."""

from fractions import Fraction
from itertools import chain, combinations


def powerset(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def brute_force_best_weight(feasible_sets, weights):
    """Max over the given feasible sets of the sum of nonnegative member weights."""
    best = Fraction(0)
    for s in feasible_sets:
        total = sum((weights[e - 1] for e in s if weights[e - 1] >= 0), Fraction(0))
        if total > best:
            best = total
    return best


def brute_force_density(feasible_sets, k):
    """Max |X| / rank(X), with rank(X) = size of the largest feasible subset of X."""
    fams = [frozenset(s) for s in feasible_sets]
    best = Fraction(0)
    for subset in powerset(range(1, k + 1)):
        if not subset:
            continue
        x = frozenset(subset)
        rank = max(len(f) for f in fams if f <= x)
        ratio = Fraction(len(x), rank)
        if ratio > best:
            best = ratio
    return best
