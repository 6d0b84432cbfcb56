"""Seeded random generators for matroids, distributions, and full instances.

These feed the certification suite and the randomized tests.  Everything is
driven by a caller-supplied ``random.Random`` so corpora are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random
from typing import Sequence

from .matroids import (
    ExplicitMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
)
from .pricing import (
    JointDiscreteDistribution,
    MarginalDistribution,
    mean,
    shift,
)


def random_fraction(rnd: Random, max_num: int = 9, dens: Sequence[int] = (1, 2, 3, 4)) -> Fraction:
    return Fraction(rnd.randint(-max_num, max_num), rnd.choice(dens))


def random_weights(rnd: Random, k: int, max_num: int = 50, max_den: int = 8) -> list[Fraction]:
    den = rnd.randint(1, max_den)
    return [Fraction(rnd.randint(-max_num, max_num), den) for _ in range(k)]


def _random_probs(rnd: Random, n: int) -> list[Fraction]:
    weights = [rnd.randint(1, 9) for _ in range(n)]
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def gf2_independent_masks(columns: Sequence[int]) -> set[int]:
    """Independent column subsets of a binary matrix, as bitmasks.

    ``columns[e]`` is the e'th column written as an integer over the rows.
    Walks all subsets in increasing mask order, carrying a reduced basis per
    independent subset (downward closure makes this sound).
    """
    feasible: dict[int, tuple[int, ...]] = {0: ()}
    k = len(columns)
    for mask in range(1, 1 << k):
        low = mask & -mask
        rest = mask ^ low
        basis = feasible.get(rest)
        if basis is None:
            continue
        v = columns[low.bit_length() - 1]
        for b in basis:  # basis is descending with distinct leading bits
            if v ^ b < v:
                v ^= b
        if v:
            feasible[mask] = tuple(sorted(basis + (v,), reverse=True))
    return set(feasible.keys())


def random_binary_explicit_matroid(
    rnd: Random, min_k: int = 3, max_k: int = 9, max_rows: int = 5
) -> ExplicitMatroid:
    """Random loopless explicit matroid realized by a binary matrix."""
    k = rnd.randint(min_k, max_k)
    rows = rnd.randint(2, min(max_rows, k))
    columns = [rnd.randint(1, (1 << rows) - 1) for _ in range(k)]
    return ExplicitMatroid.from_masks(k, gf2_independent_masks(columns))


def random_uniform_matroid(rnd: Random, max_k: int = 6) -> UniformMatroid:
    k = rnd.randint(1, max_k)
    return UniformMatroid(k, rnd.randint(1, k))


def random_partition_matroid(rnd: Random, max_k: int = 6) -> PartitionMatroid:
    k = rnd.randint(2, max_k)
    elems = list(range(1, k + 1))
    rnd.shuffle(elems)
    n_blocks = rnd.randint(1, min(3, k))
    cuts = sorted(rnd.sample(range(1, k), n_blocks - 1)) if n_blocks > 1 else []
    blocks = []
    start = 0
    for cut in cuts + [k]:
        part = elems[start:cut]
        blocks.append((part, rnd.randint(1, len(part))))
        start = cut
    return PartitionMatroid(blocks)


def random_graphic_matroid(rnd: Random, max_edges: int = 6) -> GraphicMatroid:
    n_vertices = rnd.randint(2, 4)
    n_edges = rnd.randint(2, max_edges)
    edges = []
    for _ in range(n_edges):
        u = rnd.randint(1, n_vertices)
        v = rnd.randint(1, n_vertices)
        while v == u:
            v = rnd.randint(1, n_vertices)
        edges.append((u, v))
    return GraphicMatroid(edges)


def random_matroid(rnd: Random, max_k: int = 6) -> Matroid:
    kind = rnd.choice(("uniform", "partition", "graphic", "explicit"))
    if kind == "uniform":
        return random_uniform_matroid(rnd, max_k)
    if kind == "partition":
        return random_partition_matroid(rnd, max_k)
    if kind == "graphic":
        return random_graphic_matroid(rnd, max_edges=max_k)
    return random_binary_explicit_matroid(rnd, min_k=2, max_k=max_k, max_rows=4)


def random_joint_distribution(
    rnd: Random,
    k: int,
    max_atoms: int = 8,
    zero_mean: bool = False,
    max_num: int = 9,
) -> JointDiscreteDistribution:
    n_atoms = rnd.randint(1, max_atoms)
    atoms: set[tuple[Fraction, ...]] = set()
    while len(atoms) < n_atoms:
        atoms.add(tuple(random_fraction(rnd, max_num) for _ in range(k)))
    d = JointDiscreteDistribution(k, sorted(atoms), _random_probs(rnd, n_atoms))
    if zero_mean:
        d = shift(d, mean(d))
    return d


def random_marginal(
    rnd: Random, max_atoms: int = 4, zero_mean: bool = False, max_num: int = 9
) -> MarginalDistribution:
    n_atoms = rnd.randint(1, max_atoms)
    atoms: set[Fraction] = set()
    while len(atoms) < n_atoms:
        atoms.add(random_fraction(rnd, max_num))
    m = MarginalDistribution(sorted(atoms), _random_probs(rnd, n_atoms))
    if zero_mean:
        mu = m.mean()
        m = MarginalDistribution([a - mu for a in m.atoms], m.probs)
    return m


def random_product_marginals(
    rnd: Random,
    k: int,
    max_atoms_per: int = 4,
    joint_budget: int = 64,
    zero_mean: bool = False,
) -> list[MarginalDistribution]:
    """k independent marginals whose joint support stays within ``joint_budget``."""
    out = []
    budget = joint_budget
    for _ in range(k):
        cap = max(1, min(max_atoms_per, budget))
        m = random_marginal(rnd, max_atoms=cap, zero_mean=zero_mean)
        out.append(m)
        budget //= max(1, len(m.atoms))
    return out


def random_order_corpus_instance(
    rnd: Random,
    max_n: int = 6,
    max_k: int = 4,
    max_atoms: int = 3,
) -> tuple[Matroid, list[JointDiscreteDistribution]]:
    """Small random-order instance: a matroid plus 2..max_n distributions."""
    m = random_matroid(rnd, max_k=max_k)
    n = rnd.randint(2, max_n)
    ds = [
        random_joint_distribution(rnd, m.ground_size, max_atoms=max_atoms, max_num=6)
        for _ in range(n)
    ]
    return m, ds
