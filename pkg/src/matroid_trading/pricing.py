"""Finite-support joint price distributions over exact rationals.

A joint distribution is a list of price-vector atoms with positive rational
probabilities summing to exactly one.  Atoms are kept sorted lexicographically
and duplicates are merged, so structurally equal distributions compare equal.
Floats are rejected everywhere; prices and probabilities enter as ints,
Fractions, or "p/q" strings.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Sequence

from .errors import CapacityError, InputError

# Default cap on the atom count of a product distribution.
PRODUCT_ATOM_LIMIT = 10_000

PriceVector = tuple[Fraction, ...]
MeanVector = tuple[Fraction, ...]


def as_fraction(value) -> Fraction:
    """Convert an int, Fraction, or "p/q" string to a Fraction; floats refused."""
    if isinstance(value, float):
        raise InputError(f"expected an exact rational, got float {value!r}")
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"cannot interpret {value!r} as a rational") from exc


def format_fraction(value: Fraction) -> str:
    """Serialize as "p/q" (always with an explicit denominator)."""
    return f"{value.numerator}/{value.denominator}"


def _merge(pairs):
    merged: dict = {}
    for atom, prob in pairs:
        merged[atom] = merged.get(atom, Fraction(0)) + prob
    return sorted(merged.items())


class MarginalDistribution:
    """Distribution of a single stock price: rational atoms with probabilities."""

    def __init__(self, atoms: Sequence, probs: Sequence):
        if len(atoms) != len(probs) or not atoms:
            raise InputError("need matching, nonempty atom and probability lists")
        pairs = []
        for a, p in zip(atoms, probs):
            prob = as_fraction(p)
            if prob <= 0:
                raise InputError(f"atom probability must be positive, got {prob}")
            pairs.append((as_fraction(a), prob))
        merged = _merge(pairs)
        self.atoms: tuple[Fraction, ...] = tuple(a for a, _ in merged)
        self.probs: tuple[Fraction, ...] = tuple(p for _, p in merged)
        if sum(self.probs) != 1:
            raise InputError(f"probabilities sum to {sum(self.probs)}, expected 1")

    def mean(self) -> Fraction:
        return sum((p * a for a, p in zip(self.atoms, self.probs)), Fraction(0))

    def items(self):
        return zip(self.atoms, self.probs)

    def to_joint(self) -> "JointDiscreteDistribution":
        return JointDiscreteDistribution(1, [(a,) for a in self.atoms], self.probs)

    def __eq__(self, other):
        return (
            isinstance(other, MarginalDistribution)
            and self.atoms == other.atoms
            and self.probs == other.probs
        )

    def __hash__(self):
        return hash((self.atoms, self.probs))

    def __repr__(self):
        pairs = ", ".join(f"{a}:{p}" for a, p in zip(self.atoms, self.probs))
        return f"MarginalDistribution({pairs})"


class JointDiscreteDistribution:
    """Joint distribution of k stock prices with finitely many vector atoms."""

    def __init__(self, k: int, atoms: Sequence[Sequence], probs: Sequence):
        if not isinstance(k, int) or k < 1:
            raise InputError(f"k must be a positive integer, got {k!r}")
        if len(atoms) != len(probs) or not atoms:
            raise InputError("need matching, nonempty atom and probability lists")
        pairs = []
        for vec, p in zip(atoms, probs):
            prob = as_fraction(p)
            if prob <= 0:
                raise InputError(f"atom probability must be positive, got {prob}")
            tup = tuple(as_fraction(x) for x in vec)
            if len(tup) != k:
                raise InputError(f"atom {tup} has length {len(tup)}, expected {k}")
            pairs.append((tup, prob))
        merged = _merge(pairs)
        self.k = k
        self.atoms: tuple[PriceVector, ...] = tuple(a for a, _ in merged)
        self.probs: tuple[Fraction, ...] = tuple(p for _, p in merged)
        if sum(self.probs) != 1:
            raise InputError(f"probabilities sum to {sum(self.probs)}, expected 1")
        self._cums: list[float] | None = None

    def items(self):
        return zip(self.atoms, self.probs)

    def __len__(self):
        return len(self.atoms)

    def __eq__(self, other):
        return (
            isinstance(other, JointDiscreteDistribution)
            and self.k == other.k
            and self.atoms == other.atoms
            and self.probs == other.probs
        )

    def __hash__(self):
        return hash((self.k, self.atoms, self.probs))

    def __repr__(self):
        return f"JointDiscreteDistribution(k={self.k}, {len(self.atoms)} atoms)"


def mean(d: JointDiscreteDistribution) -> MeanVector:
    """Coordinatewise expectation, exact."""
    out = [Fraction(0)] * d.k
    for atom, p in d.items():
        for s in range(d.k):
            out[s] += p * atom[s]
    return tuple(out)


def shift(d: JointDiscreteDistribution, v: Sequence) -> JointDiscreteDistribution:
    """Subtract ``v`` from every atom; shift(d, mean(d)) has zero mean."""
    vec = tuple(as_fraction(x) for x in v)
    if len(vec) != d.k:
        raise InputError(f"shift vector has length {len(vec)}, expected {d.k}")
    atoms = [tuple(a - x for a, x in zip(atom, vec)) for atom in d.atoms]
    return JointDiscreteDistribution(d.k, atoms, d.probs)


def product(
    marginals: Sequence[MarginalDistribution], *, max_atoms: int = PRODUCT_ATOM_LIMIT
) -> JointDiscreteDistribution:
    """Independent joint distribution of the given per-stock marginals."""
    if not marginals:
        raise InputError("need at least one marginal")
    count = 1
    for m in marginals:
        count *= len(m.atoms)
        if count > max_atoms:
            raise CapacityError(
                f"product distribution would exceed {max_atoms} atoms"
            )
    atoms = []
    probs = []
    for combo in cartesian(*(m.items() for m in marginals)):
        atoms.append(tuple(a for a, _ in combo))
        prob = Fraction(1)
        for _, p in combo:
            prob *= p
        probs.append(prob)
    return JointDiscreteDistribution(len(marginals), atoms, probs)


def marginal(d: JointDiscreteDistribution, s: int) -> MarginalDistribution:
    """Marginal distribution of stock ``s`` (1-based)."""
    if not 1 <= s <= d.k:
        raise InputError(f"stock index {s} outside 1..{d.k}")
    acc: dict[Fraction, Fraction] = {}
    for atom, p in d.items():
        acc[atom[s - 1]] = acc.get(atom[s - 1], Fraction(0)) + p
    return MarginalDistribution(list(acc.keys()), list(acc.values()))


def mixture(
    ds: Sequence[JointDiscreteDistribution], weights: Sequence
) -> JointDiscreteDistribution:
    """Convex combination of distributions sharing the same k."""
    if not ds:
        raise InputError("need at least one distribution")
    if len(weights) != len(ds):
        raise InputError("one weight per distribution required")
    k = ds[0].k
    for d in ds:
        if d.k != k:
            raise InputError("mixture components must share the same number of stocks")
    ws = [as_fraction(w) for w in weights]
    if any(w <= 0 for w in ws) or sum(ws) != 1:
        raise InputError("mixture weights must be positive and sum to exactly 1")
    atoms = []
    probs = []
    for d, w in zip(ds, ws):
        for atom, p in d.items():
            atoms.append(atom)
            probs.append(w * p)
    return JointDiscreteDistribution(k, atoms, probs)


def uniform_mixture(ds: Sequence[JointDiscreteDistribution]) -> JointDiscreteDistribution:
    return mixture(ds, [Fraction(1, len(ds))] * len(ds))


def sample(d: JointDiscreteDistribution, rng) -> PriceVector:
    """Draw one atom by inverse CDF over the canonical (lexicographic) order.

    ``rng`` is a numpy Generator; exactly one uniform is consumed per draw.
    """
    if d._cums is None:
        total = Fraction(0)
        cums = []
        for p in d.probs:
            total += p
            cums.append(float(total))
        d._cums = cums
    u = rng.random()
    idx = bisect_right(d._cums, u)
    if idx >= len(d.atoms):  # guard the top edge against float rounding
        idx = len(d.atoms) - 1
    return d.atoms[idx]


def matroid_hardness_instance(k: int, r: int, epsilon) -> JointDiscreteDistribution:
    """Correlated zero-mean instance that pins the online/offline ratio near r/(k+r).

    Atoms: the zero vector w.p. 1-eps; all coordinates -1/eps w.p.
    eps - k*eps^2/(1+k*eps); and for each stock s a lone spike 1/eps^2 at
    coordinate s, each w.p. eps^2/(1+k*eps).  Pair it with a matroid whose
    ground set has size k and rank r.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {eps}")
    if not isinstance(k, int) or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")
    if not isinstance(r, int) or not 1 <= r <= k:
        raise InputError(f"r must satisfy 1 <= r <= {k}, got {r!r}")
    zero = tuple([Fraction(0)] * k)
    crash = tuple([-1 / eps] * k)
    spike_prob = eps**2 / (1 + k * eps)
    atoms = [zero, crash]
    probs = [1 - eps, eps - k * spike_prob]
    for s in range(k):
        vec = [Fraction(0)] * k
        vec[s] = 1 / eps**2
        atoms.append(tuple(vec))
        probs.append(spike_prob)
    return JointDiscreteDistribution(k, atoms, probs)


def uniform_ratio_hardness_instance(k: int, epsilon) -> list[MarginalDistribution]:
    """k i.i.d. marginals {0 w.p. 1-eps, 1/eps w.p. eps}; each mean is 1."""
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {eps}")
    if not isinstance(k, int) or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")
    m = MarginalDistribution([Fraction(0), 1 / eps], [1 - eps, eps])
    return [m] * k


def half_hardness_instance(k: int, epsilon) -> list[MarginalDistribution]:
    """k i.i.d. three-point marginals {-1/eps, 0, 1/eps} w.p. {eps, 1-2eps, eps}."""
    eps = as_fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise InputError(f"epsilon must lie in (0, 1/2), got {eps}")
    if not isinstance(k, int) or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")
    m = MarginalDistribution(
        [-1 / eps, Fraction(0), 1 / eps], [eps, 1 - 2 * eps, eps]
    )
    return [m] * k
