"""Matroids over a ground set of stocks, with rank, density, and greedy optimization.

Stocks are indexed 1..k.  Four representations are supported: uniform
(at most ``cap`` stocks), partition (per-block caps), graphic (edges of a
multigraph, feasible = acyclic), and explicit (a stored family of subsets).
Stock subsets are exposed as ``frozenset[int]`` and handled internally as
bitmasks.  All weights are exact rationals.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import CapacityError, InputError, InvalidMatroidError, UnsupportedKindError

# Exhaustive subset enumeration (density, axiom checks) is only attempted
# up to this ground-set size.
DENSITY_ENUMERATION_LIMIT = 20

Rational = Fraction | int
WeightVector = Sequence[Rational]
StockSet = frozenset[int]


def _as_mask(stocks: Iterable[int], k: int) -> int:
    mask = 0
    for e in stocks:
        if not isinstance(e, int) or isinstance(e, bool) or not 1 <= e <= k:
            raise InputError(f"stock index {e!r} outside 1..{k}")
        mask |= 1 << (e - 1)
    return mask


def _mask_to_set(mask: int) -> StockSet:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return frozenset(out)


def _mask_elements(mask: int):
    e = 1
    while mask:
        if mask & 1:
            yield e
        mask >>= 1
        e += 1


class Matroid(ABC):
    """A ground set 1..k plus a downward-closed feasible-set family."""

    def __init__(self, ground_size: int):
        if not isinstance(ground_size, int) or ground_size < 1:
            raise InputError(f"ground size must be a positive integer, got {ground_size!r}")
        self._k = ground_size
        self._density: Optional[Fraction] = None

    @property
    def ground_size(self) -> int:
        return self._k

    @property
    @abstractmethod
    def kind(self) -> str:
        """Short tag naming the representation ("uniform", "graphic", ...)."""

    def elements(self) -> range:
        return range(1, self._k + 1)

    @abstractmethod
    def _feasible_mask(self, mask: int) -> bool:
        """Feasibility test on a bitmask (bit e-1 set means stock e present)."""

    def is_feasible(self, stocks: Iterable[int]) -> bool:
        return self._feasible_mask(_as_mask(stocks, self._k))

    def _rank_mask(self, mask: int) -> int:
        # Greedy extension via the feasibility oracle; correct on matroids.
        held = 0
        r = 0
        bit = 1
        while bit <= mask:
            if mask & bit and self._feasible_mask(held | bit):
                held |= bit
                r += 1
            bit <<= 1
        return r

    def rank(self, stocks: Iterable[int]) -> int:
        """Maximum size of a feasible subset of ``stocks``."""
        return self._rank_mask(_as_mask(stocks, self._k))

    def full_rank(self) -> int:
        return self._rank_mask((1 << self._k) - 1)

    def density(self) -> Fraction:
        """Exact max of |X| / rank(X) over nonempty subsets X of the ground set.

        Closed form for uniform matroids; exhaustive enumeration otherwise
        (ground sets up to DENSITY_ENUMERATION_LIMIT elements).
        """
        if self._density is None:
            self._density = self._compute_density()
        return self._density

    def _compute_density(self) -> Fraction:
        k = self._k
        if k > DENSITY_ENUMERATION_LIMIT:
            raise CapacityError(
                f"density enumeration supports at most {DENSITY_ENUMERATION_LIMIT} "
                f"elements, got {k}"
            )
        for e in range(k):
            if not self._feasible_mask(1 << e):
                raise InvalidMatroidError(f"stock {e + 1} is a loop (singleton infeasible)")
        best = Fraction(1)  # attained by any singleton
        for mask in range(3, 1 << k):
            size = mask.bit_count()
            if size <= best:  # ratio is at most size/1, cannot beat current best
                continue
            ratio = Fraction(size, self._rank_mask(mask))
            if ratio > best:
                best = ratio
        return best

    def __repr__(self) -> str:
        return f"{type(self).__name__}(k={self._k})"


class UniformMatroid(Matroid):
    """Feasible sets are all subsets of size at most ``cap``."""

    def __init__(self, ground_size: int, cap: int):
        super().__init__(ground_size)
        if not isinstance(cap, int) or not 1 <= cap <= ground_size:
            raise InputError(f"cap must satisfy 1 <= cap <= {ground_size}, got {cap!r}")
        self.cap = cap

    @property
    def kind(self) -> str:
        return "uniform"

    def _feasible_mask(self, mask: int) -> bool:
        return mask.bit_count() <= self.cap

    def _compute_density(self) -> Fraction:
        return Fraction(self._k, self.cap)

    def __repr__(self) -> str:
        return f"UniformMatroid(k={self._k}, cap={self.cap})"


class PartitionMatroid(Matroid):
    """Disjoint blocks covering 1..k, each with its own cap."""

    def __init__(self, blocks: Sequence[tuple[Iterable[int], int]]):
        if not blocks:
            raise InputError("partition matroid needs at least one block")
        sets = []
        caps = []
        for elems, cap in blocks:
            s = frozenset(elems)
            if not s:
                raise InputError("empty partition block")
            if not isinstance(cap, int) or cap < 1:
                raise InputError(f"block cap must be a positive integer, got {cap!r}")
            sets.append(s)
            caps.append(cap)
        covered: set[int] = set()
        for s in sets:
            if covered & s:
                raise InputError(f"partition blocks overlap on {sorted(covered & s)}")
            covered |= s
        k = len(covered)
        if covered != set(range(1, k + 1)):
            raise InputError("partition blocks must cover exactly 1..k")
        super().__init__(k)
        self.blocks = tuple((s, c) for s, c in zip(sets, caps))
        self._block_masks = tuple((_as_mask(s, k), c) for s, c in self.blocks)

    @property
    def kind(self) -> str:
        return "partition"

    def _feasible_mask(self, mask: int) -> bool:
        return all((mask & bm).bit_count() <= cap for bm, cap in self._block_masks)

    def __repr__(self) -> str:
        parts = ", ".join(f"{sorted(s)}<= {c}" for s, c in self.blocks)
        return f"PartitionMatroid({parts})"


class GraphicMatroid(Matroid):
    """Ground set = edges of an undirected multigraph; feasible = acyclic."""

    def __init__(self, edges: Sequence[tuple[int, int]], num_vertices: Optional[int] = None):
        if not edges:
            raise InputError("graphic matroid needs at least one edge")
        for u, v in edges:
            if u == v:
                raise InvalidMatroidError(f"self-loop edge ({u},{v}) is a matroid loop")
        super().__init__(len(edges))
        self.edges = tuple((u, v) for u, v in edges)
        vertices = {u for u, _ in self.edges} | {v for _, v in self.edges}
        if num_vertices is not None and num_vertices < len(vertices):
            raise InputError("num_vertices smaller than the endpoints present")
        self.num_vertices = num_vertices if num_vertices is not None else len(vertices)

    @property
    def kind(self) -> str:
        return "graphic"

    def _feasible_mask(self, mask: int) -> bool:
        # Union-find over endpoints of the selected edges; a repeated root
        # means the new edge closes a cycle.
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != x:
                parent[x], x = root, parent[x]
            return root

        for e in _mask_elements(mask):
            u, v = self.edges[e - 1]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def __repr__(self) -> str:
        return f"GraphicMatroid(edges={list(self.edges)})"


class ExplicitMatroid(Matroid):
    """Feasible-set family stored outright as a set of bitmasks.

    Construction only checks element ranges; use :func:`verify_matroid_axioms`
    to test whether the family actually forms a matroid.
    """

    def __init__(self, ground_size: int, feasible_sets: Iterable[Iterable[int]]):
        super().__init__(ground_size)
        self.feasible_masks = frozenset(_as_mask(s, ground_size) for s in feasible_sets)

    @classmethod
    def from_masks(cls, ground_size: int, masks: Iterable[int]) -> "ExplicitMatroid":
        family = frozenset(masks)
        for x in family:
            if x < 0 or x >> ground_size:
                raise InputError(f"mask {x:#x} outside the {ground_size}-element ground set")
        m = cls.__new__(cls)
        Matroid.__init__(m, ground_size)
        m.feasible_masks = family
        return m

    @property
    def kind(self) -> str:
        return "explicit"

    def _feasible_mask(self, mask: int) -> bool:
        return mask in self.feasible_masks

    def feasible_sets(self) -> list[StockSet]:
        return [_mask_to_set(m) for m in sorted(self.feasible_masks)]

    def __repr__(self) -> str:
        return f"ExplicitMatroid(k={self._k}, {len(self.feasible_masks)} sets)"


def _check_weights(m: Matroid, weights: WeightVector) -> None:
    if len(weights) != m.ground_size:
        raise InputError(
            f"weight vector has length {len(weights)}, expected {m.ground_size}"
        )
    for w in weights:
        if isinstance(w, float):
            raise InputError("weights must be exact rationals (int or Fraction), not float")


def max_weight_feasible_set(m: Matroid, weights: WeightVector) -> tuple[StockSet, Fraction]:
    """Greedy maximum-weight feasible set.

    Elements are scanned in order of (weight descending, index ascending); the
    scan stops at the first strictly negative weight, and each element is kept
    iff adding it preserves feasibility.  Zero-weight elements are eligible.
    Returns the chosen set and its total weight; the weight equals the maximum
    over all feasible sets of the sum of nonnegative member weights.
    """
    _check_weights(m, weights)
    order = sorted(m.elements(), key=lambda e: (-weights[e - 1], e))
    held = 0
    chosen = []
    total = Fraction(0)
    for e in order:
        w = weights[e - 1]
        if w < 0:
            break
        bit = 1 << (e - 1)
        if m._feasible_mask(held | bit):
            held |= bit
            chosen.append(e)
            total += w
    return frozenset(chosen), total


def max_feasible_weight(m: Matroid, weights: WeightVector) -> Fraction:
    """Weight of the maximum-weight feasible set (the set itself discarded)."""
    return max_weight_feasible_set(m, weights)[1]


def find_axiom_violation(m: ExplicitMatroid) -> Optional[str]:
    """Return a description of the first violated matroid axiom, or None.

    Checks, in order: empty set feasible; downward closure; the exchange
    property for |I| = |J| + 1 (which implies it for all larger gaps).
    """
    if not isinstance(m, ExplicitMatroid):
        raise UnsupportedKindError("axiom verification applies to explicit matroids only")
    if m.ground_size > DENSITY_ENUMERATION_LIMIT:
        raise CapacityError(
            f"axiom verification supports at most {DENSITY_ENUMERATION_LIMIT} elements"
        )
    family = m.feasible_masks
    if 0 not in family:
        return "empty set is not feasible"
    k = m.ground_size
    for mask in family:
        bit = 1
        while bit <= mask:
            if mask & bit and (mask ^ bit) not in family:
                return (
                    f"downward closure fails: {sorted(_mask_to_set(mask))} is feasible "
                    f"but {sorted(_mask_to_set(mask ^ bit))} is not"
                )
            bit <<= 1
    by_size: dict[int, list[int]] = {}
    for mask in family:
        by_size.setdefault(mask.bit_count(), []).append(mask)
    # extension_mask[J] = bits e not in J with J+e feasible
    extension: dict[int, int] = {}
    for mask in family:
        ext = 0
        for e in range(k):
            bit = 1 << e
            if not mask & bit and (mask | bit) in family:
                ext |= bit
        extension[mask] = ext
    for size, smaller in sorted(by_size.items()):
        larger = by_size.get(size + 1)
        if not larger:
            continue
        for j_mask in smaller:
            ext = extension[j_mask]
            for i_mask in larger:
                if i_mask & ~j_mask & ext == 0:
                    return (
                        f"exchange fails for I={sorted(_mask_to_set(i_mask))}, "
                        f"J={sorted(_mask_to_set(j_mask))}"
                    )
    return None


def verify_matroid_axioms(m: ExplicitMatroid) -> bool:
    """True iff the explicit family satisfies all three matroid axioms."""
    return find_axiom_violation(m) is None
