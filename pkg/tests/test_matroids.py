from fractions import Fraction
from random import Random

import pytest

from conftest import brute_force_best_weight, brute_force_density, powerset
from matroid_trading import (
    CapacityError,
    ExplicitMatroid,
    GraphicMatroid,
    InputError,
    InvalidMatroidError,
    PartitionMatroid,
    UniformMatroid,
    UnsupportedKindError,
    find_axiom_violation,
    max_weight_feasible_set,
    verify_matroid_axioms,
)
from matroid_trading.corpus import (
    gf2_independent_masks,
    random_binary_explicit_matroid,
    random_matroid,
    random_weights,
)

F = Fraction


def triangle():
    return GraphicMatroid([(1, 2), (2, 3), (1, 3)])


class TestFeasibility:
    def test_uniform_within_cap(self):
        assert UniformMatroid(4, 2).is_feasible([1, 3])

    def test_uniform_over_cap(self):
        assert not UniformMatroid(4, 2).is_feasible([1, 2, 3])

    def test_graphic_cycle_infeasible(self):
        assert not triangle().is_feasible([1, 2, 3])
        assert triangle().is_feasible([1, 2])

    def test_explicit_lookup(self):
        m = ExplicitMatroid(2, [[], [1], [2]])
        assert not m.is_feasible([1, 2])
        assert m.is_feasible([2])

    def test_partition_caps(self):
        m = PartitionMatroid([([1, 2, 3], 1), ([4, 5], 2)])
        assert m.is_feasible([1, 4, 5])
        assert not m.is_feasible([1, 2])

    def test_out_of_range_index(self):
        with pytest.raises(InputError):
            UniformMatroid(3, 1).is_feasible([4])

    def test_parallel_edges_form_a_cycle(self):
        m = GraphicMatroid([(1, 2), (1, 2)])
        assert not m.is_feasible([1, 2])

    def test_self_loop_rejected(self):
        with pytest.raises(InvalidMatroidError):
            GraphicMatroid([(1, 1)])


class TestRank:
    def test_uniform(self):
        assert UniformMatroid(5, 2).rank([1, 2, 3]) == 2

    def test_spanning_tree(self):
        assert triangle().rank([1, 2, 3]) == 2

    def test_empty(self):
        assert triangle().rank([]) == 0
        assert UniformMatroid(3, 3).rank([]) == 0

    def test_full_rank_matches_greedy_all_ones(self):
        rnd = Random(7)
        for _ in range(50):
            m = random_matroid(rnd, max_k=6)
            chosen, _ = max_weight_feasible_set(m, [1] * m.ground_size)
            assert m.full_rank() == len(chosen)


class TestDensity:
    def test_uniform_closed_form(self):
        assert UniformMatroid(6, 2).density() == 3
        assert UniformMatroid(3, 3).density() == 1
        for k in range(1, 8):
            for cap in range(1, k + 1):
                assert UniformMatroid(k, cap).density() == F(k, cap)

    def test_triangle_by_brute_force(self):
        feasible = [s for s in powerset([1, 2, 3]) if len(s) < 3]
        assert triangle().density() == brute_force_density(feasible, 3) == F(3, 2)

    def test_partition_closed_form(self):
        rnd = Random(11)
        for _ in range(40):
            m = random_matroid(rnd, max_k=6)
            if m.kind != "partition":
                continue
            closed = max(F(1), max(F(len(s), c) for s, c in m.blocks))
            assert m.density() == closed

    def test_explicit_matches_family_scan(self):
        rnd = Random(13)
        for _ in range(25):
            m = random_binary_explicit_matroid(rnd, min_k=3, max_k=7, max_rows=4)
            assert m.density() == brute_force_density(m.feasible_sets(), m.ground_size)

    def test_loop_detected(self):
        m = ExplicitMatroid(2, [[], [1]])  # stock 2 is a loop
        with pytest.raises(InvalidMatroidError):
            m.density()

    def test_enumeration_limit(self):
        m = ExplicitMatroid(21, [[]])
        with pytest.raises(CapacityError):
            m.density()

    def test_density_is_cached(self):
        m = triangle()
        assert m.density() is m.density()


class TestMaxWeightFeasibleSet:
    def test_uniform_spec_example(self):
        chosen, weight = max_weight_feasible_set(UniformMatroid(4, 2), [5, -1, 3, 3])
        assert chosen == {1, 3}
        assert weight == 8

    def test_triangle_ties_pick_lowest_indices(self):
        chosen, weight = max_weight_feasible_set(triangle(), [2, 2, 2])
        assert chosen == {1, 2}
        assert weight == 4

    def test_all_negative_returns_empty(self):
        for m in (triangle(), UniformMatroid(3, 2)):
            chosen, weight = max_weight_feasible_set(m, [-1, F(-1, 2), -3])
            assert chosen == frozenset()
            assert weight == 0

    def test_zero_weights_may_be_included_without_changing_weight(self):
        chosen, weight = max_weight_feasible_set(UniformMatroid(2, 2), [0, 0])
        assert chosen == {1, 2}
        assert weight == 0

    def test_deterministic(self):
        rnd = Random(3)
        for _ in range(30):
            m = random_matroid(rnd, max_k=6)
            w = random_weights(rnd, m.ground_size)
            assert max_weight_feasible_set(m, w) == max_weight_feasible_set(m, w)

    def test_matches_brute_force_on_explicit(self):
        rnd = Random(5)
        for _ in range(30):
            m = random_binary_explicit_matroid(rnd, min_k=3, max_k=7, max_rows=4)
            assert verify_matroid_axioms(m)
            for _ in range(20):
                w = random_weights(rnd, m.ground_size)
                _, weight = max_weight_feasible_set(m, w)
                assert weight == brute_force_best_weight(m.feasible_sets(), w)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            max_weight_feasible_set(UniformMatroid(3, 1), [1, 2])

    def test_float_weights_rejected(self):
        with pytest.raises(InputError):
            max_weight_feasible_set(UniformMatroid(2, 1), [1.5, 2])


class TestAxiomVerification:
    def test_free_matroid(self):
        assert verify_matroid_axioms(ExplicitMatroid(2, [[], [1], [2], [1, 2]]))

    def test_downward_closure_violation(self):
        m = ExplicitMatroid(2, [[], [1, 2]])
        assert not verify_matroid_axioms(m)
        assert "downward closure" in find_axiom_violation(m)

    def test_exchange_violation(self):
        m = ExplicitMatroid(3, [[], [1], [2], [3], [1, 2]])
        assert not verify_matroid_axioms(m)
        assert "exchange" in find_axiom_violation(m)

    def test_missing_empty_set(self):
        assert "empty" in find_axiom_violation(ExplicitMatroid(2, [[1], [2]]))

    def test_non_explicit_unsupported(self):
        with pytest.raises(UnsupportedKindError):
            verify_matroid_axioms(UniformMatroid(3, 1))

    def test_binary_matroids_always_pass(self):
        rnd = Random(17)
        for _ in range(40):
            m = random_binary_explicit_matroid(rnd)
            assert verify_matroid_axioms(m)

    def test_gf2_family_downward_closed(self):
        masks = gf2_independent_masks([0b01, 0b10, 0b11])
        assert masks == {0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110}


class TestConstructionValidation:
    def test_partition_must_cover(self):
        with pytest.raises(InputError):
            PartitionMatroid([([1, 3], 1)])

    def test_partition_disjoint(self):
        with pytest.raises(InputError):
            PartitionMatroid([([1, 2], 1), ([2, 3], 1)])

    def test_partition_cap_positive(self):
        with pytest.raises(InputError):
            PartitionMatroid([([1, 2], 0)])

    def test_uniform_cap_range(self):
        with pytest.raises(InputError):
            UniformMatroid(3, 4)
        with pytest.raises(InputError):
            UniformMatroid(3, 0)

    def test_from_masks_range(self):
        with pytest.raises(InputError):
            ExplicitMatroid.from_masks(2, [0b100])
