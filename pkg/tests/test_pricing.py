import math
from fractions import Fraction
from random import Random

import numpy as np
import pytest

from matroid_trading import (
    CapacityError,
    InputError,
    JointDiscreteDistribution,
    MarginalDistribution,
    as_fraction,
    format_fraction,
    half_hardness_instance,
    marginal,
    matroid_hardness_instance,
    mean,
    mixture,
    product,
    sample,
    shift,
    uniform_mixture,
    uniform_ratio_hardness_instance,
)
from matroid_trading.corpus import random_joint_distribution

F = Fraction


def two_coin():
    return MarginalDistribution([0, 2], [F(1, 2), F(1, 2)])


class TestConstruction:
    def test_atoms_sorted_and_merged(self):
        d = JointDiscreteDistribution(1, [(2,), (0,), (2,)], [F(1, 4), F(1, 2), F(1, 4)])
        assert d.atoms == ((F(0),), (F(2),))
        assert d.probs == (F(1, 2), F(1, 2))

    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(InputError):
            JointDiscreteDistribution(1, [(0,), (1,)], [F(1, 2), F(1, 3)])

    def test_zero_probability_rejected(self):
        with pytest.raises(InputError):
            JointDiscreteDistribution(1, [(0,), (1,)], [0, 1])

    def test_wrong_atom_length(self):
        with pytest.raises(InputError):
            JointDiscreteDistribution(2, [(0,)], [1])

    def test_floats_rejected(self):
        with pytest.raises(InputError):
            JointDiscreteDistribution(1, [(0.5,)], [1])
        with pytest.raises(InputError):
            MarginalDistribution([1], [1.0])

    def test_string_rationals_accepted(self):
        d = JointDiscreteDistribution(1, [("1/3",), ("2/3",)], ["1/2", "1/2"])
        assert d.atoms[0][0] == F(1, 3)

    def test_as_fraction_rejects_signed_denominator(self):
        with pytest.raises(InputError):
            as_fraction("3/-4")

    def test_format_always_has_denominator(self):
        assert format_fraction(F(3)) == "3/1"
        assert format_fraction(F(-6, 8)) == "-3/4"


class TestAlgebra:
    def test_mean_point_mass(self):
        d = JointDiscreteDistribution(2, [(0, 0)], [1])
        assert mean(d) == (0, 0)

    def test_mean_two_point(self):
        assert two_coin().to_joint() == JointDiscreteDistribution(1, [(0,), (2,)], ["1/2", "1/2"])
        assert mean(two_coin().to_joint()) == (1,)

    def test_shift_point(self):
        d = JointDiscreteDistribution(2, [(3, 1)], [1])
        assert shift(d, (3, 1)).atoms == ((F(0), F(0)),)

    def test_shift_identity_and_inverse(self):
        rnd = Random(1)
        for _ in range(20):
            d = random_joint_distribution(rnd, k=3, max_atoms=5)
            assert shift(d, (0, 0, 0)) == d
            mu = mean(d)
            assert mean(shift(d, mu)) == (0, 0, 0)
            assert shift(shift(d, mu), tuple(-x for x in mu)) == d

    def test_shift_length_mismatch(self):
        with pytest.raises(InputError):
            shift(JointDiscreteDistribution(1, [(0,)], [1]), (1, 2))

    def test_product_of_two_coins(self):
        d = product([two_coin(), two_coin()])
        assert len(d.atoms) == 4
        assert set(d.probs) == {F(1, 4)}

    def test_product_single_point(self):
        d = product([MarginalDistribution([5], [1])])
        assert d.atoms == ((F(5),),)

    def test_product_capacity(self):
        m = MarginalDistribution(list(range(10)), [F(1, 10)] * 10)
        with pytest.raises(CapacityError):
            product([m, m, m], max_atoms=500)

    def test_product_marginals_recover_inputs(self):
        rnd = Random(2)
        for _ in range(10):
            ms = []
            for _ in range(3):
                atoms = sorted(
                    {F(rnd.randint(-5, 5), rnd.randint(1, 3)) for _ in range(rnd.randint(1, 3))}
                )
                weights = [rnd.randint(1, 5) for _ in atoms]
                tot = sum(weights)
                ms.append(MarginalDistribution(atoms, [F(w, tot) for w in weights]))
            joint = product(ms)
            for s, original in enumerate(ms, start=1):
                assert marginal(joint, s) == original

    def test_mixture_merges(self):
        d0 = JointDiscreteDistribution(1, [(0,)], [1])
        d2 = JointDiscreteDistribution(1, [(2,)], [1])
        mixed = mixture([d0, d2], [F(1, 2), F(1, 2)])
        assert mixed == two_coin().to_joint()
        assert mixture([d0, d0], [F(1, 2), F(1, 2)]) == d0

    def test_mixture_mean_is_average(self):
        rnd = Random(3)
        ds = [random_joint_distribution(rnd, k=2, max_atoms=4) for _ in range(4)]
        mixed = uniform_mixture(ds)
        avg = tuple(sum(mean(d)[s] for d in ds) / 4 for s in range(2))
        assert mean(mixed) == avg

    def test_mixture_weight_validation(self):
        d = JointDiscreteDistribution(1, [(0,)], [1])
        with pytest.raises(InputError):
            mixture([d, d], [F(1, 2), F(1, 3)])
        with pytest.raises(InputError):
            mixture([d], [F(1, 2)])

    def test_mixture_k_mismatch(self):
        d1 = JointDiscreteDistribution(1, [(0,)], [1])
        d2 = JointDiscreteDistribution(2, [(0, 0)], [1])
        with pytest.raises(InputError):
            mixture([d1, d2], [F(1, 2), F(1, 2)])

    def test_probabilities_sum_exactly_one(self):
        rnd = Random(4)
        for _ in range(30):
            d = random_joint_distribution(rnd, k=2, max_atoms=6, zero_mean=True)
            assert sum(d.probs) == 1


class TestSampling:
    def test_point_mass_always(self):
        d = JointDiscreteDistribution(2, [(1, 2)], [1])
        rng = np.random.default_rng(0)
        assert all(sample(d, rng) == (1, 2) for _ in range(20))

    def test_identical_seeds_identical_draws(self):
        d = two_coin().to_joint()
        rng1, rng2 = np.random.default_rng(9), np.random.default_rng(9)
        assert [sample(d, rng1) for _ in range(50)] == [sample(d, rng2) for _ in range(50)]

    def test_empirical_frequency_within_three_stderr(self):
        d = two_coin().to_joint()
        rng = np.random.default_rng(123)
        n = 100_000
        hits = sum(1 for _ in range(n) if sample(d, rng) == (F(2),))
        stderr = math.sqrt(0.25 / n)  # binomial with p = 1/2
        assert abs(hits / n - 0.5) < 3 * stderr


class TestHardnessGenerators:
    def test_matroid_hardness_probabilities(self):
        d = matroid_hardness_instance(2, 1, F(1, 2))
        by_atom = dict(d.items())
        assert by_atom[(F(0), F(0))] == F(1, 2)
        assert by_atom[(F(-2), F(-2))] == F(1, 4)
        assert by_atom[(F(4), F(0))] == F(1, 8)
        assert by_atom[(F(0), F(4))] == F(1, 8)

    def test_matroid_hardness_zero_mean(self):
        for k, r, eps in [(2, 1, F(1, 2)), (4, 2, F(1, 10)), (3, 3, F(1, 7))]:
            d = matroid_hardness_instance(k, r, eps)
            assert mean(d) == tuple([F(0)] * k)
            assert len(d.atoms) == k + 2

    def test_matroid_hardness_epsilon_boundary(self):
        with pytest.raises(InputError):
            matroid_hardness_instance(2, 1, 1)
        with pytest.raises(InputError):
            matroid_hardness_instance(2, 1, 0)
        with pytest.raises(InputError):
            matroid_hardness_instance(2, 3, F(1, 2))

    def test_uniform_ratio_marginals(self):
        ms = uniform_ratio_hardness_instance(2, F(1, 2))
        assert len(ms) == 2
        assert ms[0].atoms == (F(0), F(2))
        assert ms[0].probs == (F(1, 2), F(1, 2))
        assert all(m.mean() == 1 for m in ms)

    def test_half_hardness_marginals(self):
        ms = half_hardness_instance(3, F(1, 4))
        assert ms[0].atoms == (F(-4), F(0), F(4))
        assert ms[0].probs == (F(1, 4), F(1, 2), F(1, 4))
        assert all(m.mean() == 0 for m in ms)

    def test_half_hardness_epsilon_boundary(self):
        with pytest.raises(InputError):
            half_hardness_instance(2, F(1, 2))
