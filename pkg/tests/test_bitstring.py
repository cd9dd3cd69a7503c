import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parameterless import (
    ConfigurationError,
    EvalCounter,
    Individual,
    InvariantViolation,
    Population,
    ProblemInstance,
    average_fitness,
    evaluate,
    evaluate_population,
    is_converged,
    make_rng,
    random_individual,
    random_population,
)


class OnesRng:
    def integers(self, low, high, size):
        return np.ones(size, dtype=np.int64)


def test_random_individual_single_bit_heads():
    ind = random_individual(1, OnesRng())
    assert ind.bits.tolist() == [1]
    assert not ind.evaluated


def test_random_individual_rejects_empty_string():
    with pytest.raises(ConfigurationError):
        random_individual(0, make_rng(1))


def test_random_individual_ones_count_is_binomial():
    rng = make_rng(2024)
    ones = [random_individual(50, rng).bits.sum() for _ in range(10000)]
    # sd of the mean is sqrt(12.5 / 10000) ~ 0.035
    assert 23.5 <= np.mean(ones) <= 26.5


def test_same_seed_same_bits():
    a = random_individual(64, make_rng(7, 3))
    b = random_individual(64, make_rng(7, 3))
    c = random_individual(64, make_rng(7, 4))
    assert np.array_equal(a.bits, b.bits)
    assert not np.array_equal(a.bits, c.bits)


def test_rng_is_pinned_to_pcg64_seedsequence():
    # frozen draws guard against silent generator changes
    rng = make_rng(12345, 0)
    expected = np.random.Generator(np.random.PCG64(np.random.SeedSequence([12345, 0])))
    assert rng.integers(0, 2**32, size=5).tolist() == expected.integers(0, 2**32, size=5).tolist()


def test_evaluate_onemax_and_cache():
    problem = ProblemInstance(10, 5)
    counter = EvalCounter()
    ind = Individual(np.ones(5))
    assert evaluate(ind, problem, counter) == 5.0
    assert counter.total == 1
    assert evaluate(ind, problem, counter) == 5.0
    assert counter.total == 1


def test_evaluate_length_mismatch():
    with pytest.raises(InvariantViolation):
        evaluate(Individual(np.ones(4)), ProblemInstance(10, 5), EvalCounter())


def test_noisy_copies_get_different_values():
    problem = ProblemInstance(10, 8, sigma_k=1.0, noise_rng=make_rng(3, 0))
    counter = EvalCounter()
    genome = np.array([1, 0, 1, 1, 0, 0, 1, 0])
    a, b = Individual(genome.copy()), Individual(genome.copy())
    fa, fb = evaluate(a, problem, counter), evaluate(b, problem, counter)
    assert fa != fb
    assert a.noiseless == b.noiseless == 4.0
    # cached noisy value is stable
    assert evaluate(a, problem, counter) == fa
    assert counter.total == 2


def _pop_with_fitness(values):
    n = len(values)
    return Population(np.zeros((n, 3)), np.array(values, float), np.array(values, float),
                      np.ones(n, bool))


def test_average_fitness_small():
    assert average_fitness(_pop_with_fitness([1, 2, 3])) == 2.0


@given(st.floats(-1e6, 1e6, allow_nan=False), st.integers(1, 50))
def test_average_of_constant_is_exact(f, n):
    assert average_fitness(_pop_with_fitness([f] * n)) == f


def test_average_matches_exact_rational_mean():
    from fractions import Fraction

    problem = ProblemInstance(10, 20)
    pop = random_population(100, 20, make_rng(5))
    evaluate_population(pop, problem, EvalCounter())
    exact = sum(Fraction(x) for x in pop.fitness[::-1].tolist()) / pop.size
    assert abs(average_fitness(pop) - float(exact)) <= 1e-12


def test_average_requires_evaluated_members():
    with pytest.raises(InvariantViolation):
        average_fitness(random_population(4, 3, make_rng(1)))


def test_is_converged_cases():
    same = Population(np.tile([0, 1, 1, 0], (5, 1)))
    assert is_converged(same)
    differs = same.genomes.copy()
    differs[3, 2] ^= 1
    assert not is_converged(Population(differs))
    assert is_converged(Population(np.array([[1, 0, 1]])))


@settings(max_examples=200)
@given(st.integers(1, 16).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 1), min_size=5, max_size=5),
                       min_size=n, max_size=n)))
def test_converged_iff_max_hamming_zero(rows):
    genomes = np.array(rows)
    hamming = max(int((a != b).sum()) for a in genomes for b in genomes)
    assert is_converged(Population(genomes)) == (hamming == 0)


def test_evaluate_population_counts_only_cold_members():
    problem = ProblemInstance(10, 6)
    counter = EvalCounter()
    pop = random_population(10, 6, make_rng(9))
    assert evaluate_population(pop, problem, counter) == 10
    assert evaluate_population(pop, problem, counter) == 0
    assert counter.total == 10
    assert np.array_equal(pop.fitness, pop.genomes.sum(axis=1))


def test_population_round_trips_individuals():
    pop = random_population(6, 4, make_rng(1))
    evaluate_population(pop, ProblemInstance(10, 4), EvalCounter())
    again = Population.from_individuals(list(pop))
    assert np.array_equal(again.genomes, pop.genomes)
    assert np.array_equal(again.fitness, pop.fitness)
    assert again.evaluated.all()
