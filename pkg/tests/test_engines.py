import collections

import numpy as np
import pytest

from parameterless import (
    ConfigurationError,
    EngineConfig,
    Population,
    ProblemInstance,
    is_converged,
    make_rng,
    new_solver,
)
from parameterless.engines import (
    ECGASolver,
    EngineId,
    SGASolver,
    UMDASolver,
    format_engine_config,
    parse_engine_config,
    run_fixed,
    tournament_select,
    tournament_winners,
)

ONEMAX = 10


def evaluated_pop(genomes, fitness):
    fitness = np.asarray(fitness, float)
    return Population(np.asarray(genomes), fitness, fitness.copy(), np.ones(len(fitness), bool))


def test_engine_ids():
    assert EngineId.SGA == 0
    assert {int(e) for e in EngineId} == {0, 1, 2}


@pytest.mark.parametrize("engine", list(EngineId))
def test_new_solver_builds_evaluated_population(engine):
    solver = new_solver(engine, 10, ProblemInstance(ONEMAX, 12), EngineConfig(), make_rng(1, 1))
    assert solver.population.size == 10
    assert solver.population.evaluated.all()
    assert solver.initial_evaluations == 10


def test_new_solver_rejects_tiny_population():
    with pytest.raises(ConfigurationError):
        new_solver(0, 1, ProblemInstance(ONEMAX, 4), EngineConfig(), make_rng(1))


@pytest.mark.parametrize("engine", list(EngineId))
def test_same_seed_same_trajectory(engine):
    def trajectory():
        s = new_solver(engine, 40, ProblemInstance(15, 16), EngineConfig(), make_rng(5, 1))
        genomes = [s.population.genomes.copy()]
        for _ in range(5):
            s.next_generation()
            genomes.append(s.population.genomes.copy())
        return genomes

    a, b = trajectory(), trajectory()
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_umda_initial_average_near_half_length():
    for seed in range(30):
        s = new_solver(EngineId.UMDA, 64, ProblemInstance(ONEMAX, 20), EngineConfig(),
                       make_rng(seed, 1))
        assert abs(s.initial_report.new_average_fitness - 10) <= 1.5


# selection

def test_tournament_size_one_is_a_permutation():
    pop = evaluated_pop(np.eye(8), np.arange(8))
    winners = tournament_winners(pop.fitness, 1, 8, make_rng(3))
    assert sorted(winners.tolist()) == list(range(8))


def test_full_tournament_returns_best():
    pop = evaluated_pop(np.eye(6), [3, 1, 7, 7, 2, 0])
    for seed in range(20):
        chosen = tournament_select(pop, 6, 1, make_rng(seed))
        assert chosen.size == 1 and chosen.fitness[0] == 7


def test_equal_fitness_selection_is_uniform():
    n, draws = 8, 4000
    fitness = np.zeros(n)
    rng = make_rng(21)
    counts = collections.Counter()
    for _ in range(draws // n):
        counts.update(tournament_winners(fitness, 4, n, rng).tolist())
    # chi-square with 7 dof; 0.999 quantile is 24.3
    expected = draws / n
    chi2 = sum((counts[i] - expected) ** 2 / expected for i in range(n))
    assert chi2 < 24.3


def test_ties_go_to_earliest_shuffled_entrant():
    fitness = np.array([1.0, 1.0, 1.0, 1.0])
    rng_a, rng_b = make_rng(4), make_rng(4)
    winner = tournament_winners(fitness, 4, 1, rng_a)[0]
    assert winner == rng_b.permutation(4)[0]


def test_without_replacement_each_round_uses_distinct_members():
    fitness = np.arange(12.0)
    # s=4, N=12: each of the 4 rounds yields 3 winners from disjoint tournaments
    winners = tournament_winners(fitness, 4, 12, make_rng(8))
    for r in range(4):
        assert len(set(winners[3 * r:3 * r + 3].tolist())) == 3


def test_selection_rejects_oversized_tournament():
    with pytest.raises(ConfigurationError):
        tournament_winners(np.zeros(3), 4, 3, make_rng(1))


# SGA

def test_sga_without_crossover_copies_parents():
    problem = ProblemInstance(ONEMAX, 10)
    s = new_solver(EngineId.SGA, 30, problem, EngineConfig(crossover_probability=0.0),
                   make_rng(2, 1))
    before = set(map(bytes, s.population.genomes))
    report = s.next_generation()
    assert report.evaluations_used == 0
    assert set(map(bytes, s.population.genomes)) <= before


@pytest.mark.parametrize("engine", list(EngineId))
def test_converged_population_stays_converged(engine):
    problem = ProblemInstance(ONEMAX, 8)
    s = new_solver(engine, 20, problem, EngineConfig(), make_rng(1, 1))
    s.population = evaluated_pop(np.tile([1, 0, 1, 1, 0, 0, 1, 0], (20, 1)), [4.0] * 20)
    report = s.next_generation()
    assert report.converged and is_converged(s.population)
    assert s.population.size == 20


@pytest.mark.parametrize("kind", ["uniform", "onePoint"])
def test_sga_crossover_preserves_alleles_per_column(kind):
    problem = ProblemInstance(ONEMAX, 16)
    s = new_solver(EngineId.SGA, 40, problem,
                   EngineConfig(crossover_probability=1.0, crossover_kind=kind, tournament_size=1),
                   make_rng(6, 1))
    before = s.population.genomes.sum(axis=0)
    report = s.next_generation()
    # s=1 selects every member once, crossover only swaps within columns
    assert np.array_equal(s.population.genomes.sum(axis=0), before)
    assert report.evaluations_used == 40


def test_one_point_children_are_prefix_suffix_swaps():
    problem = ProblemInstance(ONEMAX, 10)
    s = new_solver(EngineId.SGA, 2, problem,
                   EngineConfig(crossover_probability=1.0, crossover_kind="onePoint",
                                tournament_size=1), make_rng(0, 1))
    s.population = evaluated_pop(np.array([[0] * 10, [1] * 10]), [0.0, 10.0])
    s.next_generation()
    for child in s.population.genomes:
        cut = int(np.argmax(child != child[0]))
        assert 1 <= cut <= 9
        assert (child[:cut] == child[0]).all() and (child[cut:] != child[0]).all()


def test_sga_average_rarely_decreases():
    steps = ups = 0
    for seed in range(30):
        s = new_solver(EngineId.SGA, 200, ProblemInstance(ONEMAX, 30), EngineConfig(),
                       make_rng(seed, 1))
        prev = s.initial_report.new_average_fitness
        for _ in range(100):
            r = s.next_generation()
            steps += 1
            ups += r.new_average_fitness >= prev
            prev = r.new_average_fitness
            if r.converged:
                break
    assert ups / steps >= 0.95


# UMDA

def test_umda_fixation_and_absorbing_state():
    problem = ProblemInstance(ONEMAX, 6)
    s = new_solver(EngineId.UMDA, 20, problem, EngineConfig(), make_rng(3, 1))
    s.population = evaluated_pop(np.ones((20, 6)), [6.0] * 20)
    report = s.next_generation()
    assert (s.population.genomes == 1).all() and report.converged

    genomes = make_rng(9).integers(0, 2, (20, 6))
    genomes[:, 2] = 0
    s.population = evaluated_pop(genomes, genomes.sum(axis=1))
    s.next_generation()
    assert (s.population.genomes[:, 2] == 0).all()


def test_umda_solves_onemax():
    hits = 0
    for seed in range(30):
        hit, _, _ = run_fixed(EngineId.UMDA, 500, ProblemInstance(ONEMAX, 50), EngineConfig(),
                              make_rng(seed, 1), target=50, max_generations=60)
        hits += hit
    assert hits >= 27


def test_generation_report_counts_new_offspring():
    for cls in (UMDASolver, ECGASolver):
        s = cls(16, ProblemInstance(ONEMAX, 8), EngineConfig(), make_rng(4, 1))
        total = s.counter.total
        report = s.next_generation()
        assert report.evaluations_used == 16 == s.counter.total - total


def test_solver_stop_check_hook():
    problem = ProblemInstance(ONEMAX, 8)
    s = SGASolver(10, problem, EngineConfig(), make_rng(1, 1),
                  stop_check=lambda r: r.new_average_fitness > -1)
    assert s.next_generation().stop_requested


# engine parameter files

def test_engine_config_defaults():
    cfg = EngineConfig()
    assert (cfg.tournament_size, cfg.crossover_probability, cfg.crossover_kind,
            cfg.selected_set_fraction, cfg.max_ecga_group_size) == (4, 0.5, "uniform", 0.5, 8)


def test_engine_file_round_trip():
    cfg = EngineConfig(tournament_size=8, crossover_probability=0.9, crossover_kind="onePoint",
                       selected_set_fraction=0.25, max_ecga_group_size=5)
    assert parse_engine_config(format_engine_config(cfg)) == cfg


@pytest.mark.parametrize("text", ["tournamentSize = 0", "crossoverKind = twoPoint",
                                  "mutationRate = 0.1", "crossoverProbability = high",
                                  "tournamentSize 4"])
def test_engine_file_errors(text):
    with pytest.raises(ConfigurationError):
        parse_engine_config(text)
