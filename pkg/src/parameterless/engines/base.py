"""The generational solver contract every engine implements."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..bitstring import (
    EvalCounter,
    Individual,
    Population,
    average_fitness,
    evaluate_population,
    is_converged,
    random_population,
)
from ..errors import ConfigurationError, InvariantViolation
from ..problems import ProblemInstance
from .config import EngineConfig


@dataclass
class GenerationReport:
    evaluations_used: int
    new_average_fitness: float
    best_individual: Individual
    converged: bool
    stop_requested: bool = False


class Solver(ABC):
    """One population evolved by a fixed generational engine.

    Construction draws and evaluates a random population of ``pop_size``
    members; :attr:`initial_report` describes that state.  Each call to
    :meth:`next_generation` replaces the population wholesale.  An optional
    ``stop_check`` receives every report and sets ``stop_requested``.
    """

    name = "EA"

    def __init__(self, pop_size: int, problem: ProblemInstance, config: EngineConfig,
                 rng: np.random.Generator,
                 stop_check: Callable[[GenerationReport], bool] | None = None):
        if pop_size < 2:
            raise ConfigurationError(f"population size must be >= 2, got {pop_size}")
        self.pop_size = pop_size
        self.problem = problem
        self.config = config
        self.rng = rng
        self.stop_check = stop_check
        self.counter = EvalCounter()
        self.generation = 0
        self.population = random_population(pop_size, problem.string_size, rng)
        self.initial_evaluations = evaluate_population(self.population, problem, self.counter)
        self.initial_report = self._report(self.initial_evaluations)

    @abstractmethod
    def breed(self) -> Population:
        """Offspring for the next generation; cached fitness is kept where valid."""

    def next_generation(self) -> GenerationReport:
        offspring = self.breed()
        if offspring.size != self.pop_size:
            raise InvariantViolation(
                f"{self.name} produced {offspring.size} offspring for a population of {self.pop_size}"
            )
        used = evaluate_population(offspring, self.problem, self.counter)
        self.population = offspring
        self.generation += 1
        return self._report(used)

    def _report(self, used: int) -> GenerationReport:
        report = GenerationReport(
            evaluations_used=used,
            new_average_fitness=average_fitness(self.population),
            best_individual=self.population.best(),
            converged=is_converged(self.population),
        )
        if self.stop_check is not None:
            report.stop_requested = bool(self.stop_check(report))
        return report

    def selected_count(self) -> int:
        return max(1, int(round(self.config.selected_set_fraction * self.pop_size)))
