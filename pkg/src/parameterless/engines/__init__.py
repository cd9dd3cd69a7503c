"""Generational engines pluggable into the population race."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import ConfigurationError
from ..problems import ProblemInstance
from .base import GenerationReport, Solver
from .config import (
    EngineConfig,
    EngineId,
    format_engine_config,
    load_engine_config,
    parse_engine_config,
)
from .ecga import ECGASolver, MpmModel, build_model
from .selection import tournament_select, tournament_winners
from .sga import SGASolver
from .umda import UMDASolver

ENGINES: dict[int, type[Solver]] = {
    EngineId.SGA: SGASolver,
    EngineId.UMDA: UMDASolver,
    EngineId.ECGA: ECGASolver,
}


def register_engine(engine_id: int, solver_class: type[Solver], replace: bool = False) -> None:
    """Make ``solver_class`` selectable as ``eAlg = engine_id``."""
    if engine_id in ENGINES and not replace:
        raise ConfigurationError(f"engine id {engine_id} is already registered")
    ENGINES[int(engine_id)] = solver_class


def get_engine(engine_id: int) -> type[Solver]:
    try:
        return ENGINES[int(engine_id)]
    except KeyError:
        known = ", ".join(str(k) for k in sorted(ENGINES))
        raise ConfigurationError(f"unknown eAlg {engine_id} (known: {known})") from None


def new_solver(engine: int, pop_size: int, problem: ProblemInstance, config: EngineConfig,
               rng: np.random.Generator,
               stop_check: Callable[[GenerationReport], bool] | None = None) -> Solver:
    return get_engine(engine)(pop_size, problem, config, rng, stop_check=stop_check)


def run_fixed(engine: int, pop_size: int, problem: ProblemInstance, config: EngineConfig,
              rng: np.random.Generator, target: float | None = None,
              max_generations: int = 1000, tolerance: float = 1e-9) -> tuple[bool, int, int]:
    """Run one standalone population until target, convergence or the generation cap.

    Returns ``(reached_target, evaluations, generations)``.
    """
    solver = new_solver(engine, pop_size, problem, config, rng)
    report = solver.initial_report

    def hit(r):
        return target is not None and r.best_individual.noiseless >= target - tolerance

    while not hit(report) and not report.converged and solver.generation < max_generations:
        report = solver.next_generation()
    return hit(report), solver.counter.total, solver.generation


__all__ = [
    "ECGASolver",
    "ENGINES",
    "EngineConfig",
    "EngineId",
    "GenerationReport",
    "MpmModel",
    "SGASolver",
    "Solver",
    "UMDASolver",
    "build_model",
    "format_engine_config",
    "get_engine",
    "load_engine_config",
    "new_solver",
    "parse_engine_config",
    "register_engine",
    "run_fixed",
    "tournament_select",
    "tournament_winners",
]
