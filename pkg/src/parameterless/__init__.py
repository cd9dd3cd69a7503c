"""Parameter-less evolutionary algorithms over fixed-length bitstrings."""

from .bitstring import (
    EvalCounter,
    Individual,
    Population,
    SelectedSet,
    average_fitness,
    evaluate,
    evaluate_population,
    is_converged,
    make_rng,
    random_individual,
    random_population,
)
from .engines import EngineConfig, EngineId, new_solver, register_engine
from .errors import ConfigurationError, InvariantViolation
from .problems import Problem, ProblemId, ProblemInstance, register_problem
from .race import ParameterlessRace, StepEvent, StopperConfig, StopReason, population_size

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "EngineConfig",
    "EngineId",
    "EvalCounter",
    "Individual",
    "InvariantViolation",
    "ParameterlessRace",
    "Population",
    "Problem",
    "ProblemId",
    "ProblemInstance",
    "SelectedSet",
    "StepEvent",
    "StopReason",
    "StopperConfig",
    "average_fitness",
    "evaluate",
    "evaluate_population",
    "is_converged",
    "make_rng",
    "new_solver",
    "population_size",
    "random_individual",
    "random_population",
    "register_engine",
    "register_problem",
]
