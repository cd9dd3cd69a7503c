"""Fixed-length bitstring individuals and constant-size populations.

Populations store their genomes as a single ``(N, length)`` ``uint8`` array,
with per-member fitness caches.  Every member carries two cached values: the
observed fitness (what selection sees, possibly noisy) and the noiseless
fitness used for best-so-far bookkeeping.

Random streams are numpy ``Generator`` objects backed by PCG64 and seeded
through ``SeedSequence([seed, stream])``, so a ``(seed, stream)`` pair gives
the same draws on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import ConfigurationError, InvariantViolation

if TYPE_CHECKING:
    from .problems import ProblemInstance

_MAX_SEED = 2**64 - 1


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Return the PCG64 generator for ``(seed, stream)``."""
    if not 0 <= seed <= _MAX_SEED:
        raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if stream < 0:
        raise ConfigurationError(f"stream id must be non-negative, got {stream}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


class EvalCounter:
    """Running count of fitness-function evaluations."""

    __slots__ = ("total",)

    def __init__(self, total: int = 0):
        self.total = total

    def add(self, n: int) -> None:
        if n < 0:
            raise InvariantViolation("evaluation counts cannot decrease")
        self.total += n

    def __repr__(self) -> str:
        return f"EvalCounter(total={self.total})"


@dataclass(eq=False)
class Individual:
    bits: np.ndarray
    fitness: float = 0.0
    noiseless: float = 0.0
    evaluated: bool = False

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)

    def __len__(self) -> int:
        return self.bits.shape[0]

    def get_allele(self, position: int) -> int:
        return int(self.bits[position])

    def copy(self) -> Individual:
        return Individual(self.bits.copy(), self.fitness, self.noiseless, self.evaluated)

    def __repr__(self) -> str:
        genome = "".join(map(str, self.bits.tolist()))
        if self.evaluated:
            return f"Individual({genome}, fitness={self.fitness:g})"
        return f"Individual({genome}, unevaluated)"


@dataclass(eq=False)
class Population:
    """A fixed set of individuals stored column-wise.

    ``genomes`` is never resized; engines build a fresh ``Population`` for
    every generation instead of editing one in place.
    """

    genomes: np.ndarray
    fitness: np.ndarray = field(default=None)
    noiseless: np.ndarray = field(default=None)
    evaluated: np.ndarray = field(default=None)

    def __post_init__(self):
        self.genomes = np.ascontiguousarray(self.genomes, dtype=np.uint8)
        if self.genomes.ndim != 2 or self.genomes.shape[0] == 0:
            raise ConfigurationError("a population needs a non-empty 2-D genome array")
        n = self.genomes.shape[0]
        if self.fitness is None:
            self.fitness = np.zeros(n)
        if self.noiseless is None:
            self.noiseless = np.zeros(n)
        if self.evaluated is None:
            self.evaluated = np.zeros(n, dtype=bool)
        self.fitness = np.asarray(self.fitness, dtype=float)
        self.noiseless = np.asarray(self.noiseless, dtype=float)
        self.evaluated = np.asarray(self.evaluated, dtype=bool)
        if not (self.fitness.shape == self.noiseless.shape == self.evaluated.shape == (n,)):
            raise InvariantViolation("fitness caches must have one entry per member")

    @classmethod
    def from_individuals(cls, members: Iterable[Individual]) -> Population:
        members = list(members)
        return cls(
            np.stack([m.bits for m in members]),
            np.array([m.fitness for m in members]),
            np.array([m.noiseless for m in members]),
            np.array([m.evaluated for m in members]),
        )

    @property
    def size(self) -> int:
        return self.genomes.shape[0]

    @property
    def string_size(self) -> int:
        return self.genomes.shape[1]

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> Individual:
        return Individual(
            self.genomes[i].copy(),
            float(self.fitness[i]),
            float(self.noiseless[i]),
            bool(self.evaluated[i]),
        )

    def __iter__(self):
        return (self[i] for i in range(self.size))

    def take(self, indices) -> Population:
        """Copy the members at ``indices`` (caches included) into a new population."""
        indices = np.asarray(indices, dtype=np.intp)
        return type(self)(
            self.genomes[indices],
            self.fitness[indices],
            self.noiseless[indices],
            self.evaluated[indices],
        )

    def best_index(self) -> int:
        """Index of the member with the highest noiseless fitness (first on ties)."""
        _require_evaluated(self)
        return int(np.argmax(self.noiseless))

    def best(self) -> Individual:
        return self[self.best_index()]


class SelectedSet(Population):
    """Output of a selection operator; its size may differ from the source population."""


def random_individual(string_size: int, rng: np.random.Generator) -> Individual:
    if string_size < 1:
        raise ConfigurationError(f"stringSize must be >= 1, got {string_size}")
    return Individual(np.asarray(rng.integers(0, 2, size=string_size), dtype=np.uint8))


def random_population(size: int, string_size: int, rng: np.random.Generator) -> Population:
    if size < 1:
        raise ConfigurationError(f"population size must be >= 1, got {size}")
    if string_size < 1:
        raise ConfigurationError(f"stringSize must be >= 1, got {string_size}")
    return Population(np.asarray(rng.integers(0, 2, size=(size, string_size)), dtype=np.uint8))


def evaluate(ind: Individual, problem: ProblemInstance, counter: EvalCounter) -> float:
    """Evaluate ``ind`` once; later calls return the cached value without counting."""
    if len(ind) != problem.string_size:
        raise InvariantViolation(
            f"individual has {len(ind)} bits, problem expects {problem.string_size}"
        )
    if not ind.evaluated:
        noisy, clean = problem.evaluate(ind.bits[None, :])
        ind.fitness = float(noisy[0])
        ind.noiseless = float(clean[0])
        ind.evaluated = True
        counter.add(1)
    return ind.fitness


def evaluate_population(pop: Population, problem: ProblemInstance, counter: EvalCounter) -> int:
    """Evaluate every member with a cold cache, in index order. Returns the count."""
    if pop.string_size != problem.string_size:
        raise InvariantViolation(
            f"population has {pop.string_size}-bit genomes, problem expects {problem.string_size}"
        )
    cold = np.flatnonzero(~pop.evaluated)
    if cold.size:
        noisy, clean = problem.evaluate(pop.genomes[cold])
        pop.fitness[cold] = noisy
        pop.noiseless[cold] = clean
        pop.evaluated[cold] = True
        counter.add(int(cold.size))
    return int(cold.size)


def _require_evaluated(pop: Population) -> None:
    if not pop.evaluated.all():
        raise InvariantViolation("population has unevaluated members")


def average_fitness(pop: Population) -> float:
    """Mean observed fitness, summed in member index order.

    Computed as ``f0 + sum(f - f0) / N`` with ``f0`` the first member, so a
    population of equal fitness ``f`` averages to exactly ``f``.
    """
    _require_evaluated(pop)
    values = pop.fitness.tolist()
    first = values[0]
    return first + sum((v - first for v in values), 0.0) / pop.size


def is_converged(pop: Population) -> bool:
    """True when every genome equals the first one."""
    return bool((pop.genomes == pop.genomes[0]).all())
