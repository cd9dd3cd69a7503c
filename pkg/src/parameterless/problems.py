"""Bitstring benchmark problems selected by menu id.

ONE problems are maximised by the all-ones string.  Each ZERO problem uses
the same block function applied to the number of zeros in a block, so the
all-zeros string is its optimum.  Fitness functions are vectorised: they
take a ``(n, length)`` genome array and return ``n`` values.

New problems plug in by subclassing :class:`Problem` and calling
:func:`register_problem` with an unused menu id.
"""

from __future__ import annotations

import enum
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError

DECEPTIVE3_TABLE = (0.9, 0.8, 0.0, 1.0)
TRAP_LOW = 0.9


class ProblemId(enum.IntEnum):
    ZERO_MAX = 0
    ZERO_QUADRATIC = 1
    ZERO_DECEPTIVE3 = 2
    ZERO_DECEPTIVE3_BIPOLAR = 3
    ZERO_DECEPTIVE3_OVERLAPPING = 4
    ZERO_TRAP_K = 5
    ZERO_UNIFORM_6BLOCKS = 6
    ONE_MAX = 10
    QUADRATIC = 11
    DECEPTIVE3 = 12
    DECEPTIVE3_BIPOLAR = 13
    DECEPTIVE3_OVERLAPPING = 14
    TRAP_K = 15
    UNIFORM_6BLOCKS = 16
    HIERARCHICAL_TRAP_ONE = 21
    HIERARCHICAL_TRAP_TWO = 22


class Problem(ABC):
    """A noiseless fitness function over fixed-length bitstrings."""

    name: str = "Problem"

    def validate(self, string_size: int, trap_k: int) -> None:
        if string_size < 1:
            raise ConfigurationError(f"stringSize must be >= 1, got {string_size}")

    @abstractmethod
    def compute_fitness(self, genomes: np.ndarray, trap_k: int) -> np.ndarray:
        """Noiseless fitness of each row of ``genomes``."""

    @abstractmethod
    def optimum(self, string_size: int, trap_k: int) -> float:
        """Global maximum of the noiseless function."""

    def optimal_string(self, string_size: int, trap_k: int) -> np.ndarray:
        return np.ones(string_size, dtype=np.uint8)


class BlockProblem(Problem):
    """Sum of a unitation table over consecutive, non-overlapping blocks."""

    def __init__(self, name: str, table: Callable[[int], tuple], block: Callable[[int], int],
                 zero: bool = False):
        self.name = name
        self._table = table
        self._block = block
        self.zero = zero

    def block_size(self, trap_k: int) -> int:
        return self._block(trap_k)

    def table(self, trap_k: int) -> np.ndarray:
        return np.asarray(self._table(trap_k), dtype=float)

    def validate(self, string_size: int, trap_k: int) -> None:
        super().validate(string_size, trap_k)
        self.table(trap_k)
        k = self.block_size(trap_k)
        if string_size % k:
            raise ConfigurationError(
                f"{self.name} needs stringSize divisible by {k}, got {string_size}"
            )

    def block_values(self, genomes: np.ndarray, trap_k: int) -> np.ndarray:
        """Per-block contributions, shape ``(n, length // k)``."""
        k = self.block_size(trap_k)
        genomes = np.asarray(genomes)
        u = genomes.reshape(genomes.shape[0], -1, k).sum(axis=2, dtype=np.intp)
        if self.zero:
            u = k - u
        return self.table(trap_k)[u]

    def compute_fitness(self, genomes, trap_k):
        return self.block_values(genomes, trap_k).sum(axis=1)

    def optimum(self, string_size, trap_k):
        return string_size // self.block_size(trap_k) * float(self.table(trap_k).max())

    def optimal_string(self, string_size, trap_k):
        fill = 0 if self.zero else 1
        return np.full(string_size, fill, dtype=np.uint8)


class OverlappingDeceptive3(Problem):
    """3-bit deceptive blocks where block j covers bits 2j, 2j+1 and 2j+2."""

    def __init__(self, name: str, zero: bool = False):
        self.name = name
        self.zero = zero

    def validate(self, string_size, trap_k):
        super().validate(string_size, trap_k)
        if string_size < 3 or string_size % 2 == 0:
            raise ConfigurationError(
                f"{self.name} needs an odd stringSize >= 3, got {string_size}"
            )

    def block_values(self, genomes, trap_k):
        g = np.asarray(genomes, dtype=np.intp)
        u = g[:, 0:-2:2] + g[:, 1:-1:2] + g[:, 2::2]
        if self.zero:
            u = 3 - u
        return np.asarray(DECEPTIVE3_TABLE)[u]

    def compute_fitness(self, genomes, trap_k):
        return self.block_values(genomes, trap_k).sum(axis=1)

    def optimum(self, string_size, trap_k):
        return float((string_size - 1) // 2)

    def optimal_string(self, string_size, trap_k):
        return np.full(string_size, 0 if self.zero else 1, dtype=np.uint8)


_NULL = 2


class HierarchicalTrap(Problem):
    """Hierarchical 3-bit traps over a balanced ternary tree.

    Bits are the leaves.  Each triple of child symbols maps to a parent
    symbol (000 -> 0, 111 -> 1, anything else or containing a null -> null).
    Every triple without nulls at tree level ``L`` (leaves' parents are
    level 1) contributes ``3**L * trap(u)`` with
    ``trap(u) = high if u == 3 else low * (2 - u) / 2``.  The root uses
    ``high=1, low=0.9``.  Lower levels use ``high=1`` and ``low=1`` for the
    first variant, ``low = 1 + 0.1 / height`` for the second.
    """

    def __init__(self, name: str, biased_lower_levels: bool):
        self.name = name
        self.biased_lower_levels = biased_lower_levels

    @staticmethod
    def height(string_size: int) -> int:
        h, n = 0, string_size
        while n > 1 and n % 3 == 0:
            n //= 3
            h += 1
        return h if n == 1 else -1

    def validate(self, string_size, trap_k):
        super().validate(string_size, trap_k)
        if self.height(string_size) < 1:
            raise ConfigurationError(
                f"{self.name} needs stringSize = 3**h with h >= 1, got {string_size}"
            )

    def level_params(self, level: int, height: int) -> tuple[float, float]:
        if level == height:
            return 1.0, TRAP_LOW
        if self.biased_lower_levels:
            return 1.0, 1.0 + 0.1 / height
        return 1.0, 1.0

    def compute_fitness(self, genomes, trap_k):
        symbols = np.asarray(genomes, dtype=np.intp)
        n, length = symbols.shape
        height = self.height(length)
        total = np.zeros(n)
        for level in range(1, height + 1):
            triples = symbols.reshape(n, -1, 3)
            valid = (triples != _NULL).all(axis=2)
            u = np.where(valid, triples.sum(axis=2), 0)
            high, low = self.level_params(level, height)
            trap = np.where(u == 3, high, low * (2 - u) / 2.0)
            total += 3.0**level * np.where(valid, trap, 0.0).sum(axis=1)
            symbols = np.where(valid & (u == 0), 0, np.where(valid & (u == 3), 1, _NULL))
        return total

    def optimum(self, string_size, trap_k):
        height = self.height(string_size)
        return float(height * 3**height)


def _trap_table(k: int) -> tuple:
    if k < 2:
        raise ConfigurationError(f"trapK must be >= 2, got {k}")
    return tuple(TRAP_LOW * (k - 1 - u) / (k - 1) for u in range(k)) + (1.0,)


def _bipolar_table(_k: int) -> tuple:
    return tuple(DECEPTIVE3_TABLE[abs(3 - u)] for u in range(7))


def _pair(one_id: ProblemId, zero_id: ProblemId, name: str, table, block,
          zero_name: str | None = None) -> dict:
    return {
        one_id: BlockProblem(name, table, block),
        zero_id: BlockProblem(zero_name or "Zero" + name, table, block, zero=True),
    }


PROBLEMS: dict[int, Problem] = {}
PROBLEMS.update(
    _pair(ProblemId.ONE_MAX, ProblemId.ZERO_MAX, "OneMax", lambda k: (0.0, 1.0), lambda k: 1,
          zero_name="ZeroMax")
)
PROBLEMS.update(
    _pair(ProblemId.QUADRATIC, ProblemId.ZERO_QUADRATIC, "Quadratic",
          lambda k: (0.9, 0.0, 1.0), lambda k: 2)
)
PROBLEMS.update(
    _pair(ProblemId.DECEPTIVE3, ProblemId.ZERO_DECEPTIVE3, "Deceptive3",
          lambda k: DECEPTIVE3_TABLE, lambda k: 3)
)
PROBLEMS.update(
    _pair(ProblemId.DECEPTIVE3_BIPOLAR, ProblemId.ZERO_DECEPTIVE3_BIPOLAR, "Deceptive3Bipolar",
          _bipolar_table, lambda k: 6)
)
PROBLEMS.update(
    _pair(ProblemId.TRAP_K, ProblemId.ZERO_TRAP_K, "TrapK", _trap_table, lambda k: k)
)
PROBLEMS.update(
    _pair(ProblemId.UNIFORM_6BLOCKS, ProblemId.ZERO_UNIFORM_6BLOCKS, "Uniform6Blocks",
          lambda k: (0.0,) * 6 + (1.0,), lambda k: 6)
)
PROBLEMS[ProblemId.DECEPTIVE3_OVERLAPPING] = OverlappingDeceptive3("Deceptive3Overlapping")
PROBLEMS[ProblemId.ZERO_DECEPTIVE3_OVERLAPPING] = OverlappingDeceptive3(
    "ZeroDeceptive3Overlapping", zero=True
)
PROBLEMS[ProblemId.HIERARCHICAL_TRAP_ONE] = HierarchicalTrap("HierarchicalTrapOne", False)
PROBLEMS[ProblemId.HIERARCHICAL_TRAP_TWO] = HierarchicalTrap("HierarchicalTrapTwo", True)

# ZERO id -> ONE id
MIRROR_PAIRS = {int(z): int(z) + 10 for z in range(7)}


def register_problem(problem_id: int, problem: Problem, replace: bool = False) -> None:
    """Make ``problem`` selectable as ``problemType = problem_id``."""
    if problem_id in PROBLEMS and not replace:
        raise ConfigurationError(f"problem id {problem_id} is already registered")
    PROBLEMS[int(problem_id)] = problem


def get_problem(problem_id: int) -> Problem:
    try:
        return PROBLEMS[int(problem_id)]
    except KeyError:
        known = ", ".join(str(k) for k in sorted(PROBLEMS))
        raise ConfigurationError(
            f"unknown problemType {problem_id} (known: {known})"
        ) from None


@dataclass
class ProblemInstance:
    """A configured problem: menu id, string size, trap order and noise level.

    With ``sigma_k > 0`` every evaluation adds ``Normal(0, sigma_k)`` noise
    drawn from ``noise_rng``.
    """

    id: int
    string_size: int
    trap_k: int = 4
    sigma_k: float = 0.0
    noise_rng: np.random.Generator | None = field(default=None, repr=False)

    def __post_init__(self):
        self.definition = get_problem(self.id)
        if self.sigma_k < 0:
            raise ConfigurationError(f"sigmaK must be >= 0, got {self.sigma_k}")
        self.definition.validate(self.string_size, self.trap_k)
        if self.sigma_k > 0 and self.noise_rng is None:
            raise ConfigurationError("a noisy problem needs a noise generator")
        self.optimum_fitness = self.definition.optimum(self.string_size, self.trap_k)

    @property
    def name(self) -> str:
        return self.definition.name

    def compute_fitness(self, genomes) -> np.ndarray:
        genomes = np.asarray(genomes, dtype=np.uint8)
        if genomes.ndim == 1:
            genomes = genomes[None, :]
        if genomes.shape[1] != self.string_size:
            raise ConfigurationError(
                f"{self.name} expects {self.string_size} bits, got {genomes.shape[1]}"
            )
        return np.asarray(self.definition.compute_fitness(genomes, self.trap_k), dtype=float)

    def apply_noise(self, noiseless):
        if self.sigma_k == 0:
            return noiseless
        values = np.asarray(noiseless, dtype=float)
        noisy = values + self.noise_rng.normal(0.0, self.sigma_k, size=values.shape)
        return float(noisy) if noisy.ndim == 0 else noisy

    def evaluate(self, genomes) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(observed, noiseless)`` fitness arrays."""
        clean = self.compute_fitness(genomes)
        return self.apply_noise(clean), clean

    def optimum_of(self) -> float:
        return self.optimum_fitness

    def optimal_string(self) -> np.ndarray:
        return self.definition.optimal_string(self.string_size, self.trap_k)
