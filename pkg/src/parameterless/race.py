"""The parameter-less population race.

Slot ``i`` of the ladder evolves a population of ``2**i * n0`` members.
Scheduling follows a simple pointer: after slot ``j`` runs a generation,
the pointer moves to ``j + 1`` if ``j`` has now run a multiple of ``base``
generations, and back to the smallest active slot otherwise.  The step after
any elimination starts from the smallest active slot; if no slot is left,
the next unused ladder index is used.  A slot's population is initialised
as soon as the pointer first moves to it.

After every generation the slot that ran is checked for convergence
(identical genomes), which eliminates it and every smaller slot, then for
catch-up: if its average fitness is at least that of the nearest smaller
active slot, every smaller slot is eliminated.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

from .bitstring import EvalCounter, Individual
from .engines.base import GenerationReport

# int64 ceiling; population sizes beyond it are treated as resource exhaustion
MAX_POPULATION = 2**63 - 1

CONVERGENCE = "convergence"
CATCH_UP = "catch-up"


def population_size(i: int, n0: int) -> int:
    if i < 0:
        raise ValueError(f"ladder index must be >= 0, got {i}")
    if n0 < 1:
        raise ValueError(f"N0 must be >= 1, got {n0}")
    size = n0 << i
    if size > MAX_POPULATION:
        raise OverflowError(f"population size 2**{i} * {n0} exceeds {MAX_POPULATION}")
    return size


class RaceSolver(Protocol):
    initial_report: GenerationReport

    def next_generation(self) -> GenerationReport: ...


SolverFactory = Callable[[int, int], RaceSolver]


@dataclass
class SolverSlot:
    index: int
    size: int
    solver: RaceSolver
    generations: int = 0
    last_average_fitness: float = float("nan")
    active: bool = True


@dataclass
class BestRecord:
    individual: Individual
    fitness: float
    evals_at_discovery: int
    slot_index: int


@dataclass
class StepEvent:
    step: int
    slot_index: int
    pop_size: int
    generation: int
    avg_fitness: float
    best_fitness: float
    total_evals: int
    eliminations: list[tuple[int, str]] = field(default_factory=list)
    created_slot: int | None = None


class StopReason(str, enum.Enum):
    TARGET_FITNESS = "targetFitness"
    MAX_EVALUATIONS = "maxEvaluations"
    MAX_LADDER_INDEX = "maxLadderIndex"
    MAX_WALL_CLOCK = "maxWallClock"
    MAX_STEPS_OF_LARGEST = "maxStepsOfLargest"


@dataclass
class StopperConfig:
    """Stop criteria; any unset field is ignored, and none set means run forever.

    ``max_ladder_index`` stops once a slot beyond that index has been
    created (before it runs).  ``max_steps_of_largest`` stops once the largest created slot
    has run that many generations.  ``max_wall_clock`` is in seconds.
    """

    max_evaluations: int | None = None
    target_fitness: float | None = None
    target_tolerance: float = 1e-9
    max_ladder_index: int | None = None
    max_wall_clock: float | None = None
    max_steps_of_largest: int | None = None

    def any_set(self) -> bool:
        return any(
            v is not None
            for v in (self.max_evaluations, self.target_fitness, self.max_ladder_index,
                      self.max_wall_clock, self.max_steps_of_largest)
        )


class ParameterlessRace:
    """Ladder of populations raced against each other.

    ``make_solver(index, size)`` builds the solver for a new slot.  ``sink``,
    if given, receives every :class:`StepEvent`.  ``elimination_enabled``
    switches off both elimination rules, leaving only the schedule.
    """

    def __init__(self, make_solver: SolverFactory, n0: int = 10, base: int = 4,
                 elimination_enabled: bool = True,
                 sink: Callable[[StepEvent], None] | None = None):
        if base < 2:
            raise ValueError(f"generation ratio must be >= 2, got {base}")
        population_size(0, n0)
        self.make_solver = make_solver
        self.n0 = n0
        self.base = base
        self.elimination_enabled = elimination_enabled
        self.sink = sink
        self.slots: list[SolverSlot] = []
        self.pointer = 0
        self.best: BestRecord | None = None
        self.counter = EvalCounter()
        self.steps = 0
        self.started_at: float | None = None

    # ladder bookkeeping

    def active_indices(self) -> list[int]:
        return [s.index for s in self.slots if s.active]

    def smallest_active(self) -> int | None:
        for slot in self.slots:
            if slot.active:
                return slot.index
        return None

    def largest_created(self) -> SolverSlot | None:
        return self.slots[-1] if self.slots else None

    def start(self) -> None:
        """Initialise slot 0; a no-op once the race has begun."""
        if self.started_at is None:
            self.started_at = time.monotonic()
        if not self.slots:
            self._create(0)

    def _create(self, index: int) -> SolverSlot:
        assert index == len(self.slots), "slots are created in ladder order"
        size = population_size(index, self.n0)
        solver = self.make_solver(index, size)
        report = solver.initial_report
        slot = SolverSlot(index, size, solver, last_average_fitness=report.new_average_fitness)
        self.slots.append(slot)
        self.counter.add(report.evaluations_used)
        self._record_best(report, index)
        return slot

    def _record_best(self, report: GenerationReport, index: int) -> None:
        candidate = report.best_individual
        if self.best is None or candidate.noiseless > self.best.fitness:
            self.best = BestRecord(candidate.copy(), candidate.noiseless, self.counter.total, index)

    # scheduling

    def schedule_step(self) -> int:
        """Index of the slot that runs next, creating it on first visit."""
        self.start()
        if self.pointer >= len(self.slots):
            self._create(self.pointer)
        return self.pointer

    def _advance_pointer(self, ran: int, eliminated: bool) -> None:
        if eliminated:
            smallest = self.smallest_active()
            self.pointer = len(self.slots) if smallest is None else smallest
        elif self.slots[ran].generations % self.base == 0:
            self.pointer = ran + 1
        else:
            self.pointer = self.smallest_active()
        if self.pointer == len(self.slots):
            self._create(self.pointer)

    # elimination rules

    def _deactivate_up_to(self, i: int, include: bool, reason: str) -> list[tuple[int, str]]:
        stop = i + 1 if include else i
        gone = []
        for slot in self.slots[:stop]:
            if slot.active:
                slot.active = False
                gone.append((slot.index, reason))
        return gone

    def convergence_eliminate(self, i: int, report: GenerationReport) -> list[tuple[int, str]]:
        if not report.converged:
            return []
        self._record_best(report, i)
        return self._deactivate_up_to(i, include=True, reason=CONVERGENCE)

    def catch_up_eliminate(self, i: int) -> list[tuple[int, str]]:
        slot = self.slots[i]
        if not slot.active:
            return []
        smaller = [s for s in self.slots[:i] if s.active]
        if not smaller:
            return []
        if slot.last_average_fitness >= smaller[-1].last_average_fitness:
            return self._deactivate_up_to(i, include=False, reason=CATCH_UP)
        return []

    # main loop

    def run_one_step(self) -> StepEvent:
        i = self.schedule_step()
        slot = self.slots[i]
        report = slot.solver.next_generation()
        slot.generations += 1
        slot.last_average_fitness = report.new_average_fitness
        self.counter.add(report.evaluations_used)
        self._record_best(report, i)

        eliminations: list[tuple[int, str]] = []
        if self.elimination_enabled:
            eliminations += self.convergence_eliminate(i, report)
            eliminations += self.catch_up_eliminate(i)
        self._advance_pointer(i, bool(eliminations))

        self.steps += 1
        event = StepEvent(
            step=self.steps,
            slot_index=i,
            pop_size=slot.size,
            generation=slot.generations,
            avg_fitness=report.new_average_fitness,
            best_fitness=self.best.fitness,
            total_evals=self.counter.total,
            eliminations=eliminations,
            created_slot=i if slot.generations == 1 else None,
        )
        if self.sink is not None:
            self.sink(event)
        return event

    def should_stop(self, stopper: StopperConfig) -> StopReason | None:
        if stopper.target_fitness is not None and self.best is not None:
            if self.best.fitness >= stopper.target_fitness - stopper.target_tolerance:
                return StopReason.TARGET_FITNESS
        if stopper.max_evaluations is not None and self.counter.total >= stopper.max_evaluations:
            return StopReason.MAX_EVALUATIONS
        if (stopper.max_ladder_index is not None
                and len(self.slots) - 1 > stopper.max_ladder_index):
            return StopReason.MAX_LADDER_INDEX
        if (stopper.max_wall_clock is not None and self.started_at is not None
                and time.monotonic() - self.started_at >= stopper.max_wall_clock):
            return StopReason.MAX_WALL_CLOCK
        largest = self.largest_created()
        if (stopper.max_steps_of_largest is not None and largest is not None
                and largest.generations >= stopper.max_steps_of_largest):
            return StopReason.MAX_STEPS_OF_LARGEST
        return None

    def run(self, stopper: StopperConfig) -> StopReason:
        """Step until a stop criterion fires. Without criteria this never returns."""
        self.start()
        while True:
            reason = self.should_stop(stopper)
            if reason is not None:
                return reason
            self.run_one_step()
