"""Batch driver: parameter files, seeded runs, run logs and statistics files.

Run ``r`` of a batch uses base seed ``seed + r``.  Within a run, slot ``i``
draws from stream ``i + 1`` of that seed and fitness noise from stream 0,
so a run's trajectory never depends on how runs are spread across workers.
"""

from __future__ import annotations

import logging
import math
import os
import statistics
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .bitstring import make_rng
from .engines import EngineConfig, EngineId, get_engine, load_engine_config, new_solver
from .errors import ConfigurationError
from .keyvalue import format_lines, parse_lines
from .problems import ProblemInstance, get_problem
from .race import CATCH_UP, CONVERGENCE, ParameterlessRace, StepEvent, StopperConfig, StopReason

log = logging.getLogger(__name__)

NOISE_STREAM = 0
OPTIMUM = "optimum"


@dataclass
class RunConfig:
    problem_type: int
    string_size: int
    e_alg: int
    trap_k: int = 4
    sigma_k: float = 0.0
    ea_param_file: str | None = None
    n0: int = 10
    num_runs: int = 1
    seed: int = 0
    output_dir: str = "."
    stopper: StopperConfig = field(default_factory=StopperConfig)
    # targetFitness = optimum resolves to the problem's known maximum
    target_is_optimum: bool = False
    engine_config: EngineConfig = field(default_factory=EngineConfig)
    base_dir: str = field(default=".", compare=False)

    def problem(self, noise_seed: int | None = None) -> ProblemInstance:
        rng = make_rng(self.seed if noise_seed is None else noise_seed, NOISE_STREAM)
        return ProblemInstance(self.problem_type, self.string_size, self.trap_k, self.sigma_k,
                               rng if self.sigma_k > 0 else None)

    def effective_stopper(self) -> StopperConfig:
        if self.target_is_optimum:
            problem = ProblemInstance(self.problem_type, self.string_size, self.trap_k)
            return replace(self.stopper, target_fitness=problem.optimum_of())
        return self.stopper

    @property
    def engine_name(self) -> str:
        try:
            return EngineId(self.e_alg).name
        except ValueError:
            return get_engine(self.e_alg).name

    @property
    def problem_name(self) -> str:
        return get_problem(self.problem_type).name


def _nonneg_int(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise ValueError(raw)
    return value


def _pos_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise ValueError(raw)
    return value


def _n0(raw: str) -> int:
    value = int(raw)
    if value < 2:
        raise ValueError(raw)
    return value


def _nonneg_float(raw: str) -> float:
    value = float(raw)
    if not value >= 0:
        raise ValueError(raw)
    return value


# file key -> (attribute, parser, lives on the stopper)
RUN_KEYS = {
    "problemType": ("problem_type", int, False),
    "stringSize": ("string_size", _pos_int, False),
    "trapK": ("trap_k", _pos_int, False),
    "sigmaK": ("sigma_k", _nonneg_float, False),
    "eAlg": ("e_alg", int, False),
    "eaParamFile": ("ea_param_file", str, False),
    "N0": ("n0", _n0, False),
    "numRuns": ("num_runs", _pos_int, False),
    "seed": ("seed", _nonneg_int, False),
    "outputDir": ("output_dir", str, False),
    "maxEvaluations": ("max_evaluations", _nonneg_int, True),
    "targetFitness": ("target_fitness", float, True),
    "targetTolerance": ("target_tolerance", _nonneg_float, True),
    "maxLadderIndex": ("max_ladder_index", _nonneg_int, True),
    "maxWallClock": ("max_wall_clock", _nonneg_float, True),
    "maxStepsOfLargest": ("max_steps_of_largest", _pos_int, True),
}
REQUIRED_KEYS = ("problemType", "stringSize", "eAlg")


def parse_config_text(text: str, source: str = "<string>", base_dir: str | Path = ".") -> RunConfig:
    values, stop_values, lines = {}, {}, {}
    target_is_optimum = False
    for lineno, key, raw in parse_lines(text, source):
        if key not in RUN_KEYS:
            raise ConfigurationError(f"{source}:{lineno}: unknown key {key!r}")
        name, conv, on_stopper = RUN_KEYS[key]
        lines[key] = lineno
        if key == "targetFitness" and raw == OPTIMUM:
            target_is_optimum = True
            continue
        try:
            value = conv(raw)
        except ValueError:
            raise ConfigurationError(
                f"{source}:{lineno}: invalid value {raw!r} for {key}"
            ) from None
        (stop_values if on_stopper else values)[name] = value

    missing = [k for k in REQUIRED_KEYS if k not in lines]
    if missing:
        raise ConfigurationError(f"{source}: missing required keys: {', '.join(missing)}")

    def fail(key, exc):
        return ConfigurationError(f"{source}:{lines.get(key, '?')}: {key}: {exc}")

    try:
        get_problem(values["problem_type"])
    except ConfigurationError as exc:
        raise fail("problemType", exc) from None
    try:
        get_engine(values["e_alg"])
    except ConfigurationError as exc:
        raise fail("eAlg", exc) from None

    engine_config = EngineConfig()
    if "ea_param_file" in values:
        path = Path(values["ea_param_file"])
        if not path.is_absolute():
            path = Path(base_dir) / path
        try:
            engine_config = load_engine_config(path)
        except ConfigurationError as exc:
            raise fail("eaParamFile", exc) from None

    config = RunConfig(
        **values,
        stopper=StopperConfig(**stop_values),
        target_is_optimum=target_is_optimum,
        engine_config=engine_config,
        base_dir=str(base_dir),
    )
    try:
        ProblemInstance(config.problem_type, config.string_size, config.trap_k)
    except ConfigurationError as exc:
        raise fail("stringSize", exc) from None
    return config


def parse_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read parameters file {path}: {exc}") from None
    return parse_config_text(text, str(path), base_dir=path.parent)


def format_config(config: RunConfig) -> str:
    """Render every effective setting, defaults included, as a parameters file."""
    items = []
    for key, (name, _, on_stopper) in RUN_KEYS.items():
        if key == "targetFitness" and config.target_is_optimum:
            items.append((key, OPTIMUM))
            continue
        items.append((key, getattr(config.stopper if on_stopper else config, name)))
    return format_lines(items)


@dataclass
class RunStats:
    run_index: int
    success: bool
    evals_to_target: int | None
    best_fitness: float
    largest_population_size: int
    steps_executed: int
    wall_clock: float = field(default=0.0, compare=False)
    stop_reason: str = ""
    error: str | None = None


def build_race(config: RunConfig, run_index: int, sink=None) -> ParameterlessRace:
    seed = config.seed + run_index
    problem = config.problem(noise_seed=seed)

    def make_solver(index, size):
        return new_solver(config.e_alg, size, problem, config.engine_config,
                          make_rng(seed, index + 1))

    return ParameterlessRace(make_solver, n0=config.n0, sink=sink)


def run_single(config: RunConfig, run_index: int, sink=None) -> RunStats:
    """One seeded race until a stop criterion fires.

    Engine or problem errors end the run with ``error`` set instead of
    propagating, so a batch can continue.
    """
    stopper = config.effective_stopper()
    start = time.perf_counter()
    race = build_race(config, run_index, sink)
    reason, error = None, None
    try:
        reason = race.run(stopper)
    except Exception as exc:  # recorded per run, see docstring
        log.exception("run %d failed", run_index)
        error = f"{type(exc).__name__}: {exc}"
    success = reason is StopReason.TARGET_FITNESS
    largest = race.largest_created()
    return RunStats(
        run_index=run_index,
        success=success,
        evals_to_target=race.best.evals_at_discovery if success else None,
        best_fitness=race.best.fitness if race.best else math.nan,
        largest_population_size=largest.size if largest else 0,
        steps_executed=race.steps,
        wall_clock=time.perf_counter() - start,
        stop_reason=reason.value if reason else "",
        error=error,
    )


def _run_collect(args) -> tuple[list[StepEvent], RunStats]:
    config, run_index = args
    events: list[StepEvent] = []
    stats = run_single(config, run_index, sink=events.append)
    return events, stats


@dataclass
class BatchSummary:
    runs: int
    successes: int
    success_rate: float
    mean_evals_to_target: float
    stddev_evals_to_target: float
    mean_largest_population_size: float


def summarize(stats: list[RunStats]) -> BatchSummary:
    hits = [s.evals_to_target for s in stats if s.success]
    return BatchSummary(
        runs=len(stats),
        successes=len(hits),
        success_rate=len(hits) / len(stats) if stats else math.nan,
        mean_evals_to_target=statistics.fmean(hits) if hits else math.nan,
        stddev_evals_to_target=statistics.stdev(hits) if len(hits) > 1 else (0.0 if hits else math.nan),
        mean_largest_population_size=(
            statistics.fmean(s.largest_population_size for s in stats) if stats else math.nan
        ),
    )


def run_batch(config: RunConfig, jobs: int = 1, write: bool = True):
    """Run ``config.num_runs`` races, optionally in worker processes.

    Output is identical for any ``jobs``.  Returns ``(stats, summary, paths)``
    where ``paths`` is ``None`` when ``write`` is false.
    """
    tasks = [(config, r) for r in range(config.num_runs)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(_run_collect, tasks))
    else:
        results = [_run_collect(t) for t in tasks]
    events = [(stats.run_index, run_events) for run_events, stats in results]
    stats = [s for _, s in results]
    summary = summarize(stats)
    paths = write_outputs(events, stats, config) if write else None
    return stats, summary, paths


# file formats

LOG_COLUMNS = ("runIndex", "step", "slotIndex", "popSize", "generation",
               "avgFitness", "bestFitness", "totalEvals", "events")
STATS_COLUMNS = ("runIndex", "success", "evalsToTarget", "bestFitness",
                 "largestPopulationSize", "stepsExecuted", "stopReason", "status")
SUMMARY_KEYS = ("runs", "successes", "successRate", "meanEvalsToTarget",
                "stddevEvalsToTarget", "meanLargestPopulationSize")
_FLAG = {CONVERGENCE: "ELIM-CONV", CATCH_UP: "ELIM-CATCHUP"}
_REASON = {v: k for k, v in _FLAG.items()}


def fmt(x: float) -> str:
    return format(x, ".15g")


def format_event_flags(event: StepEvent) -> str:
    flags = []
    if event.created_slot is not None:
        flags.append("CREATE")
    for reason in (CONVERGENCE, CATCH_UP):
        gone = [str(i) for i, r in event.eliminations if r == reason]
        if gone:
            flags.append(f"{_FLAG[reason]}={','.join(gone)}")
    return ";".join(flags) or "-"


def format_log_row(run_index: int, e: StepEvent) -> str:
    return "\t".join([
        str(run_index), str(e.step), str(e.slot_index), str(e.pop_size), str(e.generation),
        fmt(e.avg_fitness), fmt(e.best_fitness), str(e.total_evals), format_event_flags(e),
    ])


def read_log(path: str | Path) -> list[tuple[int, StepEvent]]:
    rows = []
    with open(path) as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if tuple(header) != LOG_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            run, step, slot, size, gen = map(int, parts[:5])
            eliminations, created = [], None
            if parts[8] != "-":
                for flag in parts[8].split(";"):
                    if flag == "CREATE":
                        created = slot
                        continue
                    name, _, indices = flag.partition("=")
                    eliminations += [(int(i), _REASON[name]) for i in indices.split(",")]
            rows.append((run, StepEvent(step, slot, size, gen, float(parts[5]), float(parts[6]),
                                        int(parts[7]), eliminations, created)))
    return rows


def format_stats_row(s: RunStats) -> str:
    return "\t".join([
        str(s.run_index), "1" if s.success else "0",
        "-" if s.evals_to_target is None else str(s.evals_to_target),
        fmt(s.best_fitness), str(s.largest_population_size), str(s.steps_executed),
        s.stop_reason or "-", "ok" if s.error is None else "error: " + s.error.replace("\t", " "),
    ])


def format_summary(summary: BatchSummary) -> list[str]:
    values = (summary.runs, summary.successes, summary.success_rate, summary.mean_evals_to_target,
              summary.stddev_evals_to_target, summary.mean_largest_population_size)
    return [f"{k}\t{v if isinstance(v, int) else fmt(v)}" for k, v in zip(SUMMARY_KEYS, values)]


def read_stats(path: str | Path) -> tuple[list[RunStats], dict[str, float]]:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if tuple(lines[0].split("\t")) != STATS_COLUMNS:
        raise ValueError(f"{path}: unexpected header {lines[0]}")
    cut = lines.index("# summary")
    stats = []
    for line in lines[1:cut]:
        p = line.split("\t")
        status = p[7]
        stats.append(RunStats(
            run_index=int(p[0]), success=p[1] == "1",
            evals_to_target=None if p[2] == "-" else int(p[2]),
            best_fitness=float(p[3]), largest_population_size=int(p[4]),
            steps_executed=int(p[5]), stop_reason="" if p[6] == "-" else p[6],
            error=None if status == "ok" else status.removeprefix("error: "),
        ))
    summary = {}
    for line in lines[cut + 1:]:
        key, value = line.split("\t")
        summary[key] = float(value)
    return stats, summary


def output_paths(config: RunConfig, output_dir: str | Path | None = None) -> tuple[Path, Path]:
    out = Path(output_dir if output_dir is not None else config.output_dir)
    tag = f"{config.engine_name}_{config.problem_name}"
    return out / f"PARAMETERLESS_{tag}.txt", out / f"PARAMETERLESS-STATS_{tag}.txt"


def _atomic_write(path: Path, lines) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            for line in lines:
                fh.write(line)
                fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_outputs(events, stats: list[RunStats], config: RunConfig,
                  output_dir: str | Path | None = None) -> tuple[Path, Path]:
    """Write the run log and the stats file; ``events`` is ``[(runIndex, [StepEvent])]``."""
    log_path, stats_path = output_paths(config, output_dir)

    def log_lines():
        yield "\t".join(LOG_COLUMNS)
        for run_index, run_events in sorted(events, key=lambda item: item[0]):
            for event in run_events:
                yield format_log_row(run_index, event)

    def stats_lines():
        yield "\t".join(STATS_COLUMNS)
        for s in sorted(stats, key=lambda s: s.run_index):
            yield format_stats_row(s)
        yield "# summary"
        yield from format_summary(summarize(stats))

    _atomic_write(log_path, log_lines())
    _atomic_write(stats_path, stats_lines())
    return log_path, stats_path


__all__ = [
    "BatchSummary", "RunConfig", "RunStats", "build_race", "format_config", "parse_config",
    "parse_config_text", "read_log", "read_stats", "run_batch", "run_single", "summarize",
    "write_outputs",
]
