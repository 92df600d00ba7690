"""Experiment harness: the full generation loop, multi-run experiments with
seed ladders, summary statistics, and CSV trace emission.

One run owns one seeded generator, so runs are independent and may execute in
parallel without changing any result. Trace CSVs are assembled in run order
and are byte-identical across re-runs of the same configuration.
"""
from __future__ import annotations

import dataclasses
import math
import multiprocessing
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baseline_qea import DEFAULT_ANGLE, run_qea_knapsack
from .core import Rng, average_rotation_angle, make_rng, new_swarm
from .problems import (
    BENCHMARKS,
    KnapsackInstance,
    format_instance,
    generate_instance,
    make_benchmark,
    make_knapsack_problem,
    parse_instance,
    Problem,
)
from .selection import Sense, leader_index, refresh_bests
from .variation import (
    SearchMode,
    VariationParams,
    crossover_round,
    multi_gene_triggered,
    smm_multi_gene,
    smm_single_gene,
)

TRACE_HEADER = "run,generation,best_fitness,mean_fitness,avg_rotation_angle"
SUMMARY_HEADER = "problem,algorithm,dimension,runs,best,worst,mean,sigma"

ALGORITHMS = ("hrcqea", "qea")

# Fixed fine/coarse mutation counts and multi-gene period for the knapsack
# experiments; benchmark runs derive the counts from the dimension instead.
KNAPSACK_M1 = 45
KNAPSACK_M2 = 15
KNAPSACK_KAPPA = 1


class ConfigError(ValueError):
    """Invalid experiment configuration; reported before any computation."""


def derive_mutation_counts(dimension: int) -> tuple[int, int]:
    """Per-generation fine/coarse mutation counts: 1.5*D and 0.5*D, rounded
    half-up for odd dimensions."""
    return math.floor(1.5 * dimension + 0.5), math.floor(0.5 * dimension + 0.5)


@dataclass
class ExperimentConfig:
    """Everything one experiment needs; plain values so runs can be shipped
    to worker processes."""

    problem: str
    dimension: int | None = None
    algorithm: str = "hrcqea"
    population_size: int = 10
    t_max: int = 4000
    runs: int = 50
    seed: int = 1
    out_dir: str | None = None
    workers: int = 1
    write_back: bool = True
    qea_angle: float = DEFAULT_ANGLE
    instance_path: str | None = None
    instance_text: str | None = None
    c1: float = math.pi
    c2: float = math.pi
    delta: int = 12
    lam: int = 1
    kappa: int | None = None
    tau: int = 500
    m_cross: int = 10
    m1: int | None = None
    m2: int | None = None


@dataclass
class RunRecord:
    """Per-generation trace of one run (t_max + 1 rows including row 0)."""

    generation: np.ndarray
    best_fitness: np.ndarray
    mean_fitness: np.ndarray
    avg_rotation_angle: np.ndarray

    def __post_init__(self):
        n = len(self.generation)
        if not (len(self.best_fitness) == len(self.mean_fitness)
                == len(self.avg_rotation_angle) == n) or n < 1:
            raise ValueError("trace columns must share a positive length")

    def __len__(self) -> int:
        return len(self.generation)


@dataclass
class RunResult:
    seed: int
    final_best: float
    best_x: np.ndarray
    record: RunRecord
    evaluations: int


@dataclass(frozen=True)
class SummaryStats:
    """Best/worst/mean/population-sigma of final best fitness across runs."""

    best: float
    worst: float
    mean: float
    sigma: float

    @classmethod
    def from_finals(cls, finals, sense: Sense) -> "SummaryStats":
        arr = np.asarray(list(finals), dtype=float)
        lo, hi = float(arr.min()), float(arr.max())
        best, worst = (lo, hi) if sense is Sense.MINIMIZE else (hi, lo)
        # the true mean lies in [lo, hi]; summation round-off can escape by
        # an ulp, which would break the best <= mean <= worst contract
        mean = min(max(float(arr.mean()), lo), hi)
        return cls(best=best, worst=worst, mean=mean, sigma=float(arr.std()))


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    problem_name: str
    dimension: int
    sense: Sense
    stats: SummaryStats
    runs: list[RunResult]
    trace_csv: str
    summary_csv: str
    instance_text: str | None
    mean_evaluations: float
    trace_path: str | None = None
    summary_path: str | None = None


# ---------------------------------------------------------------------------
# Single runs
# ---------------------------------------------------------------------------

def resolve_params(config: ExperimentConfig, dimension: int) -> VariationParams:
    """Fill unset operator knobs from the problem kind."""
    knapsack = config.problem == "knapsack"
    if knapsack:
        m1, m2 = KNAPSACK_M1, KNAPSACK_M2
    else:
        m1, m2 = derive_mutation_counts(dimension)
    if config.m1 is not None:
        m1 = config.m1
    if config.m2 is not None:
        m2 = config.m2
    kappa = config.kappa if config.kappa is not None else (KNAPSACK_KAPPA if knapsack else 5)
    try:
        return VariationParams(m1=m1, m2=m2, c1=config.c1, c2=config.c2,
                               delta=config.delta, lam=config.lam, kappa=kappa,
                               tau=config.tau, m_cross=config.m_cross)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def run_hrcqea(problem: Problem, config: ExperimentConfig, seed: int,
               rng: Rng | None = None) -> RunResult:
    """One full run: initialize, then per generation apply m1 fine and m2
    coarse single-gene mutations to every particle, the periodic multi-gene
    mutation to triggered particles, the periodic crossover round, and an
    archive refresh; record one trace row per generation including row 0.
    """
    params = resolve_params(config, problem.dimension)
    if rng is None:
        rng = make_rng(seed)

    evals = [0]
    inner = problem.evaluate

    def counting_evaluate(x):
        evals[0] += 1
        return inner(x)

    problem = dataclasses.replace(problem, evaluate=counting_evaluate)
    sense = problem.sense
    t_max = config.t_max
    swarm = new_swarm(problem, config.population_size, rng)

    best = np.empty(t_max + 1)
    mean = np.empty(t_max + 1)
    theta = np.empty(t_max + 1)

    def snapshot(t: int) -> None:
        best[t] = swarm.global_best.fitness
        mean[t] = sum(p.fitness for p in swarm.particles) / len(swarm.particles)
        theta[t] = average_rotation_angle(swarm.particles[leader_index(swarm, sense)])

    snapshot(0)
    for t in range(1, t_max + 1):
        swarm.generation = t
        for j, p in enumerate(swarm.particles):
            pbx = swarm.personal_bests[j].x
            gbx = swarm.global_best.x
            for _ in range(params.m1):
                smm_single_gene(p, pbx, gbx, problem, SearchMode.FINE, params, rng)
            for _ in range(params.m2):
                smm_single_gene(p, pbx, gbx, problem, SearchMode.COARSE, params, rng)
        if t % params.kappa == 0:
            for j, p in enumerate(swarm.particles):
                if multi_gene_triggered(p, sense):
                    smm_multi_gene(p, swarm.personal_bests[j].x, swarm.global_best.x,
                                   problem, params, rng, t, t_max)
        if t % params.tau == 0:
            crossover_round(swarm, problem, params, rng)
        refresh_bests(swarm, sense)
        snapshot(t)

    record = RunRecord(np.arange(t_max + 1, dtype=float), best, mean, theta)
    return RunResult(seed=seed, final_best=float(swarm.global_best.fitness),
                     best_x=swarm.global_best.x.copy(), record=record,
                     evaluations=evals[0])


def run_qea(inst: KnapsackInstance, config: ExperimentConfig, seed: int) -> RunResult:
    """One baseline QEA run on a knapsack instance (trace rotation-angle
    column is zero; the baseline has no rotation-angle bookkeeping)."""
    rng = make_rng(seed)
    profit, bits, trace = run_qea_knapsack(inst, config.population_size,
                                           config.t_max, rng, config.qea_angle)
    record = RunRecord(trace[:, 0].copy(), trace[:, 1].copy(), trace[:, 2].copy(),
                       np.zeros(len(trace)))
    return RunResult(seed=seed, final_best=float(profit),
                     best_x=bits.astype(float), record=record,
                     evaluations=(config.t_max + 1) * config.population_size)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def validate_config(config: ExperimentConfig) -> None:
    if config.algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {config.algorithm!r}; choose from {ALGORITHMS}")
    known = set(BENCHMARKS) | {"knapsack"}
    if config.problem not in known:
        raise ConfigError(f"unknown problem {config.problem!r}; choose from {sorted(known)}")
    if config.problem == "knapsack":
        if config.instance_path is None and config.instance_text is None and config.dimension is None:
            raise ConfigError("knapsack needs --instance or --dim (item count) to generate one")
    else:
        if config.algorithm == "qea":
            raise ConfigError("the qea baseline only supports knapsack instances")
        if config.dimension is None or config.dimension < 1:
            raise ConfigError(f"problem {config.problem!r} needs --dim >= 1")
    if config.runs < 1:
        raise ConfigError("runs must be >= 1")
    if config.t_max < 1:
        raise ConfigError("gens (t_max) must be >= 1")
    min_pop = 1 if config.algorithm == "qea" else 2
    if config.population_size < min_pop:
        raise ConfigError(f"population size must be >= {min_pop} for {config.algorithm}")
    if config.workers < 1:
        raise ConfigError("workers must be >= 1")
    if config.seed < 0:
        raise ConfigError("seed must be non-negative")


def _resolve_instance(config: ExperimentConfig) -> ExperimentConfig:
    """Pin the knapsack instance as inline text so workers need no files."""
    if config.problem != "knapsack":
        return config
    if config.instance_text is None:
        if config.instance_path is not None:
            try:
                text = Path(config.instance_path).read_text()
            except FileNotFoundError:
                raise ConfigError(f"instance file not found: {config.instance_path}")
            parse_instance(text)
        else:
            inst = generate_instance(config.dimension, make_rng(config.seed))
            text = format_instance(inst)
        config = dataclasses.replace(config, instance_text=text)
    else:
        parse_instance(config.instance_text)
    return config


def execute_run(config: ExperimentConfig, run_index: int) -> RunResult:
    """Run number ``run_index`` of an experiment with seed base+index."""
    seed = config.seed + run_index
    if config.problem == "knapsack":
        inst = parse_instance(config.instance_text)
        if config.algorithm == "qea":
            return run_qea(inst, config, seed)
        rng = make_rng(seed)
        problem = make_knapsack_problem(inst, rng, config.write_back)
        return run_hrcqea(problem, config, seed, rng=rng)
    problem = make_benchmark(config.problem, config.dimension)
    return run_hrcqea(problem, config, seed)


def _pool_worker(args) -> RunResult:
    config, run_index = args
    return execute_run(config, run_index)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Execute ``config.runs`` independent runs (seed ladder base+i),
    aggregate final bests, build the CSV payloads, and write them when an
    output directory is configured."""
    validate_config(config)
    config = _resolve_instance(config)

    if config.problem == "knapsack":
        inst = parse_instance(config.instance_text)
        problem_name = f"knapsack{inst.n}"
        dimension = inst.n
        sense = Sense.MAXIMIZE
    else:
        problem_name = config.problem
        dimension = config.dimension
        sense = Sense.MINIMIZE

    out_dir = None
    if config.out_dir is not None:
        out_dir = Path(config.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if not os.access(out_dir, os.W_OK):
            raise ConfigError(f"output directory {out_dir} is not writable")

    workers = min(config.workers, config.runs)
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_pool_worker,
                               [(config, i) for i in range(config.runs)])
    else:
        results = [execute_run(config, i) for i in range(config.runs)]

    for res in results:
        _check_monotone(res.record.best_fitness, sense, res.seed)

    stats = SummaryStats.from_finals((r.final_best for r in results), sense)
    trace_csv = format_trace_csv(results)
    summary_csv = format_summary_csv([
        summary_row(problem_name, config.algorithm, dimension, config.runs, stats)
    ])
    result = ExperimentResult(
        config=config, problem_name=problem_name, dimension=dimension, sense=sense,
        stats=stats, runs=results, trace_csv=trace_csv, summary_csv=summary_csv,
        instance_text=config.instance_text,
        mean_evaluations=float(np.mean([r.evaluations for r in results])),
    )
    if out_dir is not None:
        write_outputs(result, out_dir)
    return result


def _check_monotone(best: np.ndarray, sense: Sense, seed: int) -> None:
    diffs = np.diff(best)
    bad = np.any(diffs > 0) if sense is Sense.MINIMIZE else np.any(diffs < 0)
    if bad:
        raise RuntimeError(f"non-monotone best-fitness trace in run seeded {seed}")


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def _fmt(v: float) -> str:
    return repr(float(v))


def format_trace_csv(results: list[RunResult]) -> str:
    lines = [TRACE_HEADER]
    for run_index, res in enumerate(results):
        rec = res.record
        for t in range(len(rec)):
            lines.append(
                f"{run_index},{int(rec.generation[t])},{_fmt(rec.best_fitness[t])},"
                f"{_fmt(rec.mean_fitness[t])},{_fmt(rec.avg_rotation_angle[t])}")
    return "\n".join(lines) + "\n"


def summary_row(problem: str, algorithm: str, dimension: int, runs: int,
                stats: SummaryStats) -> str:
    return (f"{problem},{algorithm},{dimension},{runs},{_fmt(stats.best)},"
            f"{_fmt(stats.worst)},{_fmt(stats.mean)},{_fmt(stats.sigma)}")


def format_summary_csv(rows: list[str]) -> str:
    return "\n".join([SUMMARY_HEADER, *rows]) + "\n"


def parse_trace_csv(text: str):
    """Trace rows back as (run, generation, best, mean, theta) float arrays."""
    lines = text.strip().splitlines()
    if not lines or lines[0] != TRACE_HEADER:
        raise ValueError("not a trace CSV (bad header)")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return data


def experiment_label(result: ExperimentResult) -> str:
    return f"{result.problem_name}_{result.config.algorithm}"


def write_outputs(result: ExperimentResult, out_dir: str | Path) -> None:
    """Write trace/summary CSVs (and the pinned auto-generated instance) into
    ``out_dir``; records the paths on the result."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    label = experiment_label(result)
    trace_path = out / f"trace_{label}.csv"
    summary_path = out / f"summary_{label}.csv"
    try:
        trace_path.write_text(result.trace_csv)
        summary_path.write_text(result.summary_csv)
        if result.instance_text is not None and result.config.instance_path is None:
            (out / f"instance_{result.problem_name}.txt").write_text(result.instance_text)
    except OSError as exc:
        raise OSError(f"failed writing experiment outputs under {out}: {exc}") from exc
    result.trace_path = str(trace_path)
    result.summary_path = str(summary_path)


def merge_summaries(texts: list[str]) -> str:
    """Combine summary CSVs into one, sorted by (problem, algorithm)."""
    rows: list[str] = []
    for text in texts:
        lines = [ln for ln in text.strip().splitlines() if ln]
        if not lines or lines[0] != SUMMARY_HEADER:
            raise ValueError("not a summary CSV (bad header)")
        rows.extend(lines[1:])
    rows.sort(key=lambda ln: (ln.split(",")[0], ln.split(",")[1]))
    return format_summary_csv(rows)


# ---------------------------------------------------------------------------
# Flat key=value config files
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "problem": ("problem", str),
    "dim": ("dimension", int),
    "algo": ("algorithm", str),
    "pop": ("population_size", int),
    "gens": ("t_max", int),
    "runs": ("runs", int),
    "seed": ("seed", int),
    "out": ("out_dir", str),
    "workers": ("workers", int),
    "instance": ("instance_path", str),
    "write_back": ("write_back", bool),
    "qea_angle": ("qea_angle", float),
    "c1": ("c1", float),
    "c2": ("c2", float),
    "delta": ("delta", int),
    "lambda": ("lam", int),
    "kappa": ("kappa", int),
    "tau": ("tau", int),
    "m_cross": ("m_cross", int),
    "m1": ("m1", int),
    "m2": ("m2", int),
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat ``key = value`` file ('#' starts a comment line)."""
    settings: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        settings[key] = value
    return settings


def build_config(settings: dict[str, str]) -> ExperimentConfig:
    """Turn string settings (config file plus CLI overrides) into a typed
    configuration."""
    if "problem" not in settings:
        raise ConfigError("missing required setting 'problem'")
    kwargs = {}
    for key, value in settings.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown setting {key!r}")
        field, kind = _CONFIG_KEYS[key]
        if kind is bool:
            low = value.lower()
            if low in _TRUE:
                kwargs[field] = True
            elif low in _FALSE:
                kwargs[field] = False
            else:
                raise ConfigError(f"setting {key!r}: expected a boolean, got {value!r}")
        else:
            try:
                kwargs[field] = kind(value)
            except ValueError:
                raise ConfigError(
                    f"setting {key!r}: expected {kind.__name__}, got {value!r}")
    return ExperimentConfig(**kwargs)
