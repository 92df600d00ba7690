"""Service handlers: pure functions from request models to response models.

The HTTP routes and the CLI both call these, so an experiment launched from
either surface produces identical payloads.
"""
from __future__ import annotations

import numpy as np

from ..core import make_rng
from ..harness import (
    ConfigError,
    ExperimentConfig,
    merge_summaries,
    run_experiment,
)
from ..problems import (
    BENCHMARKS,
    format_instance,
    generate_instance,
    make_benchmark,
    make_knapsack_problem,
    parse_instance,
)
from . import schemas


def health() -> schemas.HealthResponse:
    return schemas.HealthResponse()


def list_problems() -> list[schemas.ProblemInfo]:
    infos = [
        schemas.ProblemInfo(name=name, lower=lo, upper=hi, sense="min")
        for name, (_, lo, hi) in sorted(BENCHMARKS.items())
    ]
    infos.append(schemas.ProblemInfo(name="knapsack", lower=0.0, upper=1.0, sense="max"))
    return infos


def evaluate(req: schemas.EvaluateRequest) -> schemas.EvaluateResponse:
    x = np.asarray(req.x, dtype=float)
    if x.size < 1:
        raise ConfigError("x must be non-empty")
    if req.problem == "knapsack":
        if req.instance_text is None:
            raise ConfigError("knapsack evaluation needs instance_text")
        inst = parse_instance(req.instance_text)
        if inst.n != x.size:
            raise ConfigError(f"x has {x.size} entries but the instance has {inst.n} items")
        problem = make_knapsack_problem(inst, make_rng(0), write_back=False)
    else:
        problem = make_benchmark(req.problem, x.size)
        if np.any(x < problem.lower) or np.any(x > problem.upper):
            raise ConfigError(
                f"x leaves the {req.problem} box [{problem.lower}, {problem.upper}]")
    return schemas.EvaluateResponse(problem=req.problem, dimension=x.size,
                                    value=problem.evaluate(x))


def generate_knapsack(req: schemas.GenerateKnapsackRequest) -> schemas.GenerateKnapsackResponse:
    inst = generate_instance(req.items, make_rng(req.seed))
    return schemas.GenerateKnapsackResponse(
        items=inst.n, capacity=inst.capacity, instance_text=format_instance(inst))


def run(req: schemas.ExperimentRequest) -> schemas.ExperimentResponse:
    config = ExperimentConfig(
        problem=req.problem,
        dimension=req.dimension,
        algorithm=req.algorithm,
        population_size=req.population_size,
        t_max=req.t_max,
        runs=req.runs,
        seed=req.seed,
        workers=req.workers,
        write_back=req.write_back,
        qea_angle=req.qea_angle,
        instance_text=req.instance_text,
        c1=req.c1,
        c2=req.c2,
        delta=req.delta,
        lam=req.lam,
        kappa=req.kappa,
        tau=req.tau,
        m_cross=req.m_cross,
        m1=req.m1,
        m2=req.m2,
    )
    result = run_experiment(config)
    summary = schemas.SummaryModel(
        problem=result.problem_name,
        algorithm=result.config.algorithm,
        dimension=result.dimension,
        runs=result.config.runs,
        best=result.stats.best,
        worst=result.stats.worst,
        mean=result.stats.mean,
        sigma=result.stats.sigma,
        mean_evaluations=result.mean_evaluations,
    )
    return schemas.ExperimentResponse(
        summary=summary,
        summary_csv=result.summary_csv,
        trace_csv=result.trace_csv if req.include_traces else None,
        instance_text=result.instance_text,
    )


def summarize(req: schemas.SummarizeRequest) -> schemas.SummarizeResponse:
    if not req.summaries:
        raise ConfigError("no summaries supplied")
    try:
        merged = merge_summaries(req.summaries)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return schemas.SummarizeResponse(merged_csv=merged)
