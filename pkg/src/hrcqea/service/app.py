"""FastAPI app exposing the optimizer as a small service.

Experiments run synchronously in the request; the service is meant for
desk-scale budgets and batch clients (the CLI is one such client).
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..harness import ConfigError
from ..problems import InstanceFormatError
from . import ops, schemas

app = FastAPI(title="hrcqea", version="0.1.0",
              description="Hybrid real-coded quantum evolutionary optimizer")


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return ops.health()


@app.get("/problems", response_model=list[schemas.ProblemInfo])
def problems() -> list[schemas.ProblemInfo]:
    return ops.list_problems()


@app.post("/evaluate", response_model=schemas.EvaluateResponse)
def evaluate(req: schemas.EvaluateRequest) -> schemas.EvaluateResponse:
    try:
        return ops.evaluate(req)
    except (ConfigError, InstanceFormatError, ValueError) as exc:
        raise _bad_request(exc)


@app.post("/knapsack/generate", response_model=schemas.GenerateKnapsackResponse)
def generate_knapsack(req: schemas.GenerateKnapsackRequest) -> schemas.GenerateKnapsackResponse:
    try:
        return ops.generate_knapsack(req)
    except ValueError as exc:
        raise _bad_request(exc)


@app.post("/experiments/run", response_model=schemas.ExperimentResponse)
def run_experiment(req: schemas.ExperimentRequest) -> schemas.ExperimentResponse:
    try:
        return ops.run(req)
    except (ConfigError, InstanceFormatError) as exc:
        raise _bad_request(exc)


@app.post("/summarize", response_model=schemas.SummarizeResponse)
def summarize(req: schemas.SummarizeRequest) -> schemas.SummarizeResponse:
    try:
        return ops.summarize(req)
    except ConfigError as exc:
        raise _bad_request(exc)
