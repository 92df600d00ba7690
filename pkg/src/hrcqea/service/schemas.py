"""Request/response models for the optimization service."""
from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str = "ok"


class ProblemInfo(BaseModel):
    name: str
    lower: float
    upper: float
    sense: str


class EvaluateRequest(BaseModel):
    problem: str
    x: list[float]
    instance_text: str | None = None


class EvaluateResponse(BaseModel):
    problem: str
    dimension: int
    value: float


class GenerateKnapsackRequest(BaseModel):
    items: int = Field(ge=1)
    seed: int = Field(ge=0)


class GenerateKnapsackResponse(BaseModel):
    items: int
    capacity: float
    instance_text: str


class ExperimentRequest(BaseModel):
    """Mirror of the experiment configuration; unset operator knobs fall back
    to the problem-kind defaults."""

    problem: str
    dimension: int | None = None
    algorithm: Literal["hrcqea", "qea"] = "hrcqea"
    population_size: int = 10
    t_max: int = 200
    runs: int = 3
    seed: int = 1
    workers: int = 1
    write_back: bool = True
    qea_angle: float = 0.01 * math.pi
    instance_text: str | None = None
    include_traces: bool = True
    c1: float = math.pi
    c2: float = math.pi
    delta: int = 12
    lam: int = 1
    kappa: int | None = None
    tau: int = 500
    m_cross: int = 10
    m1: int | None = None
    m2: int | None = None


class SummaryModel(BaseModel):
    problem: str
    algorithm: str
    dimension: int
    runs: int
    best: float
    worst: float
    mean: float
    sigma: float
    mean_evaluations: float


class ExperimentResponse(BaseModel):
    summary: SummaryModel
    summary_csv: str
    trace_csv: str | None = None
    instance_text: str | None = None


class SummarizeRequest(BaseModel):
    summaries: list[str]


class SummarizeResponse(BaseModel):
    merged_csv: str
