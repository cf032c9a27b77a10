"""Request and response bodies for the HTTP service."""
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

VerdictName = Literal["sat", "unsat", "unknown"]
RatingName = Literal["A", "B", "C", "D"]


class BenchmarkRequest(BaseModel):
    text: str
    name: str = "input.smt2"


class CheckRequest(BenchmarkRequest):
    profile: Literal["strict", "lenient"] = "strict"


class ViolationModel(BaseModel):
    rule: str
    location: str
    message: str


class CheckResponse(BaseModel):
    verdict: Literal["conformant", "repaired", "rejected"]
    profile: str
    violations: list[ViolationModel]
    records: list[str]


class NormalizeRequest(BenchmarkRequest):
    merge_queries: bool = False


class NormalizeResponse(BaseModel):
    accepted: bool
    text: str = ""
    rule: str = ""
    location: str = ""
    message: str = ""


class ClassifyResponse(BaseModel):
    track: str
    linearity: str | None = None
    theories: str | None = None
    reason: str | None = None
    record: str


class FingerprintResponse(BaseModel):
    algorithm: str
    digest: str


class TimedVerdict(BaseModel):
    verdict: VerdictName
    seconds: float = Field(ge=0)


class RateRequest(BaseModel):
    winner: TimedVerdict
    runner_up: TimedVerdict
    winner_timeout: float = Field(5.0, gt=0)
    runner_up_timeout: float = Field(10.0, gt=0)


class RateResponse(BaseModel):
    rating: RatingName


class SelectRequest(BaseModel):
    repository: str
    cap: int = Field(ge=0)
    seed: int = 0
    pools: dict[RatingName, list[str]]


class SelectResponse(BaseModel):
    selected: list[str]
    counts: dict[RatingName, int]


class JobModel(BaseModel):
    solver: str
    configuration: str = "default"
    benchmark: str
    track: str = ""
    verdict: VerdictName
    cpu_time_s: float = Field(ge=0)
    wall_time_s: float = Field(ge=0)


class ScoreRequest(BaseModel):
    jobs: list[JobModel]
    track: str
    hors_concours: list[str] = []
    tie_break: Literal["cpu", "wall"] | None = None


class StandingModel(BaseModel):
    solver: str
    score: int
    sat: int
    unsat: int
    cpu_s: float
    wall_s: float
    unique: int


class ExclusionModel(BaseModel):
    solver: str
    reason: str


class InconsistencyModel(BaseModel):
    benchmark: str
    sat_claimants: list[str]
    unsat_claimants: list[str]


class ScoreResponse(BaseModel):
    track: str
    standings: list[StandingModel]
    ranking: list[str]
    excluded: list[ExclusionModel]
    unresolved_ties: list[list[str]]
    inconsistencies: list[InconsistencyModel]
    table: str
    csv: str


class SummaryRequest(BaseModel):
    rankings: dict[str, list[str]]


class SummaryResponse(BaseModel):
    text: str
