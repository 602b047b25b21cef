"""Request/response schemas for the experiment service."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class ValidateRequest(BaseModel):
    config: str = Field(description="config file text (key = value lines)")
    overrides: dict[str, str] | None = None


class ValidateResponse(BaseModel):
    valid: bool
    errors: list[str] = []
    resolved: dict[str, Any] | None = None


class ExperimentRequest(BaseModel):
    config: str
    overrides: dict[str, str] | None = None
    name: str | None = None


class ReplicateProgress(BaseModel):
    replicate: int
    trials_done: int
    trials_total: int


class JobInfo(BaseModel):
    job_id: str
    name: str | None
    status: str          # queued | running | done | failed
    error: str | None = None
    progress: list[ReplicateProgress] = []
    files: list[str] = []


class SummarizeRequest(BaseModel):
    group_a: list[str] = Field(description="metrics CSV contents, group A")
    group_b: list[str] | None = None


class MetricSummaryModel(BaseModel):
    metric: str
    mean_a: float | None
    std_a: float | None
    count_a: int
    mean_b: float | None = None
    std_b: float | None = None
    count_b: int = 0
    t: float | None = None
    p: float | None = None


class SummarizeResponse(BaseModel):
    metrics: list[MetricSummaryModel]
    table: str
