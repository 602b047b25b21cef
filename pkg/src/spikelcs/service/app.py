"""HTTP service wrapping the experiment engine.

Endpoints: health, config validation, experiment submission with status
polling and artifact download, and replicate-group summaries.  The CLI
is a thin client of this surface.
"""

from __future__ import annotations

import os
import tempfile

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from .. import __version__
from ..harness.config import ConfigError, parse_config
from ..harness.summarize import format_summary, summarize_groups
from .jobs import Job, JobManager
from .models import (ExperimentRequest, HealthResponse, JobInfo,
                     MetricSummaryModel, ReplicateProgress, SummarizeRequest,
                     SummarizeResponse, ValidateRequest, ValidateResponse)


def _job_info(job: Job, with_files: bool = True) -> JobInfo:
    progress = [ReplicateProgress(replicate=rep, trials_done=done,
                                  trials_total=total)
                for rep, (done, total) in sorted(job.progress.items())]
    return JobInfo(job_id=job.job_id, name=job.name, status=job.status,
                   error=job.error, progress=progress,
                   files=job.files() if with_files else [])


def create_app(data_dir: str | None = None) -> FastAPI:
    manager = JobManager(data_dir or tempfile.mkdtemp(prefix="spikelcs-jobs-"))
    app = FastAPI(title="spikelcs experiment service", version=__version__)
    app.state.manager = manager

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/configs/validate", response_model=ValidateResponse)
    def validate(req: ValidateRequest):
        try:
            cfg = parse_config(req.config, overrides=req.overrides)
        except ConfigError as exc:
            return ValidateResponse(valid=False, errors=str(exc).split("; "))
        return ValidateResponse(valid=True, resolved=cfg.as_dict())

    @app.post("/experiments", response_model=JobInfo, status_code=202)
    def submit(req: ExperimentRequest):
        try:
            job = manager.submit(req.config, overrides=req.overrides,
                                 name=req.name)
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _job_info(job)

    @app.get("/experiments", response_model=list[JobInfo])
    def list_jobs():
        return [_job_info(job, with_files=False) for job in manager.list_jobs()]

    @app.get("/experiments/{job_id}", response_model=JobInfo)
    def job_status(job_id: str):
        job = manager.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="no such job")
        return _job_info(job)

    @app.get("/experiments/{job_id}/files/{name}", response_class=PlainTextResponse)
    def job_file(job_id: str, name: str):
        job = manager.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="no such job")
        path = os.path.join(job.directory, os.path.basename(name))
        if not os.path.isfile(path):
            raise HTTPException(status_code=404, detail="no such file")
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()

    @app.post("/summarize", response_model=SummarizeResponse)
    def summarize(req: SummarizeRequest):
        if not req.group_a:
            raise HTTPException(status_code=400, detail="group_a is empty")
        try:
            summaries = summarize_groups(req.group_a, req.group_b)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        models = [MetricSummaryModel(**vars(s)) for s in summaries]
        return SummarizeResponse(metrics=models, table=format_summary(summaries))

    return app
