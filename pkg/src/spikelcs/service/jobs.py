"""Background experiment jobs.

Each job owns a directory under the service data dir where the runner
writes its config copy, per-replicate metrics CSVs, snapshots and trace
files.  Jobs run on a worker thread; clients poll status and download
artifacts when done.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass, field

from ..harness.config import ExperimentConfig, parse_config
from ..harness.runner import run_replicates


@dataclass
class Job:
    job_id: str
    name: str | None
    directory: str
    config: ExperimentConfig
    status: str = "queued"
    error: str | None = None
    # replicate -> (trials done, trials total)
    progress: dict[int, tuple[int, int]] = field(default_factory=dict)

    def files(self) -> list[str]:
        try:
            return sorted(os.listdir(self.directory))
        except FileNotFoundError:
            return []


class JobManager:
    def __init__(self, data_dir: str):
        self.data_dir = data_dir
        os.makedirs(data_dir, exist_ok=True)
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def submit(self, config_text: str, overrides: dict | None = None,
               name: str | None = None) -> Job:
        """Validate and enqueue; raises ConfigError on a bad config."""
        cfg = parse_config(config_text, overrides=overrides)
        job_id = uuid.uuid4().hex[:12]
        directory = os.path.join(self.data_dir, job_id)
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, "config.txt"), "w", encoding="utf-8") as fh:
            fh.write(config_text)
        job = Job(job_id, name, directory, cfg)
        with self._lock:
            self._jobs[job_id] = job
        thread = threading.Thread(target=self._run, args=(job,), daemon=True)
        thread.start()
        return job

    def _run(self, job: Job) -> None:
        job.status = "running"

        def progress(rep: int, done: int, total: int):
            job.progress[rep] = (done, total)

        try:
            run_replicates(job.config, job.directory, progress=progress)
            job.status = "done"
        except Exception as exc:  # surfaced to the client via job status
            job.status = "failed"
            job.error = str(exc)

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

    def list_jobs(self) -> list[Job]:
        with self._lock:
            return list(self._jobs.values())

    def wait(self, job_id: str, timeout: float | None = None) -> Job:
        """Block until the job leaves the queue/running states (test and
        in-process CLI convenience)."""
        import time
        job = self.get(job_id)
        deadline = None if timeout is None else time.monotonic() + timeout
        while job.status in ("queued", "running"):
            if deadline is not None and time.monotonic() > deadline:
                break
            time.sleep(0.05)
        return job
