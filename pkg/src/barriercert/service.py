"""HTTP service backing the web companion.

POST /api/v1/solve runs synchronously up to the configured job timeout
(408 on expiry); `?wait=async` returns a job id pollable at
GET /api/v1/jobs/{id}. Jobs run in their own processes, isolated and
cancellable; capacity overflow returns 409. Payloads are the RunConfig /
RunResult documents.
"""

from __future__ import annotations

import multiprocessing
import threading
import time
import uuid
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import __version__
from .benchmarks import example_names, example_text, list_examples
from .config import build_system, load_config
from .errors import ConfigError


def _job_worker(queue, config_data: dict):
    try:  # fork safety: collapse any inherited BLAS thread pools
        import threadpoolctl

        threadpoolctl.threadpool_limits(1)
    except Exception:
        pass
    from .results import run_config

    result = run_config(config_data)
    queue.put(result.to_dict())


@dataclass
class Job:
    id: str
    process: multiprocessing.Process
    queue: object
    started: float
    status: str = "running"  # running | done | failed | timeout | cancelled
    result: dict | None = None
    deadline: float | None = None


class JobManager:
    """Process-per-job execution with a capacity cap and per-job deadline."""

    def __init__(self, job_cap: int = 4, timeout: float = 300.0):
        self.job_cap = job_cap
        self.timeout = timeout
        self.jobs: dict[str, Job] = {}
        self._lock = threading.Lock()
        self._ctx = multiprocessing.get_context("spawn")

    def active_count(self) -> int:
        return sum(1 for job in self.jobs.values() if job.status == "running")

    def submit(self, config_data: dict) -> Job:
        with self._lock:
            self._reap()
            if self.active_count() >= self.job_cap:
                raise HTTPException(status_code=409, detail="job capacity exceeded")
            queue = self._ctx.Queue()
            process = self._ctx.Process(
                target=_job_worker, args=(queue, config_data), daemon=True
            )
            job = Job(
                id=uuid.uuid4().hex,
                process=process,
                queue=queue,
                started=time.monotonic(),
                deadline=time.monotonic() + self.timeout,
            )
            self.jobs[job.id] = job
            process.start()
            return job

    def _poll_job(self, job: Job) -> None:
        if job.status != "running":
            return
        if job.result is None and not job.queue.empty():
            job.result = job.queue.get()
            job.status = "done"
            job.process.join(timeout=1)
            return
        if not job.process.is_alive():
            # one last chance for a result racing the exit
            if not job.queue.empty():
                job.result = job.queue.get()
                job.status = "done"
            else:
                job.status = "failed"
            job.process.join(timeout=1)
            return
        if job.deadline is not None and time.monotonic() > job.deadline:
            job.process.terminate()
            job.process.join()
            job.status = "timeout"

    def wait(self, job: Job, timeout: float) -> Job:
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            self._poll_job(job)
            if job.status != "running":
                return job
            time.sleep(0.02)
        self._poll_job(job)
        return job

    def get(self, job_id: str) -> Job:
        job = self.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no job {job_id!r}")
        self._poll_job(job)
        return job

    def cancel(self, job_id: str) -> Job:
        job = self.get(job_id)
        if job.status == "running":
            job.process.terminate()
            job.process.join()
            job.status = "cancelled"
        return job

    def _reap(self):
        for job in list(self.jobs.values()):
            self._poll_job(job)

    def shutdown(self):
        for job in self.jobs.values():
            if job.process.is_alive():
                job.process.terminate()
                job.process.join(timeout=1)


def _field_error(loc: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content={"detail": [{"loc": loc.split("."), "msg": message, "type": "value_error"}]},
    )


def create_app(*, job_cap: int = 4, timeout: float = 300.0) -> FastAPI:
    app = FastAPI(title="barriercert service", version=__version__)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    manager = JobManager(job_cap=job_cap, timeout=timeout)
    app.state.jobs = manager

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.get("/api/v1/examples")
    def examples():
        return {"examples": list_examples()}

    @app.get("/api/v1/examples/{name}")
    def example(name: str):
        if name not in example_names():
            raise HTTPException(status_code=404, detail=f"no bundled example named {name!r}")
        # canonical bytes verbatim, so client-side export round-trips exactly
        return Response(content=example_text(name), media_type="application/json")

    @app.post("/api/v1/solve")
    def solve(body: dict, wait: str = Query("sync", pattern="^(sync|async)$")):
        try:
            config = load_config(body)
            build_system(config)  # surface cross-field errors as 422 up front
        except ConfigError as exc:
            return _field_error(exc.field, exc.message)
        job = manager.submit(config.model_dump())
        if wait == "async":
            return JSONResponse(status_code=202, content={"job_id": job.id})
        job = manager.wait(job, manager.timeout)
        if job.status == "timeout":
            raise HTTPException(status_code=408,
                                detail=f"solve exceeded the {manager.timeout:g}s job timeout")
        if job.status == "failed" or job.result is None:
            raise HTTPException(status_code=500, detail="solver process failed")
        return job.result

    @app.get("/api/v1/jobs/{job_id}")
    def job_status(job_id: str):
        job = manager.get(job_id)
        body = {"job_id": job.id, "status": job.status}
        if job.result is not None:
            body["result"] = job.result
        return body

    @app.delete("/api/v1/jobs/{job_id}")
    def job_cancel(job_id: str):
        job = manager.cancel(job_id)
        return {"job_id": job.id, "status": job.status}

    return app
