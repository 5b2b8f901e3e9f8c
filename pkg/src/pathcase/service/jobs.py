"""Background job registry for cohort runs.

Jobs execute on a small worker pool; the registry dict is the only shared
mutable state and every read or write happens under one lock. Progress is
clamped monotone so pollers never see a counter move backwards.
"""

from __future__ import annotations

import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from threading import Lock
from typing import Any, Callable

from ..rag.cohort import CohortDecision, CohortStats


@dataclass
class JobHandle:
    job_id: str
    kind: str = "cohort"
    state: str = "queued"  # queued -> running -> done | failed
    done: int = 0
    total: int = 0
    created_at: float = field(default_factory=time.time)
    decisions: list[CohortDecision] | None = None
    stats: CohortStats | None = None
    error: str | None = None


Runner = Callable[[Callable[[int, int], None]], tuple[list[CohortDecision], CohortStats]]


class JobRegistry:
    def __init__(self, max_workers: int = 2):
        self._jobs: dict[str, JobHandle] = {}
        self._lock = Lock()
        self._pool = ThreadPoolExecutor(max_workers=max_workers)

    def submit(self, runner: Runner, kind: str = "cohort") -> str:
        job_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._jobs[job_id] = JobHandle(job_id=job_id, kind=kind)
        self._pool.submit(self._run, job_id, runner)
        return job_id

    def _run(self, job_id: str, runner: Runner) -> None:
        with self._lock:
            self._jobs[job_id].state = "running"

        def on_progress(done: int, total: int) -> None:
            with self._lock:
                job = self._jobs[job_id]
                job.done = max(job.done, done)
                job.total = max(job.total, total)

        try:
            decisions, stats = runner(on_progress)
        except Exception as exc:  # per-job isolation: a bad run must not kill the pool
            with self._lock:
                job = self._jobs[job_id]
                job.state = "failed"
                job.error = f"{type(exc).__name__}: {exc}"
            return
        with self._lock:
            job = self._jobs[job_id]
            job.decisions = decisions
            job.stats = stats
            job.done = job.total = len(decisions)
            job.state = "done"

    def get(self, job_id: str) -> dict[str, Any] | None:
        """Snapshot of a job's state, or None if unknown."""
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                return None
            return {
                "job_id": job.job_id,
                "kind": job.kind,
                "state": job.state,
                "done": job.done,
                "total": job.total,
                "decisions": list(job.decisions) if job.decisions is not None else None,
                "stats": job.stats,
                "error": job.error,
            }

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True)
