"""HTTP surface for the engine.

Every error crossing the wire is a structured JSON object {code, message};
engine exceptions map onto 4xx/5xx classes here and nowhere else. Search
with generation degrades instead of failing: if the LLM endpoint is down
the hits still come back with a warning and a null answer.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import Depends, FastAPI, Header, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..errors import (
    BudgetExhausted,
    CorruptIndex,
    EmptyCandidateSet,
    EmptyInput,
    EngineError,
    InvalidConfig,
    InvalidInput,
    ProviderUnavailable,
)
from ..rag.cohort import CohortSpec, PrefilterSpec
from ..retrieval import FusionWeights
from .engine import Engine
from .jobs import JobRegistry

_STATUS_BY_ERROR = [
    (EmptyInput, 400, "empty_input"),
    (InvalidConfig, 422, "invalid_request"),
    (InvalidInput, 422, "invalid_request"),
    (EmptyCandidateSet, 422, "empty_candidate_set"),
    (BudgetExhausted, 422, "budget_exhausted"),
    (ProviderUnavailable, 503, "provider_unavailable"),
    (CorruptIndex, 500, "corrupt_index"),
]


class PrefilterBody(BaseModel):
    query: str
    threshold: float


class SearchBody(BaseModel):
    query: str
    k: int = 10
    generate: bool = False
    weights: dict[str, float] | None = None


class CohortBody(BaseModel):
    inclusion_criteria: str = ""
    exclusion_criteria: str = ""
    prefilter: PrefilterBody | None = None
    concurrency: int | None = None


class TransformBody(BaseModel):
    report_id: str
    kind: str


class IhcBody(BaseModel):
    report_id: str
    k: int = 5


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _hit_payload(hit) -> dict:
    return asdict(hit)


def create_app(engine: Engine, registry: JobRegistry | None = None) -> FastAPI:
    app = FastAPI(title="pathcase", version="0.1.0")
    jobs = registry if registry is not None else JobRegistry()

    async def check_auth(authorization: str | None = Header(default=None)) -> None:
        token = engine.config.auth_token
        if not token:
            return
        if authorization != f"Bearer {token}":
            raise _AuthError()

    class _AuthError(Exception):
        pass

    @app.exception_handler(_AuthError)
    async def handle_auth_error(request: Request, exc: _AuthError) -> JSONResponse:
        return _error_response(401, "unauthorized", "missing or invalid bearer token")

    @app.exception_handler(EngineError)
    async def handle_engine_error(request: Request, exc: EngineError) -> JSONResponse:
        for err_type, status, code in _STATUS_BY_ERROR:
            if isinstance(exc, err_type):
                return _error_response(status, code, str(exc))
        return _error_response(500, "engine_error", str(exc))

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok", "reports": len(engine.corpus)}

    @app.post("/v1/search", dependencies=[Depends(check_auth)])
    async def search_endpoint(body: SearchBody):
        if not body.query.strip():
            return _error_response(400, "empty_input", "query must be non-empty")
        try:
            weights = FusionWeights(**body.weights) if body.weights else None
        except TypeError as exc:
            return _error_response(422, "invalid_request", f"bad weights: {exc}")

        answer = None
        warning = None
        if body.generate:
            try:
                answer, hits = engine.answer(body.query, body.k)
            except ProviderUnavailable as exc:
                hits = engine.search(body.query, body.k, weights)
                warning = f"llm_unavailable: {exc}"
        else:
            hits = engine.search(body.query, body.k, weights)
        return {
            "hits": [_hit_payload(h) for h in hits],
            "answer": answer,
            "warning": warning,
        }

    @app.post("/v1/cohorts", dependencies=[Depends(check_auth)])
    async def create_cohort(body: CohortBody):
        prefilter = (
            PrefilterSpec(query=body.prefilter.query, threshold=body.prefilter.threshold)
            if body.prefilter
            else None
        )
        spec = CohortSpec(
            inclusion_criteria=body.inclusion_criteria,
            exclusion_criteria=body.exclusion_criteria,
            prefilter=prefilter,
            concurrency=body.concurrency or engine.config.cohort_concurrency,
            max_retries=engine.config.cohort_max_retries,
        )
        job_id = jobs.submit(lambda progress: engine.run_cohort(spec, on_progress=progress))
        return {"job_id": job_id, "state": "queued"}

    @app.get("/v1/cohorts/{job_id}", dependencies=[Depends(check_auth)])
    async def get_cohort(job_id: str):
        snapshot = jobs.get(job_id)
        if snapshot is None:
            return _error_response(404, "not_found", f"no job {job_id}")
        payload = {
            "job_id": snapshot["job_id"],
            "state": snapshot["state"],
            "progress": {"done": snapshot["done"], "total": snapshot["total"]},
            "error": snapshot["error"],
        }
        if snapshot["state"] == "done":
            payload["decisions"] = [asdict(d) for d in snapshot["decisions"]]
            payload["stats"] = asdict(snapshot["stats"])
        return payload

    @app.post("/v1/transform", dependencies=[Depends(check_auth)])
    async def transform_endpoint(body: TransformBody):
        try:
            text = engine.transform(body.report_id, body.kind)
        except KeyError:
            return _error_response(404, "not_found", f"no report {body.report_id}")
        return {"report_id": body.report_id, "kind": body.kind, "text": text}

    @app.post("/v1/ihc", dependencies=[Depends(check_auth)])
    async def ihc_endpoint(body: IhcBody):
        try:
            rec = engine.recommend_ihc(body.report_id, body.k)
        except KeyError:
            return _error_response(404, "not_found", f"no report {body.report_id}")
        return {
            "report_id": body.report_id,
            "markers": [{"marker": m, "rationale": r} for m, r in rec.markers],
            "candidate_vocabulary": sorted(rec.candidate_vocabulary),
        }

    @app.get("/v1/reports/{report_id}", dependencies=[Depends(check_auth)])
    async def get_report(report_id: str):
        try:
            doc = engine.get_report(report_id)
        except KeyError:
            return _error_response(404, "not_found", f"no report {report_id}")
        return {
            "report_id": doc.report_id,
            "text": doc.clean_text,
            "wsi_id": doc.wsi_id,
            "sections": [
                {"label": s.label, "start": s.char_span[0], "end": s.char_span[1], "text": s.text}
                for s in doc.sections
            ],
        }

    return app
