"""FastAPI service exposing span prediction and pair scoring.

Endpoints return 503 until the configured engines finish loading, 400 on
malformed JSON bodies, and 422 on schema violations (empty label or
hypothesis lists included).
"""

from __future__ import annotations

import os
import threading
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .engines import make_ner_engine, make_score_engine

DEFAULT_NER_MODEL = os.environ.get("SIDECAR_NER_MODEL", "stub")
DEFAULT_XE_MODEL = os.environ.get("SIDECAR_XE_MODEL", "stub")


class NerRequest(BaseModel):
    text: str = Field(min_length=1)
    labels: list[str] = Field(min_length=1)
    threshold: float = Field(default=0.0, ge=0.0, le=1.0)


class NerEntity(BaseModel):
    start: int
    end: int
    label: str
    score: float


class NerResponse(BaseModel):
    entities: list[NerEntity]


class ScoreRequest(BaseModel):
    premise: str = Field(min_length=1)
    hypotheses: list[str] = Field(min_length=1)


class ScoreResponse(BaseModel):
    scores: list[float]


class EngineState:
    """Holds the engines plus a loading latch for the 503 window."""

    def __init__(self, ner_model: str, xe_model: str):
        self.ner_model_name = ner_model
        self.xe_model_name = xe_model
        self.ner = None
        self.scorer = None
        self.error: str | None = None
        self._ready = threading.Event()

    @property
    def ready(self) -> bool:
        return self._ready.is_set()

    def load(self) -> None:
        try:
            self.ner = make_ner_engine(self.ner_model_name)
            self.scorer = make_score_engine(self.xe_model_name)
        except Exception as exc:  # surfaced via /v1/health
            self.error = f"{type(exc).__name__}: {exc}"
        else:
            self._ready.set()

    def load_async(self) -> None:
        threading.Thread(target=self.load, daemon=True).start()


def create_app(
    ner_model: str = DEFAULT_NER_MODEL,
    xe_model: str = DEFAULT_XE_MODEL,
    load_on_startup: bool = True,
) -> FastAPI:
    state = EngineState(ner_model, xe_model)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if load_on_startup:
            state.load_async()
        yield

    app = FastAPI(title="ctix-sidecar", version="0.1.0", lifespan=lifespan)
    app.state.engines = state

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        # Unparseable JSON is a malformed request, not a schema violation.
        if any(e.get("type") == "json_invalid" for e in exc.errors()):
            return JSONResponse(status_code=400, content={"detail": "malformed JSON body"})
        detail = [
            {"loc": list(e.get("loc", ())), "msg": str(e.get("msg", "")),
             "type": str(e.get("type", ""))}
            for e in exc.errors()
        ]
        return JSONResponse(status_code=422, content={"detail": detail})

    def _unavailable():
        detail = state.error or "models are still loading"
        return JSONResponse(status_code=503, content={"detail": detail})

    @app.post("/v1/ner", response_model=NerResponse)
    async def ner(req: NerRequest):
        if not state.ready:
            return _unavailable()
        spans = state.ner.predict(req.text, req.labels)
        requested = set(req.labels)
        entities = [
            NerEntity(start=s.start, end=s.end, label=s.label, score=s.score)
            for s in spans
            if s.score >= req.threshold
            and 0 <= s.start < s.end <= len(req.text)
            and s.label in requested
        ]
        return NerResponse(entities=entities)

    @app.post("/v1/score", response_model=ScoreResponse)
    async def score(req: ScoreRequest):
        if not state.ready:
            return _unavailable()
        scores = state.scorer.score(req.premise, req.hypotheses)
        if len(scores) != len(req.hypotheses):
            return JSONResponse(
                status_code=500,
                content={"detail": "engine returned a misaligned score vector"},
            )
        return ScoreResponse(scores=[min(1.0, max(0.0, float(s))) for s in scores])

    @app.get("/v1/health")
    async def health():
        if not state.ready:
            return _unavailable()
        return {
            "status": "ok",
            "model_versions": {
                "ner": state.ner.version,
                "cross_encoder": state.scorer.version,
            },
        }

    return app


def serve() -> None:  # pragma: no cover - process entrypoint
    import uvicorn

    port = int(os.environ.get("SIDECAR_PORT", "8901"))
    uvicorn.run(create_app(), host="0.0.0.0", port=port)
