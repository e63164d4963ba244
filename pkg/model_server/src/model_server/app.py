"""HTTP surface: POST /score and GET /healthz.

Request/response schema::

    POST /score   {"task": "<tag>", "pairs": [["side a", "side b"], ...]}
              ->  {"probs": [p, ...]}        order-aligned, each in [0, 1]
    GET /healthz  -> {"status": "ok", "model": "<tag>:<name>,..."}

Unknown task tags answer 404; batches beyond the configured limit answer 413.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .config import ServerConfig
from .registry import ModelRegistry, UnknownTaskError


class ScoreRequest(BaseModel):
    task: str
    pairs: list[tuple[str, str]]


class ScoreResponse(BaseModel):
    probs: list[float]


class HealthResponse(BaseModel):
    status: str
    model: str


def build_registry(config: ServerConfig) -> ModelRegistry:
    registry = ModelRegistry(
        device=config.device, precision=config.precision, max_length=config.max_length
    )
    for task, checkpoint in config.models.items():
        registry.load_checkpoint(task, checkpoint)
    return registry


def create_app(registry: ModelRegistry, max_batch: int = 256) -> FastAPI:
    app = FastAPI(title="pair-scorer", version="0.1.0")

    @app.post("/score", response_model=ScoreResponse)
    def score(request: ScoreRequest) -> ScoreResponse:
        if len(request.pairs) > max_batch:
            raise HTTPException(
                status_code=413,
                detail=f"batch of {len(request.pairs)} exceeds the limit of {max_batch}",
            )
        try:
            probs = registry.score(request.task, request.pairs)
        except UnknownTaskError:
            raise HTTPException(
                status_code=404,
                detail=f"no model for task {request.task!r}; "
                       f"loaded tags: {registry.tags()}",
            ) from None
        return ScoreResponse(probs=probs)

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok", model=registry.describe())

    return app


def create_app_from_config(config: ServerConfig) -> FastAPI:
    return create_app(build_registry(config), max_batch=config.max_batch)
