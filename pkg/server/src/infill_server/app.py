"""FastAPI app implementing the maskfill remote-backend wire protocol.

    GET  /health          -> {"status": "ok", "model_id": ...} (503 while loading)
    POST /infill          -> {"candidates": [{"tokens": [...], "score": <=0}, ...]}
    POST /score           -> {"neg_log_likelihood": >=0}

400 on malformed bodies, 500 with an opaque error id on decode failures.
Request concurrency is bounded by the configured limit.
"""

import asyncio
import logging
import uuid
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.concurrency import run_in_threadpool

log = logging.getLogger("infill_server")

DEFAULT_TOP_K = 100
DEFAULT_TOP_P = 0.7
DEFAULT_BEAM_SIZE = 5


@dataclass
class ServerConfig:
    model: str = "stub"
    stub: bool = False
    host: str = "127.0.0.1"
    port: int = 8777
    max_concurrent: int = 8
    top_k: int = DEFAULT_TOP_K
    top_p: float = DEFAULT_TOP_P
    beam_size: int = DEFAULT_BEAM_SIZE


class InfillBody(BaseModel):
    tokens_with_mask: list[str]
    mask_token: str = "[MASK]"
    num_candidates: int = 1
    max_fill_len: int = 10
    top_k: int | None = None
    top_p: float | None = None
    beam_size: int | None = None
    seed: int | None = None


class ScoreBody(BaseModel):
    tokens: list[str]


def create_app(cfg: ServerConfig, model=None) -> FastAPI:
    app = FastAPI(title="infill-server")
    app.state.model = model
    app.state.cfg = cfg
    gate = asyncio.Semaphore(cfg.max_concurrent)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:3])})

    def ready_model():
        if app.state.model is None:
            raise HTTPException(status_code=503, detail="model is loading")
        return app.state.model

    @app.get("/health")
    async def health():
        model = ready_model()
        return {"status": "ok", "model_id": model.model_id}

    @app.post("/infill")
    async def infill(body: InfillBody):
        model = ready_model()
        n_masks = body.tokens_with_mask.count(body.mask_token)
        if n_masks != 1:
            raise HTTPException(400, f"expected exactly one {body.mask_token!r}, got {n_masks}")
        if body.num_candidates < 1 or body.max_fill_len < 1:
            raise HTTPException(400, "num_candidates and max_fill_len must be >= 1")
        i = body.tokens_with_mask.index(body.mask_token)
        left, right = body.tokens_with_mask[:i], body.tokens_with_mask[i + 1 :]
        async with gate:
            try:
                results = await run_in_threadpool(
                    model.infill,
                    left,
                    right,
                    body.num_candidates,
                    body.max_fill_len,
                    body.top_k if body.top_k is not None else cfg.top_k,
                    body.top_p if body.top_p is not None else cfg.top_p,
                    body.beam_size if body.beam_size is not None else cfg.beam_size,
                    body.seed if body.seed is not None else 0,
                )
            except Exception:
                error_id = uuid.uuid4().hex
                log.exception("decode failure %s", error_id)
                raise HTTPException(500, f"decode failure (error id {error_id})")
        return {"candidates": [{"tokens": tokens, "score": score} for tokens, score in results]}

    @app.post("/score")
    async def score(body: ScoreBody):
        model = ready_model()
        async with gate:
            try:
                nll = await run_in_threadpool(model.score, body.tokens)
            except Exception:
                error_id = uuid.uuid4().hex
                log.exception("scoring failure %s", error_id)
                raise HTTPException(500, f"scoring failure (error id {error_id})")
        return {"neg_log_likelihood": float(nll)}

    return app
