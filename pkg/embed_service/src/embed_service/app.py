"""FastAPI app exposing the embedding wire contract.

POST /embed  {"texts": [...], "normalize": true}
             -> {"model": "...", "dim": N, "vectors": [[...], ...]}
GET  /health -> {"status": "ok", "model": "...", "dim": N} or 503 while the
             model is loading or after a load failure.

Limits: 1-256 texts per request, each text at most 8192 UTF-8 bytes.
Oversize batches get 413, malformed bodies 400, inference failures 500 with
an opaque incident id.
"""

from __future__ import annotations

import threading
import uuid
from contextlib import asynccontextmanager
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .model import EmbeddingProvider

MAX_BATCH = 256
MAX_TEXT_BYTES = 8192


class ProviderState:
    def __init__(self):
        self.status = "loading"
        self.provider: Optional[EmbeddingProvider] = None
        self.error = ""
        self._lock = threading.Lock()

    def set_ready(self, provider: EmbeddingProvider) -> None:
        with self._lock:
            self.provider = provider
            self.status = "ready"

    def set_failed(self, error: str) -> None:
        with self._lock:
            self.error = error
            self.status = "failed"


def create_app(
    provider: Optional[EmbeddingProvider] = None,
    loader: Optional[Callable[[], EmbeddingProvider]] = None,
) -> FastAPI:
    """Build the app with a ready provider, or a loader run at startup."""
    state = ProviderState()

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        if loader is not None:

            def work():
                try:
                    state.set_ready(loader())
                except Exception as exc:  # surfaces via /health
                    state.set_failed(str(exc))

            threading.Thread(target=work, daemon=True).start()
        yield

    app = FastAPI(title="embed-service", docs_url=None, redoc_url=None, lifespan=lifespan)
    app.state.provider_state = state
    if provider is not None:
        state.set_ready(provider)

    def _bad_request(detail: str) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": detail})

    @app.post("/embed")
    async def embed(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _bad_request("body is not valid JSON")
        if not isinstance(body, dict):
            return _bad_request("body must be a JSON object")
        texts = body.get("texts")
        if not isinstance(texts, list) or not texts:
            return _bad_request("'texts' must be a nonempty list of strings")
        if len(texts) > MAX_BATCH:
            return JSONResponse(
                status_code=413,
                content={"error": f"batch of {len(texts)} exceeds limit {MAX_BATCH}"},
            )
        for i, text in enumerate(texts):
            if not isinstance(text, str) or not text.strip():
                return _bad_request(f"texts[{i}] must be a nonempty string")
            if len(text.encode("utf-8")) > MAX_TEXT_BYTES:
                return _bad_request(
                    f"texts[{i}] exceeds {MAX_TEXT_BYTES} bytes"
                )
        normalize = body.get("normalize", True)
        if not isinstance(normalize, bool):
            return _bad_request("'normalize' must be a boolean")
        if state.status != "ready" or state.provider is None:
            return JSONResponse(
                status_code=503,
                content={"status": state.status, "error": state.error or None},
            )
        try:
            vectors = state.provider.encode(texts, normalize)
        except Exception:
            incident = uuid.uuid4().hex
            return JSONResponse(
                status_code=500,
                content={"error": "inference failed", "incident": incident},
            )
        return {
            "model": state.provider.model_id,
            "dim": state.provider.dim,
            "vectors": vectors,
        }

    @app.get("/health")
    def health():
        if state.status == "ready" and state.provider is not None:
            return {
                "status": "ok",
                "model": state.provider.model_id,
                "dim": state.provider.dim,
            }
        content = {"status": state.status, "ready": False}
        if state.error:
            content["error"] = state.error
        return JSONResponse(status_code=503, content=content)

    return app
