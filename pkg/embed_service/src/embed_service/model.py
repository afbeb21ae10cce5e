"""Embedding providers behind a minimal protocol.

The default provider wraps a pinned sentence-transformers model (a 1024-dim
RoBERTa-large sentence encoder with mean pooling). Anything with a
``model_id``, a ``dim``, and an ``encode`` method satisfies the app.
"""

from __future__ import annotations

import threading
from typing import Protocol, Sequence

import numpy as np

DEFAULT_MODEL_ID = "sentence-transformers/all-roberta-large-v1"


class EmbeddingProvider(Protocol):
    model_id: str
    dim: int

    def encode(self, texts: Sequence[str], normalize: bool) -> list[list[float]]: ...


class SentenceTransformerProvider:
    """Real model inference; loads weights once, serializes encode calls."""

    def __init__(self, model_id: str = DEFAULT_MODEL_ID, device: str = "cpu"):
        from sentence_transformers import SentenceTransformer

        self.model_id = model_id
        self._model = SentenceTransformer(model_id, device=device)
        self.dim = int(self._model.get_sentence_embedding_dimension())
        self._lock = threading.Lock()

    def encode(self, texts: Sequence[str], normalize: bool) -> list[list[float]]:
        with self._lock:
            vectors = self._model.encode(
                list(texts),
                convert_to_numpy=True,
                normalize_embeddings=False,
                show_progress_bar=False,
            )
        vectors = np.asarray(vectors, dtype=np.float64)
        if normalize:
            norms = np.linalg.norm(vectors, axis=1, keepdims=True)
            vectors = vectors / np.where(norms == 0, 1.0, norms)
        return vectors.tolist()
