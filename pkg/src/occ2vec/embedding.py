"""Text-to-vector backends and the persistent vector cache.

Two interchangeable backends produce d-dimensional sentence vectors: a
deterministic hashing backend for offline work and a remote HTTP backend
speaking the embed-service wire protocol. A binary file cache stores vectors
as float32 records; everything that flows through ``embed_texts`` is
quantized to float32 so cache hits and misses are bit-identical.
"""

from __future__ import annotations

import hashlib
import re
import struct
import threading
import time
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import CacheError, InputError, TransportError

CACHE_MAGIC = b"OCC2VEC1"

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


def source_key(text: str) -> str:
    """Stable hash key for an embedded string."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray
    dim: int
    source_key: str
    backend_id: str

    def __post_init__(self):
        if len(self.values) != self.dim:
            raise InputError(
                f"vector length {len(self.values)} does not match dim {self.dim}"
            )
        if not np.all(np.isfinite(self.values)):
            raise InputError("vector contains non-finite entries")


@dataclass(frozen=True)
class EmbedderConfig:
    backend: str = "hash"  # hash | remote
    dim: int = 1024
    seed: int = 0
    endpoint_url: str = ""
    batch_size: int = 32
    retries: int = 3
    backoff_s: float = 0.25

    def __post_init__(self):
        if self.backend not in ("hash", "remote"):
            raise InputError(f"unknown backend {self.backend!r}")
        if self.dim < 2:
            raise InputError("dim must be at least 2")
        if self.batch_size < 1:
            raise InputError("batch_size must be positive")

    @property
    def backend_id(self) -> str:
        if self.backend == "hash":
            return f"hash:d{self.dim}:s{self.seed}"
        return f"remote:d{self.dim}"


# ---------------------------------------------------------------------------
# Hash backend


@lru_cache(maxsize=65536)
def _token_vector(token: str, dim: int, seed: int) -> np.ndarray:
    """Unit vector for one token from a counter-based seeded generator."""
    digest = hashlib.blake2b(
        token.encode("utf-8"),
        digest_size=8,
        key=struct.pack("<Q", seed & 0xFFFFFFFFFFFFFFFF),
    ).digest()
    key = int.from_bytes(digest, "little")
    rng = np.random.Generator(np.random.Philox(key=key))
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    v.setflags(write=False)
    return v


def hash_embed(text: str, dim: int, seed: int) -> EmbeddingVector:
    """Deterministic bag-of-tokens embedding with mean pooling.

    Lowercases, splits on runs of non-alphanumerics, maps each token to a
    pseudo-random unit vector, mean-pools, and rescales to unit norm.
    """
    tokens = [t for t in _TOKEN_SPLIT.split(text.lower()) if t]
    if not tokens:
        raise InputError(f"no tokens after splitting: {text!r}")
    acc = np.zeros(dim)
    for tok in tokens:
        acc += _token_vector(tok, dim, seed)
    acc /= len(tokens)
    norm = np.linalg.norm(acc)
    if norm == 0.0:
        raise InputError(f"token vectors cancelled exactly for {text!r}")
    acc /= norm
    return EmbeddingVector(
        values=acc,
        dim=dim,
        source_key=source_key(text),
        backend_id=f"hash:d{dim}:s{seed}",
    )


# ---------------------------------------------------------------------------
# File-backed cache
#
# Layout: 8 magic bytes, little-endian u32 dim, then records of
# (u16 key length, UTF-8 key, dim float32 little-endian values).


class EmbeddingCache:
    """Append-only float32 vector store keyed by source hash.

    Writes are serialized with a lock (single-writer contract); reads come
    from the in-memory index and are safe from any thread.
    """

    def __init__(self, path: str | Path, dim: int, backend_id: str):
        self.path = Path(path)
        self.dim = dim
        self.backend_id = backend_id
        self._lock = threading.Lock()
        self._index: dict[str, np.ndarray] = {}
        if self.path.exists():
            self._load()
        else:
            with self.path.open("wb") as fh:
                fh.write(CACHE_MAGIC)
                fh.write(struct.pack("<I", dim))

    def _load(self) -> None:
        blob = self.path.read_bytes()
        if blob[:8] != CACHE_MAGIC:
            raise CacheError(f"{self.path}: bad cache magic at offset 0")
        if len(blob) < 12:
            raise CacheError(f"{self.path}: truncated header at offset 8")
        (dim,) = struct.unpack_from("<I", blob, 8)
        if dim != self.dim:
            raise CacheError(
                f"{self.path}: cache dim {dim} does not match configured {self.dim}"
            )
        offset = 12
        rec_bytes = 4 * self.dim
        while offset < len(blob):
            if offset + 2 > len(blob):
                raise CacheError(f"{self.path}: truncated key length at offset {offset}")
            (klen,) = struct.unpack_from("<H", blob, offset)
            offset += 2
            if offset + klen + rec_bytes > len(blob):
                raise CacheError(f"{self.path}: truncated record at offset {offset}")
            key = blob[offset : offset + klen].decode("utf-8")
            offset += klen
            vec = np.frombuffer(blob, dtype="<f4", count=self.dim, offset=offset).copy()
            vec.setflags(write=False)
            offset += rec_bytes
            self._index[key] = vec

    def get(self, key: str) -> Optional[np.ndarray]:
        return self._index.get(key)

    def put(self, key: str, values: np.ndarray) -> np.ndarray:
        """Store float32 values; returns the quantized array actually kept."""
        vec = np.ascontiguousarray(values, dtype="<f4")
        if vec.shape != (self.dim,):
            raise CacheError(
                f"cannot cache vector of shape {vec.shape}; cache dim is {self.dim}"
            )
        with self._lock:
            if key in self._index:
                return self._index[key]
            kbytes = key.encode("utf-8")
            if len(kbytes) > 0xFFFF:
                raise CacheError("cache key longer than 65535 bytes")
            with self.path.open("ab") as fh:
                fh.write(struct.pack("<H", len(kbytes)))
                fh.write(kbytes)
                fh.write(vec.tobytes())
            stored = vec.copy()
            stored.setflags(write=False)
            self._index[key] = stored
        return self._index[key]

    def __len__(self) -> int:
        return len(self._index)


# ---------------------------------------------------------------------------
# Remote backend client


def _post_embed(url: str, texts: Sequence[str], config: EmbedderConfig) -> list[list[float]]:
    import requests

    last_exc: Optional[Exception] = None
    for attempt in range(config.retries + 1):
        try:
            resp = requests.post(
                url, json={"texts": list(texts), "normalize": True}, timeout=30
            )
        except requests.RequestException as exc:
            last_exc = exc
            if attempt < config.retries:
                time.sleep(config.backoff_s * (2**attempt))
            continue
        if resp.status_code >= 500:
            last_exc = TransportError(f"server error {resp.status_code} from {url}")
            if attempt < config.retries:
                time.sleep(config.backoff_s * (2**attempt))
            continue
        if resp.status_code != 200:
            raise InputError(f"embed endpoint rejected request: {resp.status_code}")
        try:
            payload = resp.json()
        except ValueError:
            raise InputError(f"embed endpoint returned a non-JSON body from {url}")
        if payload.get("dim") != config.dim:
            raise InputError(
                f"backend returned dim {payload.get('dim')}, configured {config.dim}"
            )
        vectors = payload["vectors"]
        if len(vectors) != len(texts):
            raise InputError(
                f"backend returned {len(vectors)} vectors for {len(texts)} texts"
            )
        return vectors
    raise TransportError(f"embed endpoint unreachable after retries: {last_exc}")


def _embed_batch(config: EmbedderConfig, texts: Sequence[str]) -> list[np.ndarray]:
    if config.backend == "hash":
        return [hash_embed(t, config.dim, config.seed).values for t in texts]
    if not config.endpoint_url:
        raise InputError("remote backend requires an endpoint URL")
    url = config.endpoint_url.rstrip("/") + "/embed"
    out: list[np.ndarray] = []
    for start in range(0, len(texts), config.batch_size):
        chunk = texts[start : start + config.batch_size]
        for vec in _post_embed(url, chunk, config):
            arr = np.asarray(vec, dtype=np.float64)
            if arr.shape != (config.dim,):
                raise InputError(
                    f"backend vector has shape {arr.shape}, expected ({config.dim},)"
                )
            out.append(arr)
    return out


def embed_texts(
    config: EmbedderConfig,
    texts: Sequence[str],
    cache: Optional[EmbeddingCache] = None,
) -> list[EmbeddingVector]:
    """Embed texts in order, consulting the cache before the backend.

    Returned values are float32 (the cache record type) regardless of cache
    presence, so repeated calls agree bitwise.
    """
    if not texts:
        raise InputError("no texts to embed")
    for t in texts:
        if not t.strip():
            raise InputError("cannot embed an empty text")
    keys = [source_key(t) for t in texts]
    resolved: dict[str, np.ndarray] = {}
    if cache is not None:
        for k in keys:
            hit = cache.get(k)
            if hit is not None:
                resolved[k] = hit
    missing: list[tuple[str, str]] = []
    seen: set[str] = set()
    for t, k in zip(texts, keys):
        if k not in resolved and k not in seen:
            missing.append((t, k))
            seen.add(k)
    if missing:
        fresh = _embed_batch(config, [t for t, _ in missing])
        for (t, k), vec in zip(missing, fresh):
            quantized = np.asarray(vec, dtype="<f4")
            if cache is not None:
                quantized = cache.put(k, quantized)
            resolved[k] = quantized
    return [
        EmbeddingVector(
            values=np.asarray(resolved[k], dtype=np.float32),
            dim=config.dim,
            source_key=k,
            backend_id=config.backend_id,
        )
        for k in keys
    ]
