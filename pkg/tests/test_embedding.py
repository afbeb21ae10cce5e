import json
import struct
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from occ2vec.embedding import (
    CACHE_MAGIC,
    EmbedderConfig,
    EmbeddingCache,
    embed_texts,
    hash_embed,
    source_key,
)
from occ2vec.errors import CacheError, InputError, TransportError

words = st.text(alphabet="abcdefghij", min_size=1, max_size=8)


class TestHashEmbed:
    def test_deterministic(self):
        a = hash_embed("abc", 16, 7)
        b = hash_embed("abc", 16, 7)
        assert np.array_equal(a.values, b.values)

    def test_shape(self):
        assert hash_embed("abc", 8, 0).values.shape == (8,)

    def test_repeated_token_equals_single(self):
        assert np.array_equal(
            hash_embed("dog dog", 16, 7).values, hash_embed("dog", 16, 7).values
        )

    def test_seed_sensitivity(self):
        assert not np.array_equal(
            hash_embed("dog", 16, 7).values, hash_embed("dog", 16, 8).values
        )

    def test_token_order_invariance(self):
        a = hash_embed("red truck", 32, 1).values
        b = hash_embed("truck red", 32, 1).values
        cosine = float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))
        assert cosine == pytest.approx(1.0, abs=1e-12)

    def test_zero_tokens_rejected(self):
        with pytest.raises(InputError):
            hash_embed("!!! ...", 16, 0)

    def test_case_and_punctuation_folding(self):
        assert np.array_equal(
            hash_embed("Dog, dog!", 16, 3).values, hash_embed("dog", 16, 3).values
        )

    @given(text=st.lists(words, min_size=1, max_size=6).map(" ".join),
           dim=st.integers(2, 64), seed=st.integers(0, 2**32))
    @settings(max_examples=150)
    def test_unit_norm(self, text, dim, seed):
        v = hash_embed(text, dim, seed).values
        assert abs(np.linalg.norm(v) - 1.0) < 1e-9

    def test_token_disjoint_cosines_concentrate_near_zero(self):
        rng = np.random.default_rng(0)
        cosines = []
        for i in range(1000):
            n_a, n_b = rng.integers(1, 5, 2)
            a = " ".join(f"left{i}t{j}" for j in range(n_a))
            b = " ".join(f"right{i}t{j}" for j in range(n_b))
            va = hash_embed(a, 1024, 0).values
            vb = hash_embed(b, 1024, 0).values
            cosines.append(float(np.dot(va, vb)))
        assert abs(np.mean(cosines)) < 0.05


class TestCache:
    def test_round_trip_bit_identical(self, tmp_path):
        cache = EmbeddingCache(tmp_path / "c.bin", 8, "hash:d8:s0")
        v = np.arange(8, dtype="<f4") / 3.0
        stored = cache.put("k", v)
        assert np.array_equal(cache.get("k"), stored)
        assert cache.get("k").tobytes() == v.astype("<f4").tobytes()

    def test_unknown_key_none(self, tmp_path):
        cache = EmbeddingCache(tmp_path / "c.bin", 8, "x")
        assert cache.get("nope") is None

    def test_reopen_persistence(self, tmp_path):
        path = tmp_path / "c.bin"
        cache = EmbeddingCache(path, 4, "x")
        v = np.array([1.5, -2.25, 0.125, 9.0], dtype="<f4")
        cache.put("key", v)
        reopened = EmbeddingCache(path, 4, "x")
        assert np.array_equal(reopened.get("key"), v)

    def test_many_vectors_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        path = tmp_path / "c.bin"
        cache = EmbeddingCache(path, 16, "x")
        vectors = {}
        for i in range(10_000):
            v = rng.standard_normal(16).astype("<f4")
            cache.put(f"key-{i}", v)
            vectors[f"key-{i}"] = v
        reopened = EmbeddingCache(path, 16, "x")
        assert len(reopened) == 10_000
        for key, v in vectors.items():
            assert reopened.get(key).tobytes() == v.tobytes()

    def test_bad_magic_names_offset(self, tmp_path):
        path = tmp_path / "c.bin"
        path.write_bytes(b"BADMAGIC" + struct.pack("<I", 4))
        with pytest.raises(CacheError, match="offset 0"):
            EmbeddingCache(path, 4, "x")

    def test_truncated_record_names_offset(self, tmp_path):
        path = tmp_path / "c.bin"
        cache = EmbeddingCache(path, 4, "x")
        cache.put("key", np.zeros(4, dtype="<f4"))
        blob = path.read_bytes()
        path.write_bytes(blob[:-3])
        with pytest.raises(CacheError, match="offset"):
            EmbeddingCache(path, 4, "x")

    def test_dim_mismatch_on_reopen(self, tmp_path):
        path = tmp_path / "c.bin"
        EmbeddingCache(path, 4, "x")
        with pytest.raises(CacheError, match="dim"):
            EmbeddingCache(path, 8, "x")


class TestEmbedTexts:
    def test_identical_texts_bitwise(self):
        config = EmbedderConfig(backend="hash", dim=8, seed=0)
        a, b = embed_texts(config, ["abc", "abc"])
        assert np.array_equal(a.values, b.values)
        assert a.source_key == b.source_key == source_key("abc")

    def test_repeat_calls_agree_with_and_without_cache(self, tmp_path):
        config = EmbedderConfig(backend="hash", dim=8, seed=0)
        cache = EmbeddingCache(tmp_path / "c.bin", 8, config.backend_id)
        fresh = embed_texts(config, ["hello world"], cache)[0]
        cached = embed_texts(config, ["hello world"], cache)[0]
        uncached = embed_texts(config, ["hello world"])[0]
        assert fresh.values.tobytes() == cached.values.tobytes()
        assert fresh.values.tobytes() == uncached.values.tobytes()

    def test_cache_consulted_before_backend(self, tmp_path):
        config = EmbedderConfig(backend="hash", dim=4, seed=0)
        cache = EmbeddingCache(tmp_path / "c.bin", 4, config.backend_id)
        sentinel = np.array([9.0, 9.0, 9.0, 9.0], dtype="<f4")
        cache.put(source_key("planted"), sentinel)
        out = embed_texts(config, ["planted"], cache)[0]
        assert np.array_equal(out.values, sentinel)

    def test_empty_inputs_rejected(self):
        config = EmbedderConfig(backend="hash", dim=4, seed=0)
        with pytest.raises(InputError):
            embed_texts(config, [])
        with pytest.raises(InputError):
            embed_texts(config, ["ok", "   "])


class _StubHandler(BaseHTTPRequestHandler):
    dim = 6
    fail_first = 0
    calls = 0

    def do_POST(self):
        cls = type(self)
        cls.calls += 1
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        if cls.calls <= cls.fail_first:
            self.send_response(500)
            self.end_headers()
            return
        texts = body["texts"]
        vectors = [
            [float(len(t) + i + j) for j in range(cls.dim)]
            for i, t in enumerate(texts)
        ]
        payload = json.dumps(
            {"model": "stub", "dim": cls.dim, "vectors": vectors}
        ).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    _StubHandler.calls = 0
    _StubHandler.fail_first = 0
    _StubHandler.dim = 6
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


class TestRemoteBackend:
    def test_order_preserved(self, stub_server):
        config = EmbedderConfig(
            backend="remote", dim=6, endpoint_url=stub_server, backoff_s=0.01
        )
        out = embed_texts(config, ["a", "bb", "ccc"])
        assert [v.values[0] for v in out] == [1.0, 3.0, 5.0]

    def test_dim_mismatch_fatal(self, stub_server):
        config = EmbedderConfig(
            backend="remote", dim=16, endpoint_url=stub_server, backoff_s=0.01
        )
        with pytest.raises(InputError, match="dim"):
            embed_texts(config, ["a"])

    def test_retries_then_success(self, stub_server):
        _StubHandler.fail_first = 2
        config = EmbedderConfig(
            backend="remote", dim=6, endpoint_url=stub_server,
            retries=3, backoff_s=0.01,
        )
        out = embed_texts(config, ["a"])
        assert len(out) == 1
        assert _StubHandler.calls == 3

    def test_unreachable_endpoint(self):
        config = EmbedderConfig(
            backend="remote", dim=6, endpoint_url="http://127.0.0.1:9",
            retries=1, backoff_s=0.01,
        )
        with pytest.raises(TransportError):
            embed_texts(config, ["a"])

    def test_batching_splits_requests(self, stub_server):
        config = EmbedderConfig(
            backend="remote", dim=6, endpoint_url=stub_server,
            batch_size=2, backoff_s=0.01,
        )
        embed_texts(config, ["a", "b", "c", "d", "e"])
        assert _StubHandler.calls == 3

    def test_header_magic_constant(self):
        assert CACHE_MAGIC == b"OCC2VEC1"
