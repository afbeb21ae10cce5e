import threading

import numpy as np
import pytest
from fastapi.testclient import TestClient

from embed_service.app import MAX_BATCH, MAX_TEXT_BYTES, create_app

from conftest import ExplodingProvider, FakeProvider


class TestEmbed:
    def test_order_preserved_and_dim_consistent(self, client, provider):
        texts = ["alpha", "beta", "gamma"]
        resp = client.post("/embed", json={"texts": texts})
        assert resp.status_code == 200
        body = resp.json()
        assert body["model"] == provider.model_id
        assert body["dim"] == provider.dim
        assert len(body["vectors"]) == len(texts)
        expected = provider.encode(texts, normalize=True)
        assert body["vectors"] == expected

    def test_deterministic_across_calls(self, client):
        a = client.post("/embed", json={"texts": ["hello"]}).json()["vectors"]
        b = client.post("/embed", json={"texts": ["hello"]}).json()["vectors"]
        assert a == b

    def test_normalize_default_unit_norm(self, client):
        body = client.post("/embed", json={"texts": ["hello world"]}).json()
        norm = float(np.linalg.norm(body["vectors"][0]))
        assert abs(norm - 1.0) < 1e-6

    def test_normalize_false_returns_raw(self, client, provider):
        body = client.post(
            "/embed", json={"texts": ["hello"], "normalize": False}
        ).json()
        assert body["vectors"] == provider.encode(["hello"], normalize=False)

    def test_vector_count_matches_for_every_2xx(self, client):
        rng = np.random.default_rng(0)
        for _ in range(10):
            n = int(rng.integers(1, 40))
            texts = [f"text number {i}" for i in range(n)]
            resp = client.post("/embed", json={"texts": texts})
            assert resp.status_code == 200
            assert len(resp.json()["vectors"]) == n

    def test_oversize_batch_413(self, client):
        texts = ["x"] * (MAX_BATCH + 1)
        assert client.post("/embed", json={"texts": texts}).status_code == 413

    def test_max_batch_accepted(self, client):
        texts = [f"t{i}" for i in range(MAX_BATCH)]
        assert client.post("/embed", json={"texts": texts}).status_code == 200

    @pytest.mark.parametrize(
        "body",
        [
            {"texts": []},
            {"texts": "no"},
            {"texts": ["ok", ""]},
            {"texts": ["ok", "   "]},
            {"texts": [1, 2]},
            {"texts": ["ok"], "normalize": "yes"},
            {},
            [1, 2, 3],
        ],
    )
    def test_malformed_body_400(self, client, body):
        assert client.post("/embed", json=body).status_code == 400

    def test_invalid_json_400(self, client):
        resp = client.post(
            "/embed", content=b"{nope", headers={"Content-Type": "application/json"}
        )
        assert resp.status_code == 400

    def test_oversize_text_400(self, client):
        big = "a" * (MAX_TEXT_BYTES + 1)
        assert client.post("/embed", json={"texts": [big]}).status_code == 400

    def test_inference_failure_500_with_incident(self):
        client = TestClient(create_app(provider=ExplodingProvider()))
        resp = client.post("/embed", json={"texts": ["boom"]})
        assert resp.status_code == 500
        body = resp.json()
        assert body["error"] == "inference failed"
        assert len(body["incident"]) == 32

    def test_concurrent_requests(self, client):
        results = []

        def worker(i):
            resp = client.post("/embed", json={"texts": [f"t{i}", f"u{i}"]})
            results.append((resp.status_code, len(resp.json()["vectors"])))

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert results == [(200, 2)] * 8


class TestHealth:
    def test_ready(self, client, provider):
        resp = client.get("/health")
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "ok"
        assert body["model"] == provider.model_id
        assert body["dim"] == provider.dim

    def test_health_dim_matches_embed_dim(self, client):
        health = client.get("/health").json()
        embed = client.post("/embed", json={"texts": ["x"]}).json()
        assert health["dim"] == embed["dim"]

    def test_loading_503(self):
        client = TestClient(create_app())  # no provider, no loader
        resp = client.get("/health")
        assert resp.status_code == 503
        assert resp.json()["ready"] is False

    def test_embed_while_loading_503(self):
        client = TestClient(create_app())
        assert client.post("/embed", json={"texts": ["x"]}).status_code == 503

    def test_load_failure_503_with_error(self):
        def loader():
            raise RuntimeError("no such model on disk")

        app = create_app(loader=loader)
        with TestClient(app) as client:
            import time

            for _ in range(100):
                resp = client.get("/health")
                if resp.json().get("error"):
                    break
                time.sleep(0.01)
            assert resp.status_code == 503
            assert "no such model" in resp.json()["error"]
