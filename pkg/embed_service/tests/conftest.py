import hashlib

import numpy as np
import pytest
from fastapi.testclient import TestClient

from embed_service.app import create_app


class FakeProvider:
    """Deterministic stand-in: one seeded pseudo-random vector per text."""

    model_id = "fake-encoder-v1"
    dim = 8

    def encode(self, texts, normalize):
        out = []
        for text in texts:
            seed = int.from_bytes(
                hashlib.blake2b(text.encode(), digest_size=8).digest(), "little"
            )
            v = np.random.Generator(np.random.Philox(key=seed)).standard_normal(self.dim)
            if normalize:
                v = v / np.linalg.norm(v)
            out.append(v.tolist())
        return out


class ExplodingProvider(FakeProvider):
    def encode(self, texts, normalize):
        raise RuntimeError("weights corrupted")


@pytest.fixture
def provider():
    return FakeProvider()


@pytest.fixture
def client(provider):
    return TestClient(create_app(provider=provider))
