"""HTTP sidecar serving sentence embeddings behind a fixed wire contract."""

__version__ = "0.1.0"

from .app import create_app  # noqa: F401
from .model import DEFAULT_MODEL_ID, SentenceTransformerProvider  # noqa: F401
