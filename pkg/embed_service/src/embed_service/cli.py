"""Entry point: load the pinned model and serve the wire contract."""

from __future__ import annotations

import argparse
import os

from .app import create_app
from .model import DEFAULT_MODEL_ID, SentenceTransformerProvider


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="embed-service")
    parser.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("EMBED_SERVICE_PORT", "8765")),
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--model", default=DEFAULT_MODEL_ID)
    parser.add_argument("--device", default="cpu")
    args = parser.parse_args(argv)

    import uvicorn

    app = create_app(
        loader=lambda: SentenceTransformerProvider(args.model, device=args.device)
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
