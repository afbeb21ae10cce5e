#!/usr/bin/env python3
"""End-to-end pipeline on the bundled demo dataset.

Generates the deterministic demo O*NET directory, then runs every stage:
ingest -> embed (hash backend) -> score -> validate -> reduce -> report.
All outputs land under the chosen workdir; re-running with the same seed
reproduces them byte for byte.
"""

import argparse
import sys
from pathlib import Path

from occ2vec import cli, fixtures


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default="demo_run")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--dim", type=int, default=256)
    args = parser.parse_args()

    root = Path(args.workdir)
    root.mkdir(parents=True, exist_ok=True)
    paths = fixtures.write_demo_dataset(root, seed=args.seed)
    backend = ["--dim", str(args.dim), "--seed", str(args.seed), "--force"]
    catalog = root / "catalog.bin"
    cache = root / "vectors.bin"

    stages = [
        ["ingest", "--onet-dir", str(paths.onet_dir), "--out", str(catalog), "--force"],
        ["embed", "--catalog", str(catalog), "--cache", str(cache)] + backend[:-1],
    ]
    for name, char_path in sorted(paths.characteristics.items()):
        stages.append(
            ["score", "--catalog", str(catalog), "--cache", str(cache),
             "--characteristic", str(char_path),
             "--out", str(root / f"scores_{name}.csv")] + backend
        )
    stages += [
        ["validate", "--catalog", str(catalog), "--cache", str(cache),
         "--out", str(root / "validation")] + backend,
        ["reduce", "--catalog", str(catalog), "--cache", str(cache),
         "--labor-stats", str(paths.labor_stats), "--perplexity", "5",
         "--out", str(root / "map")] + backend,
        ["report", "--scores", str(root / "scores_greenness.csv"),
         "--catalog", str(catalog), "--labor-stats", str(paths.labor_stats),
         "--out", str(root / "report"), "--force"],
    ]
    for argv in stages:
        print(f"$ occ2vec {' '.join(argv)}")
        code = cli.main(argv)
        if code != 0:
            print(f"stage failed with exit code {code}", file=sys.stderr)
            return code
    print(f"\nall stages complete; outputs under {root}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
