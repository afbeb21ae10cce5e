#!/usr/bin/env python3
"""Full study on a real O*NET 25.3 extract.

Point --onet-dir at an unpacked O*NET 25.3 text-file directory and
optionally --endpoint at a running embed-service for real sentence
embeddings (the hash backend is used otherwise). Produces score tables for
every characteristic file given, the validation tables, the 2-d map, and
per-characteristic reports.
"""

import argparse
import sys
from pathlib import Path

from occ2vec import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--onet-dir", required=True)
    parser.add_argument("--labor-stats", default="")
    parser.add_argument("--characteristic", action="append", default=[],
                        help="characteristic definition file (repeatable)")
    parser.add_argument("--endpoint", default="",
                        help="embed-service URL; hash backend if omitted")
    parser.add_argument("--dim", type=int, default=1024)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="onet_study")
    args = parser.parse_args()

    root = Path(args.out)
    root.mkdir(parents=True, exist_ok=True)
    backend = ["--dim", str(args.dim), "--seed", str(args.seed)]
    if args.endpoint:
        backend += ["--backend", "remote", "--endpoint", args.endpoint]
    catalog = root / "catalog.bin"
    cache = root / "vectors.bin"

    stages = [
        ["ingest", "--onet-dir", args.onet_dir, "--out", str(catalog), "--force"],
        ["embed", "--catalog", str(catalog), "--cache", str(cache)] + backend,
        ["validate", "--catalog", str(catalog), "--cache", str(cache),
         "--out", str(root / "validation"), "--force"] + backend,
    ]
    if args.labor_stats:
        stages.append(
            ["reduce", "--catalog", str(catalog), "--cache", str(cache),
             "--labor-stats", args.labor_stats,
             "--out", str(root / "map"), "--force"] + backend
        )
    for char_file in args.characteristic:
        name = Path(char_file).stem
        score_csv = root / f"scores_{name}.csv"
        stages.append(
            ["score", "--catalog", str(catalog), "--cache", str(cache),
             "--characteristic", char_file, "--out", str(score_csv), "--force"]
            + backend
        )
        report = ["report", "--scores", str(score_csv), "--catalog", str(catalog),
                  "--out", str(root / f"report_{name}"), "--force"]
        if args.labor_stats:
            report += ["--labor-stats", args.labor_stats]
        stages.append(report)

    for argv in stages:
        print(f"$ occ2vec {' '.join(argv)}")
        code = cli.main(argv)
        if code != 0:
            print(f"stage failed with exit code {code}", file=sys.stderr)
            return code
    print(f"\nstudy complete; outputs under {root}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
