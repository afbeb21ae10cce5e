"""Command-line pipeline: ingest, embed, score, validate, reduce, compare,
report, plus a small masked-language-model demo.

Every command is deterministic given its inputs and ``--seed``; re-running
writes byte-identical files. Exit codes: 0 success, 2 bad or missing input,
3 refusal to overwrite without ``--force``, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv

import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bert_toy, core, dimred, stats, svg
from .embedding import EmbedderConfig, EmbeddingCache, embed_texts
from .errors import DegenerateInputError, InputError, NumericalError, Occ2VecError
from .onet_ingest import (
    Category,
    DescriptorCatalog,
    LaborStats,
    education_rank,
    load_catalog,
    load_characteristic,
    load_labor_stats,
    parse_onet_tables,
    write_catalog,
)

class Refusal(Exception):
    """Output exists and --force was not given."""

def _guard(path: Path, force: bool) -> None:
    if path.exists() and not force:
        raise Refusal(f"refusing to overwrite {path} (use --force)")

def _write_text(path: Path, text: str, force: bool) -> None:
    _guard(path, force)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")

def _require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise InputError(f"missing {path}; run the {stage} stage first")
    return path

def _embedder_config(args) -> EmbedderConfig:
    endpoint = args.endpoint or os.environ.get("OCC2VEC_ENDPOINT", "")
    return EmbedderConfig(
        backend=args.backend,
        dim=args.dim,
        seed=args.seed,
        endpoint_url=endpoint,
    )

def _descriptor_vectors(
    catalog: DescriptorCatalog, config: EmbedderConfig, cache: EmbeddingCache
) -> dict[str, np.ndarray]:
    texts = list(catalog.unique_texts())
    vectors = embed_texts(config, texts, cache)
    return {t: v.values.astype(np.float64) for t, v in zip(texts, vectors)}

def _load_pipeline(args) -> tuple[DescriptorCatalog, EmbedderConfig, EmbeddingCache]:
    catalog = load_catalog(_require(Path(args.catalog), "ingest"))
    config = _embedder_config(args)
    cache_path = _require(Path(args.cache), "embed")
    cache = EmbeddingCache(cache_path, config.dim, config.backend_id)
    return catalog, config, cache

# ---------------------------------------------------------------------------
# Commands

def cmd_ingest(args) -> int:
    out = Path(args.out)
    _guard(out, args.force)
    catalog = parse_onet_tables(args.onet_dir)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_catalog(catalog, out)
    counts = catalog.counts()
    print(f"catalog written to {out}")
    print(
        f"occupations: {counts['occupations']}  descriptions: "
        f"{counts['descriptions']}  tasks: {counts['tasks']}  "
        f"attributes: {counts['attributes']}"
    )
    per_cat: dict[str, set[int]] = {}
    for (soc, cat), wds in catalog.bundles.items():
        per_cat.setdefault(cat.value, set()).update(w.descriptor_index for w in wds)
    for cat in Category:
        if cat.value in per_cat:
            print(f"  {cat.value}: {len(per_cat[cat.value])} descriptors")
    for note in catalog.audit:
        print(f"  note: {note}")
    return 0

def cmd_embed(args) -> int:
    catalog = load_catalog(_require(Path(args.catalog), "ingest"))
    config = _embedder_config(args)
    cache_path = Path(args.cache)
    cache_path.parent.mkdir(parents=True, exist_ok=True)
    cache = EmbeddingCache(cache_path, config.dim, config.backend_id)
    texts = list(catalog.unique_texts())
    before = len(cache)
    embed_texts(config, texts, cache)
    print(
        f"cache {cache_path}: {len(cache)} vectors "
        f"({len(cache) - before} new, dim {config.dim}, backend {config.backend})"
    )
    return 0

def cmd_score(args) -> int:
    catalog, config, cache = _load_pipeline(args)
    out = Path(args.out)
    _guard(out, args.force)
    vectors = _descriptor_vectors(catalog, config, cache)
    embeddings = core.build_occupation_embeddings(catalog, vectors)
    characteristic = load_characteristic(args.characteristic)
    char_vec = core.characteristic_embedding(config, characteristic, cache)
    table = core.score_all(embeddings, char_vec, characteristic.name)
    titles = {o.soc_code: o.title for o in catalog.occupations}
    _write_text(out, core.score_table_csv(table, titles), args.force)
    print(f"scores for {characteristic.name} written to {out}")
    return 0

_REGRESSION_SPECS = (
    (),
    ("occupation",),
    ("descriptor",),
    ("category",),
    ("occupation", "descriptor"),
    ("occupation", "category"),
    ("descriptor", "category"),
    ("occupation", "descriptor", "category"),
)

def cmd_validate(args) -> int:
    catalog, config, cache = _load_pipeline(args)
    out_dir = Path(args.out)
    vectors = _descriptor_vectors(catalog, config, cache)
    data = core.validation_data(catalog, vectors)
    between = core.between_occupation_correlations(data)
    within = core.within_occupation_correlations(data)

    for name, sample in (("between", between), ("within", within)):
        sweep = stats.rho_sweep(sample)
        zero = stats.t_test_mean(sample, 0.0)
        lines = ["role,rho0,t_stat,p_value,df", "zero," + _t_row(zero)]
        if sweep.first_non_rejected is not None:
            hit = next(
                r for r in sweep.results if r.rho0 == sweep.first_non_rejected
            )
            lines.append("first_non_rejected," + _t_row(hit))
        _write_text(
            out_dir / f"t_tests_{name}.csv", "\n".join(lines) + "\n", args.force
        )
        grid_lines = ["rho0,t_stat,p_value,df", _t_row(zero)]
        for r in sweep.results:
            grid_lines.append(_t_row(r))
        _write_text(
            out_dir / f"sweep_{name}.csv", "\n".join(grid_lines) + "\n", args.force
        )

    # Both series standardized per attribute: the estimates already are, and
    # matching the truth's scale per attribute keeps the pooled coefficient a
    # conditional correlation rather than a mix of attribute dispersions.
    mask = np.isfinite(data.truths)
    truth_z = np.full_like(data.truths, np.nan)
    for j in range(data.truths.shape[1]):
        col = mask[:, j]
        truth_z[col, j] = stats.zscores(data.truths[col, j])
    y = truth_z[mask]
    x = data.estimates[mask]
    occ_idx, elem_idx = np.nonzero(mask)
    labels = {
        "occupation": np.asarray(data.socs)[occ_idx],
        "descriptor": np.asarray(data.elements)[elem_idx],
        "category": np.asarray(data.element_categories)[elem_idx],
    }
    lines = [
        "occupation_dummies,descriptor_dummies,category_dummies,"
        "coefficient,robust_se,t_stat,r2,adj_r2,n_obs"
    ]
    for spec in _REGRESSION_SPECS:
        result = stats.ols_fixed_effects(
            y, x, {name: labels[name] for name in spec}
        )
        flags = ",".join(
            "yes" if name in spec else "no"
            for name in ("occupation", "descriptor", "category")
        )
        lines.append(
            f"{flags},{result.coefficient_on_measure:.6f},"
            f"{result.robust_se:.6f},{_fmt_t(result.t_stat)},"
            f"{result.r2:.6f},{result.adj_r2:.6f},{result.n_obs}"
        )
    _write_text(out_dir / "regressions.csv", "\n".join(lines) + "\n", args.force)
    print(f"validation tables written to {out_dir}")
    return 0

def _t_row(r: stats.TTestResult) -> str:
    return f"{r.rho0:.2f},{r.t_stat:.6f},{r.p_value:.6f},{r.df}"

def _fmt_t(t: float) -> str:
    return "inf" if math.isinf(t) else f"{t:.6f}"

def cmd_reduce(args) -> int:
    catalog, config, cache = _load_pipeline(args)
    out_dir = Path(args.out)
    labor = load_labor_stats(args.labor_stats) if args.labor_stats else None
    vectors = _descriptor_vectors(catalog, config, cache)
    embeddings = core.build_occupation_embeddings(catalog, vectors)
    socs = sorted(embeddings)
    X = np.stack([embeddings[s].vector for s in socs])
    k = min(50, X.shape[0] - 1, X.shape[1])
    _model, scores = dimred.pca_fit_transform(X, k)
    tsne_config = dimred.TsneConfig(perplexity=args.perplexity, seed=args.seed)
    embedding2d = dimred.tsne(scores, tsne_config, labels=socs)

    def meta(soc: str) -> tuple[str, str]:
        if labor is None or labor.get(soc) is None:
            return "", ""
        row = labor.get(soc)
        return row.major_group_title or "", row.education or ""

    lines = ["soc_code,x,y,major_group_title,education"]
    points_group, points_edu = [], []
    for soc, (px, py) in zip(socs, embedding2d.points):
        group, edu = meta(soc)
        lines.append(f'{soc},{px:.6f},{py:.6f},"{group}","{edu}"')
        points_group.append((float(px), float(py), group or "unknown"))
        points_edu.append((float(px), float(py), edu or "unknown"))
    _write_text(out_dir / "coordinates.csv", "\n".join(lines) + "\n", args.force)
    _write_text(
        out_dir / "map_by_major_group.svg",
        svg.scatter_svg(points_group, "Occupations by major group"),
        args.force,
    )
    edu_order = sorted(
        {g for _, _, g in points_edu},
        key=lambda e: (education_rank(e) if e != "unknown" else 99),
    )
    _write_text(
        out_dir / "map_by_education.svg",
        svg.scatter_svg(points_edu, "Occupations by education", group_order=edu_order),
        args.force,
    )
    print(
        f"2-d map written to {out_dir} "
        f"(KL {embedding2d.final_kl:.6f} from {embedding2d.initial_kl:.6f})"
    )
    return 0

def _read_scores(path: Path) -> list[dict[str, str]]:
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        needed = {"soc_code", "title", "raw_corr", "z_score"}
        if needed - set(reader.fieldnames or []):
            raise InputError(f"{path}: not a score table (expected {sorted(needed)})")
        return list(reader)

def cmd_compare(args) -> int:
    score_rows = _read_scores(_require(Path(args.scores), "score"))
    ext_path = _require(Path(args.external), "external measure")
    with ext_path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if {"soc_code", "value"} - set(reader.fieldnames or []):
            raise InputError(f"{ext_path}: expected columns soc_code,value")
        external = {r["soc_code"]: float(r["value"]) for r in reader}
    ours, theirs = [], []
    for row in score_rows:
        if row["soc_code"] in external:
            ours.append(float(row["z_score"]))
            theirs.append(external[row["soc_code"]])
    if len(ours) < 2:
        raise InputError("fewer than two occupations shared with the external measure")
    lines = [
        "measure,value",
        f"pearson,{stats.pearson(ours, theirs):.6f}",
        f"kendall,{stats.kendall_tau(ours, theirs):.6f}",
        f"spearman,{stats.spearman(ours, theirs):.6f}",
        f"n,{len(ours)}",
    ]
    _write_text(Path(args.out), "\n".join(lines) + "\n", args.force)
    print(f"comparison written to {args.out}")
    return 0

def cmd_report(args) -> int:
    score_rows = _read_scores(_require(Path(args.scores), "score"))
    catalog = load_catalog(_require(Path(args.catalog), "ingest"))
    labor = load_labor_stats(args.labor_stats) if args.labor_stats else None
    out_dir = Path(args.out)
    titles = {o.soc_code: o.title for o in catalog.occupations}
    # The CSV's z column is rounded; re-standardize the raw correlations so
    # the table's exact mean-0 / sd-1 contract holds again.
    raw = [float(r["raw_corr"]) for r in score_rows]
    z = stats.zscores(raw)
    table = core.ScoreTable(
        characteristic_name="report",
        rows=tuple(
            core.ScoreRow(r["soc_code"], rv, float(zv))
            for r, rv, zv in zip(score_rows, raw, z)
        ),
    )
    n = min(args.top_n, len(table.rows))
    top, bottom = core.top_bottom(table, n, titles)
    lines = ["position,rank,soc_code,title,z_score"]
    for rank, (soc, title, z) in enumerate(top, 1):
        lines.append(f'top,{rank},{soc},"{title}",{z:.6f}')
    for rank, (soc, title, z) in enumerate(bottom, 1):
        lines.append(f'bottom,{rank},{soc},"{title}",{z:.6f}')
    _write_text(out_dir / "top_bottom.csv", "\n".join(lines) + "\n", args.force)

    if labor is not None:
        z_by_soc = {r.soc_code: r.z_score for r in table.rows}
        _write_text(
            out_dir / "box_by_major_group.csv",
            _box_csv(z_by_soc, labor, key="major_group_title"),
            args.force,
        )
        _write_text(
            out_dir / "box_by_education.csv",
            _box_csv(z_by_soc, labor, key="education"),
            args.force,
        )
        for field, label in (
            ("median_annual_wage", "wage"),
            ("employment_growth_pct", "growth"),
        ):
            xs, ys = [], []
            for r in table.rows:
                row = labor.get(r.soc_code)
                value = getattr(row, field) if row else None
                if value is not None:
                    xs.append(value)
                    ys.append(r.z_score)
            if len(xs) < 4:
                continue
            pct = stats.percentile_rank(xs)
            curve = stats.local_poly_smooth(pct, ys, bandwidth=args.bandwidth)
            curve_lines = ["percentile,fit"] + [
                f"{gx:.1f},{fy:.6f}"
                for gx, fy in zip(curve.grid_x, curve.fitted_y)
            ]
            _write_text(
                out_dir / f"curve_{label}.csv", "\n".join(curve_lines) + "\n", args.force
            )
            _write_text(
                out_dir / f"curve_{label}.svg",
                svg.curves_svg(
                    curve.grid_x,
                    [("standardized score", curve.fitted_y)],
                    f"Score against {label} percentile",
                    f"{label} percentile",
                    "standardized score",
                ),
                args.force,
            )
    print(f"report written to {out_dir}")
    return 0

def _box_csv(z_by_soc: dict[str, float], labor: LaborStats, key: str) -> str:
    groups: dict[str, list[float]] = {}
    for soc, z in z_by_soc.items():
        row = labor.get(soc)
        label = getattr(row, key) if row else None
        if label:
            groups.setdefault(label, []).append(z)
    if key == "education":
        ordered = sorted(groups, key=education_rank)
    else:
        ordered = sorted(groups)
    lines = [f"{key},count,min,q1,median,q3,max,whisker_lo,whisker_hi"]
    for label in ordered:
        v = np.array(sorted(groups[label]))
        q1, med, q3 = np.percentile(v, [25, 50, 75])
        iqr = q3 - q1
        lo = float(v[v >= q1 - 1.5 * iqr].min())
        hi = float(v[v <= q3 + 1.5 * iqr].max())
        lines.append(
            f'"{label}",{len(v)},{v.min():.6f},{q1:.6f},{med:.6f},{q3:.6f},'
            f"{v.max():.6f},{lo:.6f},{hi:.6f}"
        )
    return "\n".join(lines) + "\n"

def cmd_mlm_demo(args) -> int:
    vocab = bert_toy.make_vocabulary(
        (
            "the", "quick", "brown", "fox", "jumps", "over", "a", "lazy",
            "dog", "while", "rain", "falls",
        )
    )
    sequence = bert_toy.tokenize_pair(
        ("the", "quick", "brown", "fox", "jumps"),
        ("a", "lazy", "dog", "rests"),
        max_tokens=32,
    )
    # "rests" is outside the vocabulary on purpose; masking does not care,
    # only the lookup table does, and the demo never looks it up.
    outcome = bert_toy.apply_mlm_mask(sequence, vocab, seed=args.seed)
    masked = bert_toy.apply_outcome(sequence, outcome)
    print("input: ", " ".join(sequence))
    print("masked:", " ".join(masked))
    uniform = np.full(vocab.size, 1.0 / vocab.size)
    for pos in outcome.selected_positions:
        token = sequence[pos - 1]
        action = outcome.actions[pos]
        if token in vocab.tokens:
            loss, _grad = bert_toy.mlm_cross_entropy(uniform, vocab.lookup(token))
            print(
                f"position {pos}: {token!r} -> {action}; uniform-prediction "
                f"loss {loss:.6f} (ln|V| = {math.log(vocab.size):.6f})"
            )
        else:
            print(f"position {pos}: {token!r} -> {action}; not in vocabulary")
    if not outcome.selected_positions:
        print("no tokens selected at this seed; try another --seed")
    return 0

# ---------------------------------------------------------------------------
# Argument parsing

def _add_backend_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=("hash", "remote"), default="hash")
    p.add_argument("--dim", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--endpoint", default="")

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="occ2vec",
        description="Occupation embeddings, characteristic scoring, and reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse an O*NET directory into a catalog")
    p.add_argument("--onet-dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("embed", help="fill the vector cache for a catalog")
    p.add_argument("--catalog", required=True)
    p.add_argument("--cache", required=True)
    _add_backend_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("score", help="score occupations against a characteristic")
    p.add_argument("--catalog", required=True)
    p.add_argument("--cache", required=True)
    p.add_argument("--characteristic", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    _add_backend_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("validate", help="attribute-recovery t-tests and regressions")
    p.add_argument("--catalog", required=True)
    p.add_argument("--cache", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    _add_backend_flags(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reduce", help="PCA + t-SNE map of the occupations")
    p.add_argument("--catalog", required=True)
    p.add_argument("--cache", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--labor-stats", default="")
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--force", action="store_true")
    _add_backend_flags(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("compare", help="correlate scores with an external measure")
    p.add_argument("--scores", required=True)
    p.add_argument("--external", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="top/bottom tables, boxplot CSVs, curves")
    p.add_argument("--scores", required=True)
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--labor-stats", default="")
    p.add_argument("--bandwidth", type=float, default=0.6)
    p.add_argument("--top-n", type=int, default=10)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("mlm-demo", help="print a masked toy sequence and its loss")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_mlm_demo)

    return parser

def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Refusal as exc:
        print(str(exc), file=sys.stderr)
        return 3
    except (InputError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateInputError, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except Occ2VecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

if __name__ == "__main__":
    sys.exit(main())
