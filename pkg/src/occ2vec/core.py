"""Occupation embedding aggregation and characteristic scoring.

Builds occupation vectors as weighted descriptor-embedding averages within
categories followed by a uniform average across categories, embeds
characteristic definitions, scores every occupation against a characteristic
by component-wise correlation, and standardizes the scores. Also hosts the
composite task measures (abstract / manual / routine) built from named
attribute elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .embedding import EmbedderConfig, EmbeddingCache, embed_texts
from .errors import DegenerateInputError, InputError
from .onet_ingest import Category, CharacteristicDefinition, DescriptorCatalog

# Composite task measures: attribute elements per subscale. The structured
# v. unstructured element enters with reversed sign.
TASK_MEASURE_SUBSCALES: Mapping[str, Mapping[str, tuple[str, ...]]] = {
    "abstract": {
        "nonroutine_cognitive_analytical": ("4.A.2.a.4", "4.A.2.b.2", "4.A.4.a.1"),
        "nonroutine_cognitive_interpersonal": ("4.A.4.a.4", "4.A.4.b.4", "4.A.4.b.5"),
    },
    "manual": {
        "nonroutine_manual": ("4.A.3.a.4", "4.C.2.d.1.g", "1.A.2.a.2", "1.A.1.f.1"),
    },
    "routine": {
        "routine_cognitive": ("4.C.3.b.7", "4.C.3.b.4", "4.C.3.b.8"),
        "routine_manual": ("4.C.3.d.3", "4.A.3.a.3", "4.C.2.d.1.i"),
    },
}
REVERSED_ELEMENTS = frozenset({"4.C.3.b.8"})


@dataclass(frozen=True)
class OccupationEmbedding:
    soc_code: str
    vector: np.ndarray
    category_vectors: Mapping[Category, np.ndarray]

    def __post_init__(self):
        if not self.category_vectors:
            raise InputError(f"{self.soc_code}: no category vectors")
        stacked = np.stack(list(self.category_vectors.values()))
        if np.max(np.abs(stacked.mean(axis=0) - self.vector)) > 1e-9:
            raise InputError(
                f"{self.soc_code}: vector is not the mean of its category vectors"
            )


@dataclass(frozen=True)
class ScoreRow:
    soc_code: str
    raw_corr: float
    z_score: float


@dataclass(frozen=True)
class ScoreTable:
    characteristic_name: str
    rows: tuple[ScoreRow, ...]

    def __post_init__(self):
        z = np.array([r.z_score for r in self.rows])
        raw = np.array([r.raw_corr for r in self.rows])
        if abs(z.mean()) > 1e-9:
            raise InputError("z-scores are not centered")
        if abs(z.std(ddof=1) - 1.0) > 1e-9:
            raise InputError("z-scores do not have unit sample sd")
        if np.any(np.argsort(z, kind="stable") != np.argsort(raw, kind="stable")):
            raise InputError("z-score ranking disagrees with raw correlations")

    def by_soc(self) -> dict[str, ScoreRow]:
        return {r.soc_code: r for r in self.rows}


@dataclass(frozen=True)
class CompositeMeasure:
    name: str
    subscale_elements: Mapping[str, tuple[str, ...]]
    values: Mapping[str, float]  # soc_code -> standardized value


def category_embedding(
    catalog: DescriptorCatalog,
    descriptor_vectors: Mapping[str, np.ndarray],
    soc_code: str,
    category: Category,
) -> np.ndarray:
    """Weighted average of a bundle's descriptor vectors.

    ``descriptor_vectors`` is keyed by descriptor text.
    """
    bundle = catalog.bundle(soc_code, category)
    acc: Optional[np.ndarray] = None
    for wd in bundle:
        descriptor = catalog.descriptors[wd.descriptor_index]
        vec = descriptor_vectors.get(descriptor.text)
        if vec is None:
            raise InputError(
                f"no vector for descriptor {descriptor.element_id} "
                f"({soc_code}, {category.value})"
            )
        term = wd.weight * np.asarray(vec, dtype=np.float64)
        acc = term if acc is None else acc + term
    assert acc is not None  # bundles are never empty
    return acc


def occupation_embedding(
    category_vectors: Mapping[Category, np.ndarray],
) -> np.ndarray:
    """Uniform average over the categories present."""
    if not category_vectors:
        raise InputError("no category vectors to average")
    stacked = np.stack([np.asarray(v, dtype=np.float64) for v in category_vectors.values()])
    return stacked.mean(axis=0)


def build_occupation_embeddings(
    catalog: DescriptorCatalog,
    descriptor_vectors: Mapping[str, np.ndarray],
) -> dict[str, OccupationEmbedding]:
    out: dict[str, OccupationEmbedding] = {}
    for occ in catalog.occupations:
        cats = {
            cat: category_embedding(catalog, descriptor_vectors, occ.soc_code, cat)
            for cat in catalog.categories_present(occ.soc_code)
        }
        out[occ.soc_code] = OccupationEmbedding(
            soc_code=occ.soc_code,
            vector=occupation_embedding(cats),
            category_vectors=cats,
        )
    return out


def characteristic_embedding(
    config: EmbedderConfig,
    characteristic: CharacteristicDefinition,
    cache: Optional[EmbeddingCache] = None,
) -> np.ndarray:
    """Mean of the per-definition embeddings."""
    vectors = embed_texts(config, list(characteristic.definitions), cache)
    stacked = np.stack([v.values.astype(np.float64) for v in vectors])
    return stacked.mean(axis=0)


def similarity(occ_vec: np.ndarray, char_vec: np.ndarray) -> float:
    """Pearson correlation across the d components of the two vectors."""
    x = np.asarray(occ_vec, dtype=np.float64)
    y = np.asarray(char_vec, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise InputError(f"incompatible vector shapes {x.shape} and {y.shape}")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = np.sqrt(np.dot(xc, xc))
    sy = np.sqrt(np.dot(yc, yc))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInputError("constant vector has no defined correlation")
    return float(np.dot(xc, yc) / (sx * sy))


def score_all(
    occupation_embeddings: Mapping[str, OccupationEmbedding] | Mapping[str, np.ndarray],
    char_vec: np.ndarray,
    characteristic_name: str = "",
) -> ScoreTable:
    """Correlate every occupation with the characteristic and standardize."""
    if len(occupation_embeddings) < 2:
        raise InputError("need at least two occupations to standardize scores")
    socs = sorted(occupation_embeddings)
    raw = np.array(
        [similarity(_vec(occupation_embeddings[s]), char_vec) for s in socs]
    )
    sd = raw.std(ddof=1)
    if sd == 0.0:
        raise DegenerateInputError(
            "all similarities are equal; scores cannot be standardized"
        )
    z = (raw - raw.mean()) / sd
    return ScoreTable(
        characteristic_name=characteristic_name,
        rows=tuple(
            ScoreRow(soc_code=s, raw_corr=float(r), z_score=float(v))
            for s, r, v in zip(socs, raw, z)
        ),
    )


def _vec(entry) -> np.ndarray:
    return entry.vector if isinstance(entry, OccupationEmbedding) else entry


def _standardize(values: np.ndarray, what: str) -> np.ndarray:
    sd = values.std(ddof=1)
    if sd == 0.0:
        raise DegenerateInputError(f"{what} is constant across occupations")
    return (values - values.mean()) / sd


def composite_task_measure(
    scores_by_element: Mapping[str, Mapping[str, float]],
    name: str,
) -> CompositeMeasure:
    """Two-level standardized sum over the named measure's subscales.

    ``scores_by_element`` maps element id -> (soc_code -> O*NET unit score).
    Reversed elements are negated before summation.
    """
    if name not in TASK_MEASURE_SUBSCALES:
        raise InputError(f"unknown composite measure {name!r}")
    subscales = TASK_MEASURE_SUBSCALES[name]
    needed = [e for elems in subscales.values() for e in elems]
    missing = [e for e in needed if e not in scores_by_element]
    if missing:
        raise InputError(f"missing elements for {name}: {', '.join(missing)}")
    socs = sorted(set.union(*(set(scores_by_element[e]) for e in needed)))
    gaps = [
        f"{e} (missing {sorted(set(socs) - set(scores_by_element[e]))})"
        for e in needed
        if set(scores_by_element[e]) != set(socs)
    ]
    if gaps:
        raise InputError(f"uneven occupation coverage for {name}: {'; '.join(gaps)}")
    if len(socs) < 2:
        raise InputError(f"need at least two occupations for {name}")

    subscale_z = []
    for sub_name, elems in subscales.items():
        total = np.zeros(len(socs))
        for e in elems:
            sign = -1.0 if e in REVERSED_ELEMENTS else 1.0
            total += sign * np.array([scores_by_element[e][s] for s in socs])
        subscale_z.append(_standardize(total, f"subscale {sub_name}"))
    measure = _standardize(np.sum(subscale_z, axis=0), f"measure {name}")
    return CompositeMeasure(
        name=name,
        subscale_elements={k: tuple(v) for k, v in subscales.items()},
        values={s: float(v) for s, v in zip(socs, measure)},
    )


def top_bottom(
    table: ScoreTable, n: int, titles: Optional[Mapping[str, str]] = None
) -> tuple[list[tuple[str, str, float]], list[tuple[str, str, float]]]:
    """Top-n (descending) and bottom-n (ascending) rows by z-score.

    Rows come back as (soc_code, title, z_score); ties break toward the
    lower SOC code.
    """
    if n < 1 or n > len(table.rows):
        raise InputError(f"n={n} outside [1, {len(table.rows)}]")
    titles = titles or {}

    def entry(r: ScoreRow) -> tuple[str, str, float]:
        return (r.soc_code, titles.get(r.soc_code, ""), r.z_score)

    ordered = sorted(table.rows, key=lambda r: (-r.z_score, r.soc_code))
    bottom_sorted = sorted(table.rows, key=lambda r: (r.z_score, r.soc_code))
    return [entry(r) for r in ordered[:n]], [entry(r) for r in bottom_sorted[:n]]


def score_table_csv(table: ScoreTable, titles: Mapping[str, str]) -> str:
    """CSV export sorted by z-score descending, 6 decimal places."""
    lines = ["soc_code,title,raw_corr,z_score"]
    ordered = sorted(table.rows, key=lambda r: (-r.z_score, r.soc_code))
    for r in ordered:
        title = titles.get(r.soc_code, "")
        if "," in title or '"' in title:
            title = '"' + title.replace('"', '""') + '"'
        lines.append(f"{r.soc_code},{title},{r.raw_corr:.6f},{r.z_score:.6f}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Attribute validation data: estimates of every attribute next to the O*NET
# unit scores they should track.


@dataclass(frozen=True)
class ValidationData:
    socs: tuple[str, ...]
    elements: tuple[str, ...]
    element_categories: tuple[str, ...]
    estimates: np.ndarray  # (n_occ, n_elem) per-attribute z-scores
    truths: np.ndarray  # (n_occ, n_elem), NaN where O*NET has no value


def validation_data(
    catalog: DescriptorCatalog,
    descriptor_vectors: Mapping[str, np.ndarray],
    occupation_embeddings: Optional[Mapping[str, OccupationEmbedding]] = None,
) -> ValidationData:
    """Score every attribute as a characteristic and align with truth."""
    if occupation_embeddings is None:
        occupation_embeddings = build_occupation_embeddings(catalog, descriptor_vectors)
    socs = tuple(sorted(occupation_embeddings))
    elements = catalog.attribute_elements()
    if not elements:
        raise InputError("catalog has no attribute descriptors to validate against")
    by_element = {
        d.element_id: d
        for d in catalog.descriptors
        if d.kind == "attribute"
    }
    soc_pos = {soc: i for i, soc in enumerate(socs)}
    est = np.empty((len(socs), len(elements)))
    truth = np.full((len(socs), len(elements)), np.nan)
    categories = []
    for j, element in enumerate(elements):
        descriptor = by_element[element]
        categories.append(descriptor.category.value)
        vec = descriptor_vectors.get(descriptor.text)
        if vec is None:
            raise InputError(f"no vector for attribute element {element}")
        table = score_all(occupation_embeddings, np.asarray(vec, dtype=np.float64))
        rows = table.by_soc()
        for i, soc in enumerate(socs):
            est[i, j] = rows[soc].z_score
        for soc, unit in catalog.attribute_unit_scores(element).items():
            if soc in soc_pos:
                truth[soc_pos[soc], j] = unit
    return ValidationData(
        socs=socs,
        elements=elements,
        element_categories=tuple(categories),
        estimates=est,
        truths=truth,
    )


def between_occupation_correlations(data: ValidationData) -> np.ndarray:
    """Pearson correlation per attribute, across occupations."""
    from .stats import pearson

    out = []
    for j in range(len(data.elements)):
        mask = np.isfinite(data.truths[:, j])
        out.append(pearson(data.estimates[mask, j], data.truths[mask, j]))
    return np.array(out)


def within_occupation_correlations(data: ValidationData) -> np.ndarray:
    """Pearson correlation per occupation, across attributes."""
    from .stats import pearson

    out = []
    for i in range(len(data.socs)):
        mask = np.isfinite(data.truths[i, :])
        out.append(pearson(data.estimates[i, mask], data.truths[i, mask]))
    return np.array(out)
