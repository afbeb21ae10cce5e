"""O*NET table ingestion.

Parses a directory of tab-delimited O*NET-style tables into an immutable
``DescriptorCatalog``: occupations, descriptor texts grouped into ten
categories, and per-(occupation, category) weights normalized to sum to one.
Also loads BLS-style labor statistics and free-text characteristic
definition files, and (de)serializes catalogs to a single binary container.
"""

from __future__ import annotations

import enum
import json
import re
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InputError, RangeError

CATALOG_MAGIC = b"OCAT0001"

EDUCATION_LEVELS = (
    "No formal educational credential",
    "High school diploma or equivalent",
    "Some college, no degree",
    "Postsecondary nondegree award",
    "Associate's degree",
    "Bachelor's degree",
    "Master's degree",
    "Doctoral or professional degree",
)

_SOC_RE = re.compile(r"^\d{2}-\d{4}\.\d{2}$")
_WS_RUN = re.compile(r"\s+")


class Category(str, enum.Enum):
    """The ten descriptor categories."""

    Description = "Description"
    Tasks = "Tasks"
    Abilities = "Abilities"
    Interests = "Interests"
    WorkValues = "WorkValues"
    WorkStyles = "WorkStyles"
    Skills = "Skills"
    Knowledge = "Knowledge"
    WorkActivities = "WorkActivities"
    WorkContext = "WorkContext"


ATTRIBUTE_FILES: Mapping[str, Category] = {
    "Abilities.txt": Category.Abilities,
    "Skills.txt": Category.Skills,
    "Knowledge.txt": Category.Knowledge,
    "Work Activities.txt": Category.WorkActivities,
    "Work Styles.txt": Category.WorkStyles,
    "Work Values.txt": Category.WorkValues,
    "Interests.txt": Category.Interests,
    "Work Context.txt": Category.WorkContext,
}


def clean_text(text: str) -> str:
    """Trim and collapse whitespace runs; case and punctuation are preserved."""
    return _WS_RUN.sub(" ", text).strip()


def education_rank(label: str) -> int:
    """Position of an education label in the ordered 8-level ladder."""
    try:
        return EDUCATION_LEVELS.index(label)
    except ValueError:
        raise InputError(f"unknown education requirement: {label!r}") from None


@dataclass(frozen=True)
class Occupation:
    soc_code: str
    title: str
    education_requirement: Optional[str] = None

    def __post_init__(self):
        if not _SOC_RE.match(self.soc_code):
            raise InputError(f"malformed SOC code: {self.soc_code!r}")

    @property
    def major_group(self) -> str:
        return self.soc_code[:2]


@dataclass(frozen=True)
class Descriptor:
    element_id: str
    category: Category
    text: str
    kind: str  # description | task | attribute

    def __post_init__(self):
        if not self.text.strip():
            raise InputError(f"descriptor {self.element_id} has empty text")
        if self.kind not in ("description", "task", "attribute"):
            raise InputError(f"unknown descriptor kind: {self.kind!r}")


@dataclass(frozen=True)
class ScaleSpec:
    scale_id: str
    minimum: float
    maximum: float

    def __post_init__(self):
        if not self.maximum > self.minimum:
            raise InputError(
                f"scale {self.scale_id}: maximum {self.maximum} must exceed "
                f"minimum {self.minimum}"
            )


@dataclass(frozen=True)
class WeightedDescriptor:
    """A descriptor reference with its normalized bundle weight.

    ``unit_score`` keeps the combined [0, 1] scale score from before weight
    normalization; validation and the composite task measures need it.
    """

    descriptor_index: int
    weight: float
    unit_score: float


@dataclass(frozen=True)
class LaborRow:
    soc_code: str
    median_annual_wage: Optional[float]
    employment_growth_pct: Optional[float]
    education: Optional[str]
    major_group_title: Optional[str]


@dataclass(frozen=True)
class LaborStats:
    rows: Mapping[str, LaborRow]

    def unknown_codes(self, valid_socs: Iterable[str]) -> tuple[str, ...]:
        valid = set(valid_socs)
        return tuple(sorted(c for c in self.rows if c not in valid))

    def get(self, soc_code: str) -> Optional[LaborRow]:
        return self.rows.get(soc_code)


@dataclass(frozen=True)
class CharacteristicDefinition:
    name: str
    definitions: tuple[str, ...]
    source_labels: tuple[str, ...]

    def __post_init__(self):
        if not self.definitions:
            raise InputError(f"characteristic {self.name!r} has no definitions")
        if len(self.definitions) != len(self.source_labels):
            raise InputError(
                f"characteristic {self.name!r}: definitions and source labels "
                "must be parallel"
            )
        for d in self.definitions:
            if not d.strip():
                raise InputError(f"characteristic {self.name!r} has a blank definition")


@dataclass(frozen=True)
class DescriptorCatalog:
    """Immutable catalog of occupations, descriptors, and weighted bundles."""

    occupations: tuple[Occupation, ...]
    descriptors: tuple[Descriptor, ...]
    bundles: Mapping[tuple[str, Category], tuple[WeightedDescriptor, ...]]
    audit: tuple[str, ...] = ()

    def __post_init__(self):
        socs = [o.soc_code for o in self.occupations]
        if len(socs) != len(set(socs)):
            raise InputError("duplicate SOC codes in catalog")
        covered = {soc for (soc, _cat) in self.bundles}
        for soc in socs:
            if soc not in covered:
                raise InputError(f"occupation {soc} has no category bundle")
        n = len(self.descriptors)
        for (soc, cat), wds in self.bundles.items():
            if not wds:
                raise InputError(f"empty bundle for ({soc}, {cat.value})")
            total = sum(w.weight for w in wds)
            if abs(total - 1.0) > 1e-9:
                raise InputError(
                    f"bundle ({soc}, {cat.value}) weights sum to {total!r}, not 1"
                )
            for w in wds:
                if not (0 <= w.descriptor_index < n):
                    raise InputError(
                        f"bundle ({soc}, {cat.value}) references descriptor "
                        f"index {w.descriptor_index} out of range"
                    )

    def occupation(self, soc_code: str) -> Occupation:
        for o in self.occupations:
            if o.soc_code == soc_code:
                return o
        raise KeyError(soc_code)

    def bundle(self, soc_code: str, category: Category) -> tuple[WeightedDescriptor, ...]:
        return self.bundles[(soc_code, category)]

    def categories_present(self, soc_code: str) -> tuple[Category, ...]:
        return tuple(c for c in Category if (soc_code, c) in self.bundles)

    def unique_texts(self) -> tuple[str, ...]:
        """All descriptor texts, deduplicated, in stable sorted order."""
        return tuple(sorted({d.text for d in self.descriptors}))

    def attribute_unit_scores(self, element_id: str) -> dict[str, float]:
        """Per-occupation combined [0, 1] scale score for one attribute."""
        idx = None
        for i, d in enumerate(self.descriptors):
            if d.kind == "attribute" and d.element_id == element_id:
                idx = i
                break
        if idx is None:
            raise InputError(f"unknown attribute element: {element_id}")
        out: dict[str, float] = {}
        for (soc, _cat), wds in self.bundles.items():
            for w in wds:
                if w.descriptor_index == idx:
                    out[soc] = w.unit_score
        return out

    def attribute_elements(self) -> tuple[str, ...]:
        return tuple(
            sorted({d.element_id for d in self.descriptors if d.kind == "attribute"})
        )

    def counts(self) -> dict[str, int]:
        kinds = [d.kind for d in self.descriptors]
        return {
            "occupations": len(self.occupations),
            "descriptions": kinds.count("description"),
            "tasks": kinds.count("task"),
            "attributes": kinds.count("attribute"),
        }


# ---------------------------------------------------------------------------
# Scale arithmetic


def normalize_scale(value: float, spec: ScaleSpec, element_id: str = "") -> float:
    """Map ``value`` from [minimum, maximum] onto [0, 1]."""
    if not (spec.minimum <= value <= spec.maximum):
        where = f" for element {element_id}" if element_id else ""
        raise RangeError(
            f"value {value} outside scale {spec.scale_id} range "
            f"[{spec.minimum}, {spec.maximum}]{where}"
        )
    return (value - spec.minimum) / (spec.maximum - spec.minimum)


def combine_scale_scores(unit_scores: Sequence[float]) -> float:
    """Uniform average of standardized scale scores."""
    if not unit_scores:
        raise InputError("cannot combine an empty list of scale scores")
    for s in unit_scores:
        if not (0.0 <= s <= 1.0):
            raise RangeError(f"unit score {s} outside [0, 1]")
    return sum(unit_scores) / len(unit_scores)


def normalize_weights(raw: Sequence[float], context: str = "") -> list[float]:
    """Scale nonnegative raw weights so they sum to one."""
    if not raw:
        raise InputError(f"no weights to normalize{_ctx(context)}")
    for w in raw:
        if w < 0:
            raise InputError(f"negative weight {w}{_ctx(context)}")
    total = sum(raw)
    if total <= 0:
        raise InputError(f"all-zero weights{_ctx(context)}")
    return [w / total for w in raw]


def _ctx(context: str) -> str:
    return f" in {context}" if context else ""


# ---------------------------------------------------------------------------
# Tab-delimited readers


def _read_table(path: Path, required: Sequence[str]) -> list[dict[str, str]]:
    """Read a tab-delimited file with a header row.

    Returns one dict per data row plus its 1-based line number under ``_line``.
    """
    if not path.is_file():
        raise InputError(f"missing input file: {path}")
    rows: list[dict[str, str]] = []
    with path.open(encoding="utf-8") as fh:
        header_line = fh.readline()
        if not header_line:
            raise InputError(f"{path.name}: empty file")
        header = [h.strip() for h in header_line.rstrip("\n").split("\t")]
        missing = [c for c in required if c not in header]
        if missing:
            raise InputError(f"{path.name}: missing columns {missing}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) < len(header):
                raise InputError(f"{path.name}: malformed row at line {lineno}")
            rows.append(dict(zip(header, parts), _line=str(lineno)))
    return rows


def _parse_float(raw: str, path_name: str, lineno: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise InputError(
            f"{path_name}: unparseable numeric value {raw!r} at line {lineno}"
        ) from None


# ---------------------------------------------------------------------------
# Catalog construction


def parse_onet_tables(directory_path: str | Path) -> DescriptorCatalog:
    """Parse an O*NET-style directory into a ``DescriptorCatalog``.

    Expects ``Occupation Data.txt``, ``Task Statements.txt``,
    ``Task Ratings.txt``, ``Content Model Reference.txt``,
    ``Scales Reference.txt``, and one ratings file per attribute category.
    """
    root = Path(directory_path)
    if not root.is_dir():
        raise InputError(f"missing O*NET directory: {root}")

    scales = _parse_scales(root / "Scales Reference.txt")
    occ_rows = _read_table(
        root / "Occupation Data.txt", ["O*NET-SOC Code", "Title", "Description"]
    )
    content = _parse_content_model(root / "Content Model Reference.txt")
    task_rows = _read_table(
        root / "Task Statements.txt", ["O*NET-SOC Code", "Task ID", "Task"]
    )
    rating_rows = _read_table(
        root / "Task Ratings.txt",
        ["O*NET-SOC Code", "Task ID", "Scale ID", "Data Value"],
    )

    audit: list[str] = []
    descriptors: list[Descriptor] = []
    desc_index: dict[tuple[str, str], int] = {}  # (kind, identity) -> index

    def add_descriptor(d: Descriptor, identity: str) -> int:
        key = (d.kind, identity)
        if key in desc_index:
            return desc_index[key]
        desc_index[key] = len(descriptors)
        descriptors.append(d)
        return desc_index[key]

    occupations: dict[str, Occupation] = {}
    description_of: dict[str, int] = {}
    for row in occ_rows:
        soc = row["O*NET-SOC Code"].strip()
        if soc in occupations:
            raise InputError(
                f"Occupation Data.txt: duplicate SOC code {soc} at line {row['_line']}"
            )
        occupations[soc] = Occupation(soc_code=soc, title=clean_text(row["Title"]))
        text = clean_text(row["Description"])
        if not text:
            raise InputError(
                f"Occupation Data.txt: empty description at line {row['_line']}"
            )
        description_of[soc] = add_descriptor(
            Descriptor(f"desc-{soc}", Category.Description, text, "description"),
            f"desc-{soc}",
        )

    # Tasks are deduplicated by cleaned text so a statement shared between
    # occupations is embedded once; the synthetic id keeps the first Task ID.
    task_text_index: dict[str, int] = {}
    tasks_of: dict[str, list[tuple[str, int]]] = {}  # soc -> [(task_id, desc idx)]
    for row in task_rows:
        soc = row["O*NET-SOC Code"].strip()
        if soc not in occupations:
            raise InputError(
                f"Task Statements.txt: unknown occupation {soc} at line {row['_line']}"
            )
        text = clean_text(row["Task"])
        if not text:
            raise InputError(
                f"Task Statements.txt: empty task text at line {row['_line']}"
            )
        task_id = row["Task ID"].strip()
        if text not in task_text_index:
            task_text_index[text] = add_descriptor(
                Descriptor(f"task-{task_id}", Category.Tasks, text, "task"),
                f"text:{text}",
            )
        tasks_of.setdefault(soc, []).append((task_id, task_text_index[text]))

    # (soc, task_id, scale) -> [values]; repeated rows (e.g. frequency
    # category breakdowns) are averaged after normalization.
    task_values: dict[tuple[str, str, str], list[float]] = {}
    for row in rating_rows:
        soc = row["O*NET-SOC Code"].strip()
        if soc not in occupations:
            raise InputError(
                f"Task Ratings.txt: unknown occupation {soc} at line {row['_line']}"
            )
        scale_id = row["Scale ID"].strip()
        if scale_id not in scales:
            raise InputError(
                f"Task Ratings.txt: unknown scale {scale_id} at line {row['_line']}"
            )
        value = _parse_float(row["Data Value"], "Task Ratings.txt", row["_line"])
        unit = normalize_scale(value, scales[scale_id], row["Task ID"].strip())
        task_values.setdefault((soc, row["Task ID"].strip(), scale_id), []).append(unit)

    bundles: dict[tuple[str, Category], tuple[WeightedDescriptor, ...]] = {}

    for soc in occupations:
        bundles[(soc, Category.Description)] = (
            WeightedDescriptor(description_of[soc], 1.0, 1.0),
        )

    for soc, entries in sorted(tasks_of.items()):
        scored: list[tuple[int, float]] = []
        dropped = 0
        seen: set[int] = set()
        for task_id, idx in entries:
            if idx in seen:  # same text listed twice for one occupation
                continue
            seen.add(idx)
            per_scale = [
                combine_scale_scores(task_values[(soc, task_id, sid)])
                for sid in sorted(scales)
                if (soc, task_id, sid) in task_values
            ]
            if not per_scale:
                dropped += 1
                continue
            scored.append((idx, combine_scale_scores(per_scale)))
        if dropped:
            audit.append(f"{soc}: dropped {dropped} unrated task(s)")
        if scored:
            weights = normalize_weights(
                [s for _, s in scored], context=f"({soc}, Tasks)"
            )
            bundles[(soc, Category.Tasks)] = tuple(
                WeightedDescriptor(idx, w, unit)
                for (idx, unit), w in zip(scored, weights)
            )
        else:
            audit.append(f"{soc}: no rated tasks, Tasks category dropped")

    has_attributes: set[str] = set()
    for filename, category in ATTRIBUTE_FILES.items():
        rows = _read_table(
            root / filename, ["O*NET-SOC Code", "Element ID", "Scale ID", "Data Value"]
        )
        # (soc, element, scale) -> [unit values]
        values: dict[tuple[str, str, str], list[float]] = {}
        for row in rows:
            soc = row["O*NET-SOC Code"].strip()
            if soc not in occupations:
                raise InputError(
                    f"{filename}: unknown occupation {soc} at line {row['_line']}"
                )
            element = row["Element ID"].strip()
            if element not in content:
                raise InputError(
                    f"{filename}: occupation {soc} references unknown element "
                    f"{element} at line {row['_line']}"
                )
            scale_id = row["Scale ID"].strip()
            if scale_id not in scales:
                raise InputError(
                    f"{filename}: unknown scale {scale_id} at line {row['_line']}"
                )
            value = _parse_float(row["Data Value"], filename, row["_line"])
            unit = normalize_scale(value, scales[scale_id], element)
            values.setdefault((soc, element, scale_id), []).append(unit)

        per_occ: dict[str, list[tuple[str, float]]] = {}
        elements = sorted({(s, e) for (s, e, _sid) in values})
        for soc, element in elements:
            per_scale = [
                combine_scale_scores(values[(soc, element, sid)])
                for sid in sorted(scales)
                if (soc, element, sid) in values
            ]
            per_occ.setdefault(soc, []).append(
                (element, combine_scale_scores(per_scale))
            )
        for soc, scored_elems in sorted(per_occ.items()):
            indices = [
                add_descriptor(
                    Descriptor(element, category, content[element], "attribute"),
                    element,
                )
                for element, _ in scored_elems
            ]
            weights = normalize_weights(
                [s for _, s in scored_elems], context=f"({soc}, {category.value})"
            )
            bundles[(soc, category)] = tuple(
                WeightedDescriptor(idx, w, unit)
                for idx, (_, unit), w in zip(indices, scored_elems, weights)
            )
            has_attributes.add(soc)

    # Occupations with no attribute ratings at all are data stubs; keep the
    # catalog to occupations the framework can actually weight.
    kept = [occupations[soc] for soc in occupations if soc in has_attributes]
    dropped_occs = sorted(set(occupations) - has_attributes)
    if dropped_occs:
        audit.append(
            f"dropped {len(dropped_occs)} occupation(s) without attribute "
            f"ratings: {', '.join(dropped_occs)}"
        )
        bundles = {
            key: val for key, val in bundles.items() if key[0] in has_attributes
        }

    for soc in sorted(has_attributes):
        missing = [c.value for c in Category if (soc, c) not in bundles]
        if missing:
            audit.append(f"{soc}: missing categories {', '.join(missing)}")

    return DescriptorCatalog(
        occupations=tuple(sorted(kept, key=lambda o: o.soc_code)),
        descriptors=tuple(descriptors),
        bundles=bundles,
        audit=tuple(audit),
    )


def _parse_scales(path: Path) -> dict[str, ScaleSpec]:
    rows = _read_table(path, ["Scale ID", "Minimum", "Maximum"])
    scales: dict[str, ScaleSpec] = {}
    for row in rows:
        sid = row["Scale ID"].strip()
        scales[sid] = ScaleSpec(
            scale_id=sid,
            minimum=_parse_float(row["Minimum"], path.name, row["_line"]),
            maximum=_parse_float(row["Maximum"], path.name, row["_line"]),
        )
    return scales


def _parse_content_model(path: Path) -> dict[str, str]:
    rows = _read_table(path, ["Element ID", "Element Name", "Description"])
    content: dict[str, str] = {}
    for row in rows:
        text = clean_text(row["Description"])
        if text:
            content[row["Element ID"].strip()] = text
    return content


# ---------------------------------------------------------------------------
# Labor statistics


def load_labor_stats(csv_path: str | Path) -> LaborStats:
    """Load the BLS-style CSV keyed by SOC code."""
    import csv

    path = Path(csv_path)
    if not path.is_file():
        raise InputError(f"missing labor stats file: {path}")
    rows: dict[str, LaborRow] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {
            "soc_code",
            "median_annual_wage",
            "employment_growth_pct",
            "education",
            "major_group_title",
        }
        missing = required - set(reader.fieldnames or [])
        if missing:
            raise InputError(f"{path.name}: missing columns {sorted(missing)}")
        for i, row in enumerate(reader, start=2):
            soc = row["soc_code"].strip()
            if soc in rows:
                raise InputError(f"{path.name}: duplicate soc_code {soc} at row {i}")
            wage = _optional_float(row["median_annual_wage"], path.name, i)
            if wage is not None and wage <= 0:
                raise InputError(f"{path.name}: non-positive wage at row {i}")
            growth = _optional_float(row["employment_growth_pct"], path.name, i)
            education = row["education"].strip() or None
            if education is not None:
                education_rank(education)  # validates the label
            rows[soc] = LaborRow(
                soc_code=soc,
                median_annual_wage=wage,
                employment_growth_pct=growth,
                education=education,
                major_group_title=row["major_group_title"].strip() or None,
            )
    return LaborStats(rows=rows)


def _optional_float(raw: str, path_name: str, rowno: int) -> Optional[float]:
    raw = raw.strip()
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError:
        raise InputError(
            f"{path_name}: unparseable numeric value {raw!r} at row {rowno}"
        ) from None


# ---------------------------------------------------------------------------
# Characteristic definition files


def load_characteristic(definition_file: str | Path) -> CharacteristicDefinition:
    """Parse a line-oriented characteristic file.

    Format: a ``name = <id>`` line, then one or more ``[definition]`` blocks,
    each with a ``source = <label>`` line followed by an indented text body.
    """
    path = Path(definition_file)
    if not path.is_file():
        raise InputError(f"missing characteristic file: {path}")
    name: Optional[str] = None
    definitions: list[str] = []
    sources: list[str] = []
    body: list[str] = []
    in_block = False

    def flush():
        if not in_block:
            return
        text = clean_text(" ".join(body))
        if not text:
            raise InputError(f"{path.name}: definition block with blank body")
        definitions.append(text)

    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped == "[definition]":
            flush()
            in_block = True
            body = []
            sources.append("")
            continue
        if not in_block:
            m = re.match(r"^name\s*=\s*(\S+)$", stripped)
            if not m:
                raise InputError(f"{path.name}: expected 'name = <id>' at line {lineno}")
            if name is not None:
                raise InputError(f"{path.name}: duplicate name at line {lineno}")
            name = m.group(1)
            continue
        m = re.match(r"^source\s*=\s*(.+)$", stripped)
        if m and not line[:1].isspace():
            sources[-1] = m.group(1).strip()
            continue
        if line[:1].isspace():
            body.append(stripped)
            continue
        raise InputError(f"{path.name}: unexpected line {lineno}: {stripped!r}")
    flush()

    if name is None:
        raise InputError(f"{path.name}: missing 'name = <id>' line")
    if not definitions:
        raise InputError(f"{path.name}: no definition blocks")
    return CharacteristicDefinition(
        name=name, definitions=tuple(definitions), source_labels=tuple(sources)
    )


# ---------------------------------------------------------------------------
# Catalog serialization: magic, then length-prefixed UTF-8 JSON records.


def _dump_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def serialize_catalog(catalog: DescriptorCatalog) -> bytes:
    records = [
        _dump_json({"format": "occ2vec-catalog", "version": 1}),
        _dump_json(
            [
                {
                    "soc_code": o.soc_code,
                    "title": o.title,
                    "education_requirement": o.education_requirement,
                }
                for o in catalog.occupations
            ]
        ),
        _dump_json(
            [
                {
                    "element_id": d.element_id,
                    "category": d.category.value,
                    "text": d.text,
                    "kind": d.kind,
                }
                for d in catalog.descriptors
            ]
        ),
        _dump_json(
            [
                {
                    "soc_code": soc,
                    "category": cat.value,
                    "entries": [
                        [w.descriptor_index, w.weight, w.unit_score] for w in wds
                    ],
                }
                for (soc, cat), wds in sorted(
                    catalog.bundles.items(), key=lambda kv: (kv[0][0], kv[0][1].value)
                )
            ]
        ),
        _dump_json(list(catalog.audit)),
    ]
    out = bytearray(CATALOG_MAGIC)
    for rec in records:
        out += struct.pack("<I", len(rec))
        out += rec
    return bytes(out)


def write_catalog(catalog: DescriptorCatalog, path: str | Path) -> None:
    Path(path).write_bytes(serialize_catalog(catalog))


def load_catalog(path: str | Path) -> DescriptorCatalog:
    blob = Path(path).read_bytes()
    if blob[: len(CATALOG_MAGIC)] != CATALOG_MAGIC:
        raise InputError(f"{path}: bad catalog magic at offset 0")
    records: list[bytes] = []
    offset = len(CATALOG_MAGIC)
    while offset < len(blob):
        if offset + 4 > len(blob):
            raise InputError(f"{path}: truncated record length at offset {offset}")
        (length,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        if offset + length > len(blob):
            raise InputError(f"{path}: truncated record payload at offset {offset}")
        records.append(blob[offset : offset + length])
        offset += length
    if len(records) != 5:
        raise InputError(f"{path}: expected 5 records, found {len(records)}")
    header = json.loads(records[0])
    if header.get("format") != "occ2vec-catalog" or header.get("version") != 1:
        raise InputError(f"{path}: unsupported catalog header {header}")
    occupations = tuple(
        Occupation(
            soc_code=o["soc_code"],
            title=o["title"],
            education_requirement=o["education_requirement"],
        )
        for o in json.loads(records[1])
    )
    descriptors = tuple(
        Descriptor(
            element_id=d["element_id"],
            category=Category(d["category"]),
            text=d["text"],
            kind=d["kind"],
        )
        for d in json.loads(records[2])
    )
    bundles = {
        (b["soc_code"], Category(b["category"])): tuple(
            WeightedDescriptor(int(i), float(w), float(u)) for i, w, u in b["entries"]
        )
        for b in json.loads(records[3])
    }
    return DescriptorCatalog(
        occupations=occupations,
        descriptors=descriptors,
        bundles=bundles,
        audit=tuple(json.loads(records[4])),
    )
