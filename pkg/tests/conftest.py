from pathlib import Path

import numpy as np
import pytest

from occ2vec import fixtures
from occ2vec.onet_ingest import (
    Category,
    Descriptor,
    DescriptorCatalog,
    Occupation,
    WeightedDescriptor,
    normalize_weights,
    parse_onet_tables,
)

TINY_SCALES = [
    ("IM", "Importance", 1.0, 5.0),
    ("LV", "Level", 0.0, 7.0),
    ("RT", "Relevance of Task", 1.0, 5.0),
    ("FT", "Frequency of Task", 1.0, 7.0),
    ("OI", "Occupational Interest", 1.0, 7.0),
    ("EX", "Extent", 1.0, 7.0),
    ("CX", "Context", 0.0, 5.0),
]

ATTRIBUTE_FILE_NAMES = (
    "Abilities.txt", "Skills.txt", "Knowledge.txt", "Work Activities.txt",
    "Work Styles.txt", "Work Values.txt", "Interests.txt", "Work Context.txt",
)


def write_tiny_onet(
    root: Path,
    abilities_rows=None,
    skills_rows=None,
    task_rating_rows=None,
) -> Path:
    """Two occupations, two shared attributes, one task each.

    Callers may override the ratings rows to probe error paths.
    """
    onet = root / "onet"
    onet.mkdir(parents=True, exist_ok=True)

    (onet / "Scales Reference.txt").write_text(
        "Scale ID\tScale Name\tMinimum\tMaximum\n"
        + "".join(f"{s}\t{n}\t{lo:g}\t{hi:g}\n" for s, n, lo, hi in TINY_SCALES),
        encoding="utf-8",
    )
    (onet / "Content Model Reference.txt").write_text(
        "Element ID\tElement Name\tDescription\n"
        "1.A.1.a.1\tOral Comprehension\tListening to spoken information and "
        "making sense of it.\n"
        "2.A.1.a\tReading Comprehension\tWorking through written material to "
        "extract meaning.\n",
        encoding="utf-8",
    )
    (onet / "Occupation Data.txt").write_text(
        "O*NET-SOC Code\tTitle\tDescription\n"
        "11-1011.00\tAlpha Managers\tDirect teams and coordinate planning "
        "across departments.\n"
        "19-2011.00\tBeta Scientists\tObserve and interpret physical "
        "phenomena for research programs.\n",
        encoding="utf-8",
    )
    (onet / "Task Statements.txt").write_text(
        "O*NET-SOC Code\tTask ID\tTask\tTask Type\n"
        "11-1011.00\t101\tReview organizational budgets and approve plans.\tCore\n"
        "19-2011.00\t201\tMeasure emission spectra from laboratory samples.\tCore\n",
        encoding="utf-8",
    )
    if task_rating_rows is None:
        task_rating_rows = [
            "11-1011.00\t101\tRT\t4.0",
            "11-1011.00\t101\tFT\t4.0",
            "19-2011.00\t201\tRT\t3.0",
            "19-2011.00\t201\tFT\t7.0",
        ]
    (onet / "Task Ratings.txt").write_text(
        "O*NET-SOC Code\tTask ID\tScale ID\tData Value\n"
        + "".join(r + "\n" for r in task_rating_rows),
        encoding="utf-8",
    )
    if abilities_rows is None:
        abilities_rows = [
            "11-1011.00\t1.A.1.a.1\tOral Comprehension\tIM\t5.0",
            "11-1011.00\t1.A.1.a.1\tOral Comprehension\tLV\t7.0",
            "19-2011.00\t1.A.1.a.1\tOral Comprehension\tIM\t3.0",
            "19-2011.00\t1.A.1.a.1\tOral Comprehension\tLV\t3.5",
        ]
    if skills_rows is None:
        skills_rows = [
            "11-1011.00\t2.A.1.a\tReading Comprehension\tIM\t2.0",
            "19-2011.00\t2.A.1.a\tReading Comprehension\tIM\t3.0",
        ]
    header = "O*NET-SOC Code\tElement ID\tElement Name\tScale ID\tData Value\n"
    for name in ATTRIBUTE_FILE_NAMES:
        rows = {"Abilities.txt": abilities_rows, "Skills.txt": skills_rows}.get(name, [])
        (onet / name).write_text(
            header + "".join(r + "\n" for r in rows), encoding="utf-8"
        )
    return onet


@pytest.fixture
def tiny_onet(tmp_path):
    return write_tiny_onet(tmp_path)


@pytest.fixture(scope="session")
def demo_paths(tmp_path_factory):
    root = tmp_path_factory.mktemp("demo_dataset")
    return fixtures.write_demo_dataset(root, seed=0)


@pytest.fixture(scope="session")
def demo_catalog(demo_paths):
    return parse_onet_tables(demo_paths.onet_dir)


def random_mini_catalog(rng: np.random.Generator, dim: int):
    """Small random catalog plus a text -> vector map for aggregation tests."""
    n_occ = int(rng.integers(2, 11))
    n_cats = int(rng.integers(1, 5))
    cats = list(Category)[:n_cats]
    descriptors = []
    by_cat: dict[Category, list[int]] = {c: [] for c in cats}
    for c in cats:
        for j in range(int(rng.integers(1, 7))):
            idx = len(descriptors)
            descriptors.append(
                Descriptor(f"{c.value}-{j}", c, f"text {c.value} {j}", "attribute")
            )
            by_cat[c].append(idx)
    vectors = {d.text: rng.standard_normal(dim) for d in descriptors}
    occupations, bundles = [], {}
    for i in range(n_occ):
        soc = f"{10 + i:02d}-1000.0{i % 10}"
        occupations.append(Occupation(soc_code=soc, title=f"Occupation {i}"))
        present = [c for c in cats if rng.random() < 0.8] or [cats[0]]
        for c in present:
            picks = rng.choice(
                by_cat[c], size=int(rng.integers(1, len(by_cat[c]) + 1)), replace=False
            )
            weights = normalize_weights(list(rng.uniform(0.05, 1.0, len(picks))))
            bundles[(soc, c)] = tuple(
                WeightedDescriptor(int(p), w, float(rng.uniform(0.1, 1.0)))
                for p, w in zip(picks, weights)
            )
    catalog = DescriptorCatalog(
        occupations=tuple(occupations),
        descriptors=tuple(descriptors),
        bundles=bundles,
    )
    return catalog, vectors


def brute_force_occupation_vector(catalog, vectors, soc: str) -> np.ndarray:
    """Direct double sum (1/K) * sum_k sum_j W * X over present categories."""
    cats = catalog.categories_present(soc)
    total = None
    for cat in cats:
        for wd in catalog.bundle(soc, cat):
            text = catalog.descriptors[wd.descriptor_index].text
            term = wd.weight * vectors[text]
            total = term if total is None else total + term
    return total / len(cats)


PLANTED_SOC = "17-1000.00"
PLANTED_CHAR_TEXT = "solar wind renewable energy panels"

_DISTRACTOR_TOKENS = (
    "gravel mortar bricks lime kiln quarry",
    "ledger invoices audits payroll receipts filings",
    "saute braise garnish simmer whisk marinade",
    "fuselage avionics rudder throttle hydraulics runway",
    "sonnet stanza meter rhyme verse couplet",
    "glacier moraine crevasse icefall serac ridge",
)


def planted_catalog():
    """Catalog where one occupation's texts reuse the characteristic tokens."""
    descriptors = [
        Descriptor("desc-planted", Category.Description,
                   "solar panels energy installation", "description"),
        Descriptor("task-planted", Category.Tasks,
                   "install wind renewable energy panels", "task"),
    ]
    bundles = {
        (PLANTED_SOC, Category.Description): (WeightedDescriptor(0, 1.0, 1.0),),
        (PLANTED_SOC, Category.Tasks): (WeightedDescriptor(1, 1.0, 0.5),),
    }
    occupations = [Occupation(soc_code=PLANTED_SOC, title="Planted Installers")]
    for i, tokens in enumerate(_DISTRACTOR_TOKENS):
        soc = f"{20 + i:02d}-2000.00"
        occupations.append(Occupation(soc_code=soc, title=f"Distractor {i}"))
        d0, d1 = len(descriptors), len(descriptors) + 1
        words = tokens.split()
        descriptors.append(
            Descriptor(f"desc-{i}", Category.Description,
                       " ".join(words[:4]), "description")
        )
        descriptors.append(
            Descriptor(f"task-{i}", Category.Tasks, " ".join(words[2:]), "task")
        )
        bundles[(soc, Category.Description)] = (WeightedDescriptor(d0, 1.0, 1.0),)
        bundles[(soc, Category.Tasks)] = (WeightedDescriptor(d1, 1.0, 0.5),)
    return DescriptorCatalog(
        occupations=tuple(occupations),
        descriptors=tuple(descriptors),
        bundles=bundles,
    )
