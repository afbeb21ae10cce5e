"""Deterministic demo dataset generator.

Writes a small O*NET-style directory (20 occupations in four themed major
groups), a matching labor-stats CSV, and a couple of characteristic
definition files. Texts come from per-group token pools so hash-backend
embeddings cluster by group; numeric ratings are seeded uniform draws.
Used by the bundled pipeline script and the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

SCALES = (
    ("IM", "Importance", 1.0, 5.0),
    ("LV", "Level", 0.0, 7.0),
    ("RT", "Relevance of Task", 1.0, 5.0),
    ("FT", "Frequency of Task", 1.0, 7.0),
    ("OI", "Occupational Interest", 1.0, 7.0),
    ("EX", "Extent", 1.0, 7.0),
    ("CX", "Context", 0.0, 5.0),
)

# element id -> (name, definition, category file, scales)
ELEMENTS: dict[str, tuple[str, str, str, tuple[str, ...]]] = {
    "1.A.1.a.1": (
        "Oral Comprehension",
        "Listening to spoken words and sentences and making sense of the "
        "information and ideas they carry.",
        "Abilities.txt", ("IM", "LV"),
    ),
    "1.A.4.a.6": (
        "Depth Perception",
        "Judging which of several objects is nearer or farther, or how far "
        "away a single object is.",
        "Abilities.txt", ("IM", "LV"),
    ),
    "1.A.2.a.2": (
        "Manual Dexterity",
        "Quickly and precisely moving a hand, a hand with its arm, or both "
        "hands to grasp and assemble objects.",
        "Abilities.txt", ("IM", "LV"),
    ),
    "1.A.1.f.1": (
        "Spatial Orientation",
        "Keeping track of one's own location relative to the surrounding "
        "environment and to other objects.",
        "Abilities.txt", ("IM", "LV"),
    ),
    "2.A.1.a": (
        "Reading Comprehension",
        "Working through written paragraphs and documents to extract what "
        "they say and imply.",
        "Skills.txt", ("IM", "LV"),
    ),
    "2.A.2.b": (
        "Critical Thinking",
        "Using logic and reasoning to weigh the strengths and weaknesses of "
        "alternative approaches and conclusions.",
        "Skills.txt", ("IM", "LV"),
    ),
    "2.C.3.a": (
        "Computers and Electronics",
        "Familiarity with circuit boards, processors, chips, software, and "
        "computer hardware including applications and programming.",
        "Knowledge.txt", ("IM", "LV"),
    ),
    "2.C.5.a": (
        "Medicine and Dentistry",
        "Familiarity with the information and techniques needed to diagnose "
        "and treat injuries and diseases.",
        "Knowledge.txt", ("IM", "LV"),
    ),
    "4.A.2.a.4": (
        "Analyzing Data or Information",
        "Identifying underlying principles, reasons, or facts by breaking "
        "down information or data into separate parts.",
        "Work Activities.txt", ("IM", "LV"),
    ),
    "4.A.2.b.2": (
        "Thinking Creatively",
        "Developing, designing, or creating new ideas, relationships, "
        "systems, or products.",
        "Work Activities.txt", ("IM", "LV"),
    ),
    "4.A.4.a.1": (
        "Interpreting Information for Others",
        "Translating or explaining what information means and how it can be "
        "understood or used by other people.",
        "Work Activities.txt", ("IM", "LV"),
    ),
    "4.A.4.a.4": (
        "Maintaining Interpersonal Relationships",
        "Developing constructive and cooperative working relationships with "
        "others and keeping them over time.",
        "Work Activities.txt", ("IM", "LV"),
    ),
    "4.A.4.b.4": (
        "Guiding and Motivating Subordinates",
        "Providing guidance and direction to team members, including "
        "setting standards and monitoring performance.",
        "Work Activities.txt", ("IM", "LV"),
    ),
    "4.A.4.b.5": (
        "Coaching and Developing Others",
        "Identifying the developmental needs of others and helping them "
        "improve their knowledge or skills.",
        "Work Activities.txt", ("IM", "LV"),
    ),
    "4.A.3.a.4": (
        "Operating Vehicles or Equipment",
        "Running, maneuvering, navigating, or driving vehicles or "
        "mechanized equipment.",
        "Work Activities.txt", ("IM", "LV"),
    ),
    "4.A.3.a.3": (
        "Controlling Machines and Processes",
        "Using control mechanisms or direct physical activity to operate "
        "machines or processes.",
        "Work Activities.txt", ("IM", "LV"),
    ),
    "4.C.3.b.7": (
        "Importance of Repeating Same Tasks",
        "How important is repeating the same physical or mental activities "
        "over and over, without stopping, to this job.",
        "Work Context.txt", ("CX",),
    ),
    "4.C.3.b.4": (
        "Importance of Being Exact or Accurate",
        "How important is being very exact or highly accurate in performing "
        "this job.",
        "Work Context.txt", ("CX",),
    ),
    "4.C.3.b.8": (
        "Structured versus Unstructured Work",
        "To what extent is this job structured for the worker rather than "
        "allowing the worker to determine tasks, priorities, and goals.",
        "Work Context.txt", ("CX",),
    ),
    "4.C.3.d.3": (
        "Pace Determined by Speed of Equipment",
        "How important is it to this job that the pace is determined by the "
        "speed of equipment or machinery.",
        "Work Context.txt", ("CX",),
    ),
    "4.C.2.d.1.g": (
        "Using Hands to Handle Objects",
        "How much time does the worker spend using hands to handle, "
        "control, or feel objects, tools, or controls.",
        "Work Context.txt", ("CX",),
    ),
    "4.C.2.d.1.i": (
        "Making Repetitive Motions",
        "How much time does the worker spend making repetitive motions.",
        "Work Context.txt", ("CX",),
    ),
    "1.C.1.a": (
        "Achievement and Effort",
        "Establishing and maintaining personally challenging achievement "
        "goals and exerting effort toward mastering tasks.",
        "Work Styles.txt", ("IM",),
    ),
    "1.C.3.b": (
        "Self-Control",
        "Maintaining composure, keeping emotions in check, and avoiding "
        "aggressive behavior even in difficult situations.",
        "Work Styles.txt", ("IM",),
    ),
    "1.B.2.a": (
        "Achievement",
        "Occupations that satisfy this work value are results oriented and "
        "let employees use their strongest abilities.",
        "Work Values.txt", ("EX",),
    ),
    "1.B.2.c": (
        "Recognition",
        "Occupations that satisfy this work value offer advancement, "
        "potential for leadership, and prestige.",
        "Work Values.txt", ("EX",),
    ),
    "1.B.1.d": (
        "Realistic",
        "Work involving practical, hands-on problems and solutions, often "
        "with plants, animals, and physical materials.",
        "Interests.txt", ("OI",),
    ),
    "1.B.1.g": (
        "Social",
        "Work involving helping, teaching, or providing service to other "
        "people.",
        "Interests.txt", ("OI",),
    ),
}

_GROUPS = {
    "15": {
        "title": "Computer and Mathematical Occupations",
        "tokens": ("software", "data", "systems", "code", "algorithms",
                   "networks", "databases", "models", "analysis", "computing"),
        "wage": (85000, 140000),
        "growth": (6.0, 22.0),
        "education": ("Bachelor's degree", "Master's degree"),
    },
    "29": {
        "title": "Healthcare Practitioners and Technical Occupations",
        "tokens": ("patients", "clinical", "treatment", "diagnosis", "care",
                   "medical", "health", "therapy", "symptoms", "records"),
        "wage": (60000, 210000),
        "growth": (4.0, 15.0),
        "education": ("Associate's degree", "Doctoral or professional degree"),
    },
    "47": {
        "title": "Construction and Extraction Occupations",
        "tokens": ("construction", "concrete", "equipment", "site", "tools",
                   "materials", "structures", "installation", "repair", "safety"),
        "wage": (35000, 65000),
        "growth": (-2.0, 5.0),
        "education": ("No formal educational credential",
                      "High school diploma or equivalent"),
    },
    "25": {
        "title": "Educational Instruction and Library Occupations",
        "tokens": ("students", "classroom", "lessons", "curriculum", "learning",
                   "instruction", "education", "assignments", "teaching", "school"),
        "wage": (40000, 80000),
        "growth": (2.0, 10.0),
        "education": ("Bachelor's degree", "Master's degree"),
    },
}

_OCCUPATIONS = (
    ("15-1111.00", "Software Developers"),
    ("15-1121.00", "Systems Analysts"),
    ("15-1131.00", "Database Administrators"),
    ("15-1141.00", "Network Engineers"),
    ("15-2011.00", "Data Scientists"),
    ("29-1011.00", "Physicians"),
    ("29-1021.00", "Registered Nurses"),
    ("29-1031.00", "Physical Therapists"),
    ("29-1041.00", "Surgeons"),
    ("29-2011.00", "Laboratory Technicians"),
    ("47-2011.00", "Carpenters"),
    ("47-2021.00", "Masons"),
    ("47-2031.00", "Electricians"),
    ("47-2041.00", "Roofers"),
    ("47-5011.00", "Extraction Workers"),
    ("25-1011.00", "Postsecondary Teachers"),
    ("25-2011.00", "Preschool Teachers"),
    ("25-2021.00", "Elementary Teachers"),
    ("25-3011.00", "Adult Educators"),
    ("25-4011.00", "Archivists"),
)

GREENNESS_DEFINITION = (
    "Jobs in businesses whose goods or services benefit the environment or "
    "conserve natural resources, and jobs whose duties make production "
    "processes more environmentally friendly."
)


@dataclass(frozen=True)
class DemoPaths:
    onet_dir: Path
    labor_stats: Path
    characteristics: dict[str, Path]


def _occupation_text(rng: np.random.Generator, tokens: tuple[str, ...], n: int) -> str:
    picks = [tokens[int(rng.integers(0, len(tokens)))] for _ in range(n)]
    return " ".join(picks)


def write_demo_dataset(root: str | Path, seed: int = 0) -> DemoPaths:
    """Write the demo O*NET directory, labor stats, and characteristics."""
    root = Path(root)
    onet = root / "onet"
    onet.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    scale_range = {sid: (lo, hi) for sid, _name, lo, hi in SCALES}

    lines = ["Scale ID\tScale Name\tMinimum\tMaximum"]
    for sid, name, lo, hi in SCALES:
        lines.append(f"{sid}\t{name}\t{lo:g}\t{hi:g}")
    _write(onet / "Scales Reference.txt", lines)

    lines = ["Element ID\tElement Name\tDescription"]
    for eid, (name, definition, _file, _scales) in sorted(ELEMENTS.items()):
        lines.append(f"{eid}\t{name}\t{definition}")
    _write(onet / "Content Model Reference.txt", lines)

    occ_lines = ["O*NET-SOC Code\tTitle\tDescription"]
    task_lines = ["O*NET-SOC Code\tTask ID\tTask\tTask Type"]
    rating_lines = ["O*NET-SOC Code\tTask ID\tScale ID\tData Value"]
    task_counter = 1000
    for soc, title in _OCCUPATIONS:
        group = _GROUPS[soc[:2]]
        tokens = group["tokens"]
        description = (
            f"Plan and perform work with {_occupation_text(rng, tokens, 4)} "
            f"to support {_occupation_text(rng, tokens, 3)} outcomes."
        )
        occ_lines.append(f"{soc}\t{title}\t{description}")
        n_tasks = 2 + int(rng.integers(0, 2))
        for _t in range(n_tasks):
            task_counter += 1
            text = (
                f"Handle {_occupation_text(rng, tokens, 3)} and document "
                f"{_occupation_text(rng, tokens, 2)} results."
            )
            task_lines.append(f"{soc}\t{task_counter}\t{text}\tCore")
            for sid in ("RT", "FT"):
                lo, hi = scale_range[sid]
                value = round(float(rng.uniform(lo, hi)), 2)
                rating_lines.append(f"{soc}\t{task_counter}\t{sid}\t{value}")
    # one task statement shared verbatim by two occupations
    task_counter += 1
    shared = "Review shared infrastructure logs and report anomalies."
    for soc in ("15-1111.00", "15-1141.00"):
        task_counter += 1
        task_lines.append(f"{soc}\t{task_counter}\t{shared}\tSupplemental")
        for sid in ("RT", "FT"):
            lo, hi = scale_range[sid]
            value = round(float(rng.uniform(lo, hi)), 2)
            rating_lines.append(f"{soc}\t{task_counter}\t{sid}\t{value}")
    _write(onet / "Occupation Data.txt", occ_lines)
    _write(onet / "Task Statements.txt", task_lines)
    _write(onet / "Task Ratings.txt", rating_lines)

    by_file: dict[str, list[str]] = {
        name: ["O*NET-SOC Code\tElement ID\tElement Name\tScale ID\tData Value"]
        for name in ("Abilities.txt", "Skills.txt", "Knowledge.txt",
                     "Work Activities.txt", "Work Styles.txt", "Work Values.txt",
                     "Interests.txt", "Work Context.txt")
    }
    for soc, _title in _OCCUPATIONS:
        for eid, (name, _definition, filename, scales) in sorted(ELEMENTS.items()):
            for sid in scales:
                lo, hi = scale_range[sid]
                value = round(float(rng.uniform(lo, hi)), 2)
                by_file[filename].append(f"{soc}\t{eid}\t{name}\t{sid}\t{value}")
    for filename, rows in by_file.items():
        _write(onet / filename, rows)

    labor = root / "labor_stats.csv"
    rows = ["soc_code,median_annual_wage,employment_growth_pct,education,major_group_title"]
    for soc, _title in _OCCUPATIONS:
        group = _GROUPS[soc[:2]]
        wage = int(rng.uniform(*group["wage"]) // 10 * 10)
        growth = round(float(rng.uniform(*group["growth"])), 1)
        education = group["education"][int(rng.integers(0, len(group["education"])))]
        rows.append(f'{soc},{wage},{growth},{education},"{group["title"]}"')
    _write(labor, rows)

    chars: dict[str, Path] = {}
    green = root / "greenness.def"
    _write(
        green,
        [
            "name = greenness",
            "",
            "[definition]",
            "source = demo labor statistics glossary",
            f"    {GREENNESS_DEFINITION}",
        ],
    )
    chars["greenness"] = green
    auto = root / "automation.def"
    _write(
        auto,
        [
            "name = automation",
            "",
            "[definition]",
            "source = demo engineering glossary",
            "    Work dominated by repetitive machine operation, equipment",
            "    pacing, and precisely specified procedures that software or",
            "    machinery can execute.",
            "",
            "[definition]",
            "source = demo economics glossary",
            "    Tasks that follow codified rules closely enough to be",
            "    delegated to algorithms, scripts, or mechanized equipment.",
        ],
    )
    chars["automation"] = auto
    return DemoPaths(onet_dir=onet, labor_stats=labor, characteristics=chars)


def _write(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
