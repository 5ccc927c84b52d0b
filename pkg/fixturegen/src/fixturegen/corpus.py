"""Canonical fixture corpus: documents, system summaries, and ratings.

Texts are defined sentence-by-sentence; the full text of a document or
summary is its sentences joined with single spaces. Pair ``pair00``'s
``sysA`` summary is deliberately identical to its document so the golden
table contains an exact-match row. ``pair03`` has exactly four document
sentences for lead-filter tests.
"""

from __future__ import annotations

from dataclasses import dataclass

ASPECTS = ["coverage", "fluency"]

SYSTEMS = ["sysA", "sysB", "sysC"]


@dataclass(frozen=True)
class FixturePair:
    pair_id: str
    doc_sentences: tuple[str, ...]
    summaries: dict[str, tuple[str, ...]]  # system id -> sentences
    ratings: dict[str, dict[str, float]]  # system id -> aspect -> rating

    @property
    def doc_text(self) -> str:
        return " ".join(self.doc_sentences)

    def summary_text(self, system_id: str) -> str:
        return " ".join(self.summaries[system_id])


def _pair(pair_id, doc, a, b, c, ratings):
    return FixturePair(
        pair_id=pair_id,
        doc_sentences=tuple(doc),
        summaries={"sysA": tuple(a), "sysB": tuple(b), "sysC": tuple(c)},
        ratings={
            sys_id: {"coverage": float(cov), "fluency": float(flu)}
            for sys_id, (cov, flu) in zip(SYSTEMS, ratings)
        },
    )


PAIRS: list[FixturePair] = [
    _pair(
        "pair00",
        [
            "The city council approved the annual budget on Monday.",
            "Road repairs will receive most of the new spending.",
        ],
        # sysA == the document itself: exact-match golden row.
        [
            "The city council approved the annual budget on Monday.",
            "Road repairs will receive most of the new spending.",
        ],
        ["The council approved the budget and roads get the largest share."],
        ["A music festival drew large crowds downtown."],
        [(5, 4), (4, 5), (1, 3)],
    ),
    _pair(
        "pair01",
        [
            "A coastal storm flooded several streets on Friday.",
            "Residents moved to higher ground before nightfall.",
            "Cleanup crews began work the next morning.",
        ],
        [
            "A storm flooded streets on Friday.",
            "Residents moved to higher ground.",
        ],
        ["Cleanup crews started after the flood."],
        ["The storm was the third this season."],
        [(5, 5), (3, 4), (2, 4)],
    ),
    _pair(
        "pair02",
        [
            "Researchers described a new species of tree frog in the journal.",
            "The frog was found deep in the rainforest.",
            "Its call is unusually low for its size.",
        ],
        ["Scientists found a new tree frog species in the rainforest."],
        ["A new frog was described, and its call is unusually low."],
        ["Frogs are amphibians that live near water."],
        [(4, 5), (4, 4), (1, 4)],
    ),
    _pair(
        "pair03",
        [
            "The museum opened its new wing on Saturday.",
            "Visitors praised the glass atrium and the quiet reading room.",
            "Dr. Alvarez led the opening tour for donors.",
            "Ticket sales doubled compared with last spring.",
        ],
        [
            "The museum opened a new wing.",
            "Visitors praised the atrium and reading room.",
        ],
        ["Ticket sales doubled after the museum expansion."],
        ["The museum closed for renovations this year."],
        [(5, 4), (3, 4), (1, 2)],
    ),
    _pair(
        "pair04",
        [
            "Engineers finished the river bridge two months ahead of schedule.",
            "The crossing will open to traffic next week.",
            "Officials credited mild weather and careful planning.",
        ],
        ["The bridge was finished early and opens to traffic next week."],
        ["Mild weather helped engineers finish the bridge ahead of schedule."],
        ["The old ferry service will keep running indefinitely."],
        [(5, 5), (4, 4), (1, 3)],
    ),
    _pair(
        "pair05",
        [
            "The school district added coding classes for all middle grades.",
            "Students built small games by the end of winter.",
        ],
        ["Middle schools added coding classes and students built games."],
        ["Coding is now taught in the district."],
        ["The district cut its art program budget."],
        [(5, 4), (3, 4), (1, 3)],
    ),
    _pair(
        "pair06",
        [
            "Grain prices fell sharply after the harvest report.",
            "Farmers expect a difficult spring season.",
            "Export demand remains weak across the region.",
        ],
        ["Grain prices fell and farmers expect a hard spring."],
        ["Weak exports pushed grain prices lower."],
        ["Vegetable prices rose slightly last month."],
        [(4, 4), (3, 4), (2, 3)],
    ),
    _pair(
        "pair07",
        [
            "The hospital opened a walk-in clinic near the station.",
            "Nurses staff the clinic seven days a week.",
            "Waiting times fell within the first month.",
        ],
        ["A walk-in clinic opened near the station and waiting times fell."],
        ["The clinic is staffed by nurses every day."],
        ["The hospital plans to close two wards."],
        [(5, 4), (3, 4), (1, 3)],
    ),
    _pair(
        "pair08",
        [
            "The library extended evening hours through the exam period.",
            "Study rooms can now be booked online.",
        ],
        ["The library extended evening hours and study rooms book online."],
        ["Longer library hours will last through exams."],
        ["The cafe in the library raised its prices."],
        [(5, 3), (3, 4), (1, 4)],
    ),
    _pair(
        "pair09",
        [
            "The volunteer crew planted oak saplings along the greenway.",
            "Each tree carries a tag with its planting date.",
            "Organizers plan a second planting in the fall.",
        ],
        ["Volunteers planted tagged oak saplings along the greenway."],
        ["A second tree planting is planned for the fall."],
        ["The greenway trail was closed for repaving."],
        [(4, 5), (3, 4), (2, 4)],
    ),
]

# BPE training corpus: all fixture texts plus filler lines so the merge
# table carries common English chunks beyond the fixture vocabulary.
EXTRA_TRAINING_LINES = [
    "The quick brown fox jumps over the lazy dog near the riverbank.",
    "Numbers like 3, 42 and 1908 appear in reports, tables and notes.",
    "Quotes, dashes - and (parentheses) should tokenize without trouble.",
    "Summaries compress documents; documents provide the full context.",
]


def training_corpus() -> list[str]:
    lines = []
    for pair in PAIRS:
        lines.append(pair.doc_text)
        for system_id in SYSTEMS:
            lines.append(pair.summary_text(system_id))
    return lines + EXTRA_TRAINING_LINES


def corpus_as_json() -> dict:
    """Plain-data form committed beside the fixtures."""
    return {
        "aspects": ASPECTS,
        "systems": SYSTEMS,
        "pairs": [
            {
                "id": pair.pair_id,
                "doc_sentences": list(pair.doc_sentences),
                "summaries": {k: list(v) for k, v in pair.summaries.items()},
                "ratings": pair.ratings,
            }
            for pair in PAIRS
        ],
    }
