"""Domain types and JSONL dataset ingestion.

A dataset is one JSONL file: a ``meta`` header line naming the dataset and
its human-rating aspects, ``doc`` lines carrying source documents, and
``sum`` lines carrying system summaries with per-aspect ratings. All types
are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path


class DatasetError(ValueError):
    """Raised when a dataset file or record violates the schema."""


def _f1(precision: float, recall: float) -> float:
    s = precision + recall
    return 2.0 * precision * recall / s if s > 0 else 0.0


@dataclass(frozen=True, slots=True)
class ScoreTriple:
    """Precision / recall / F1 of one pairwise comparison."""

    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "ScoreTriple":
        """Build a triple, deriving F1; degenerate P+R <= 0 yields F1 = 0."""
        return cls(precision, recall, _f1(precision, recall))

    def component(self, name: str) -> float:
        if name == "p":
            return self.precision
        if name == "r":
            return self.recall
        if name == "f":
            return self.f1
        raise ValueError(f"unknown component {name!r} (expected p, r, or f)")


@dataclass(frozen=True, slots=True)
class Document:
    id: str
    text: str
    doc_group: str | None = None

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise DatasetError(f"document {self.id!r} has empty text")


@dataclass(frozen=True, slots=True)
class SummaryRecord:
    doc_id: str
    system_id: str
    text: str
    ratings: dict[str, float] = field(default_factory=dict)

    @property
    def key(self) -> tuple[str, str]:
        return (self.doc_id, self.system_id)


@dataclass(frozen=True, slots=True)
class Dataset:
    name: str
    documents: list[Document]
    summaries: list[SummaryRecord]
    aspects: list[str]

    def __post_init__(self) -> None:
        doc_ids = set()
        for doc in self.documents:
            if doc.id in doc_ids:
                raise DatasetError(f"duplicate document id {doc.id!r}")
            doc_ids.add(doc.id)
        aspect_set = set(self.aspects)
        seen = set()
        for rec in self.summaries:
            if rec.key in seen:
                raise DatasetError(
                    f"duplicate summary key (doc_id={rec.doc_id!r}, system_id={rec.system_id!r})"
                )
            seen.add(rec.key)
            if rec.doc_id not in doc_ids:
                raise DatasetError(
                    f"summary (doc_id={rec.doc_id!r}, system_id={rec.system_id!r}) "
                    "references unknown document"
                )
            for aspect, value in rec.ratings.items():
                if aspect not in aspect_set:
                    raise DatasetError(
                        f"summary (doc_id={rec.doc_id!r}, system_id={rec.system_id!r}) "
                        f"rates unknown aspect {aspect!r}"
                    )
                if not math.isfinite(value):
                    raise DatasetError(
                        f"non-finite rating {value!r} for aspect {aspect!r} of "
                        f"(doc_id={rec.doc_id!r}, system_id={rec.system_id!r})"
                    )

    def document(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        raise KeyError(doc_id)

    def group_documents(self, doc: Document) -> list[Document]:
        """All documents sharing ``doc``'s group, or just ``doc`` if ungrouped."""
        if doc.doc_group is None:
            return [doc]
        return [d for d in self.documents if d.doc_group == doc.doc_group]


def load_dataset(path: str | Path, format: str = "jsonl") -> Dataset:
    """Load a dataset file, preserving row order.

    Raises :class:`DatasetError` naming the offending line on malformed
    input, duplicate keys, or unknown aspects.
    """
    if format != "jsonl":
        raise DatasetError(f"unsupported dataset format {format!r}")
    path = Path(path)
    name = path.stem
    aspects: list[str] = []
    documents: list[Document] = []
    summaries: list[SummaryRecord] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path.name}:{lineno}: malformed JSON ({exc.msg})") from exc
            kind = obj.get("kind")
            try:
                if kind == "meta":
                    name = obj["name"]
                    aspects = list(obj["aspects"])
                elif kind == "doc":
                    documents.append(
                        Document(id=obj["id"], text=obj["text"], doc_group=obj.get("group"))
                    )
                elif kind == "sum":
                    summaries.append(
                        SummaryRecord(
                            doc_id=obj["doc_id"],
                            system_id=obj["system_id"],
                            text=obj["text"],
                            ratings={k: float(v) for k, v in obj.get("ratings", {}).items()},
                        )
                    )
                else:
                    raise DatasetError(f"{path.name}:{lineno}: unknown record kind {kind!r}")
            except KeyError as exc:
                raise DatasetError(f"{path.name}:{lineno}: missing field {exc}") from exc
    try:
        return Dataset(name=name, documents=documents, summaries=summaries, aspects=aspects)
    except DatasetError as exc:
        raise DatasetError(f"{path.name}: {exc}") from exc


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write the normalized JSONL form; inverse of :func:`load_dataset`."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            json.dumps({"kind": "meta", "name": dataset.name, "aspects": dataset.aspects}) + "\n"
        )
        for doc in dataset.documents:
            fh.write(
                json.dumps({"kind": "doc", "id": doc.id, "text": doc.text, "group": doc.doc_group})
                + "\n"
            )
        for rec in dataset.summaries:
            fh.write(
                json.dumps(
                    {
                        "kind": "sum",
                        "doc_id": rec.doc_id,
                        "system_id": rec.system_id,
                        "text": rec.text,
                        "ratings": rec.ratings,
                    }
                )
                + "\n"
            )
