"""Benchmark harness: score datasets, correlate with human ratings, report.

Every (summary, document) pair in a dataset is scored under a declarative
metric suite; per-aspect Spearman and Pearson correlations are then
computed at the summary level. The default pooling correlates across each
document's summaries and averages over documents (``per_doc_mean``);
``pooled`` correlates all summaries jointly. Documents whose ratings or
scores are constant cannot carry a correlation and are excluded, with the
exclusion visible in ``n_units``.
"""

from __future__ import annotations

import csv
import math
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .data import Dataset, Document, ScoreTriple
from .embeddings import IdfTable, compute_idf
from .lexical_metrics import VARIANTS, rouge_reffree
from .sentence_metrics import (
    SentenceSimConfig,
    leadword_filter,
    multi_doc_score,
    sentence_bertscore,
)
from .stats import pearson, spearman
from .token_metrics import GreedyMatchConfig, bertscore_reffree, moverscore_greedy

POOLINGS = ("per_doc_mean", "pooled")
METRIC_NAMES = ("bertscore", "moverscore", "rouge", "sentence_bertscore", "external")


class BenchmarkError(RuntimeError):
    """Raised when a benchmark run cannot be completed."""


@dataclass(frozen=True, slots=True)
class MetricRun:
    """One metric's scores over every (doc_id, system_id) pair."""

    metric_name: str
    component: str  # p, r, f, or scalar
    scores: dict[tuple[str, str], float]
    config_digest: str = ""


@dataclass(frozen=True, slots=True)
class ReportRow:
    metric_name: str
    component: str
    aspect: str
    spearman: float | None
    pearson: float | None
    n_units: int


@dataclass(frozen=True, slots=True)
class CorrelationReport:
    rows: list[ReportRow]
    dataset_name: str
    pooling: str


@dataclass(frozen=True, slots=True)
class MetricSetting:
    """One suite entry; unset knobs keep their metric's defaults."""

    name: str
    component: str = "f"
    variant: str = "r1"  # rouge only
    use_idf: bool = False  # bertscore only
    sim_kind: str = "cosine"  # sentence_bertscore only
    weighting: str = "none"  # sentence_bertscore only
    leadword_k: float = 1.0
    path: str | None = None  # external only
    label: str | None = None

    def __post_init__(self) -> None:
        if self.name not in METRIC_NAMES:
            raise BenchmarkError(
                f"unknown metric {self.name!r} (registered: {', '.join(METRIC_NAMES)})"
            )
        if self.name == "rouge" and self.variant not in VARIANTS:
            raise BenchmarkError(f"unknown ROUGE variant {self.variant!r}")
        if self.name in ("moverscore", "external"):
            object.__setattr__(self, "component", "scalar")

    @property
    def display_name(self) -> str:
        if self.label:
            return self.label
        if self.name == "rouge":
            return f"rouge_{self.variant}"
        if self.name == "bertscore":
            return "bertscore_idf" if self.use_idf else "bertscore"
        if self.name == "sentence_bertscore":
            parts = ["sentence_bertscore", self.sim_kind]
            if self.weighting != "none":
                parts.append(self.weighting)
        else:
            parts = [self.name]
        return "_".join(parts)

    def digest(self, model_id: str = "") -> str:
        blob = json.dumps(
            {
                "name": self.name,
                "component": self.component,
                "variant": self.variant,
                "use_idf": self.use_idf,
                "sim_kind": self.sim_kind,
                "weighting": self.weighting,
                "leadword_k": self.leadword_k,
                "model": model_id,
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


# --------------------------------------------------------------------------
# scoring
# --------------------------------------------------------------------------


def _pair_scorer(setting: MetricSetting, backend, idf_table: IdfTable | None):
    """Callable (summary_text, document_text) -> ScoreTriple | float."""
    if setting.name == "rouge":
        return lambda s, d: rouge_reffree(s, d, setting.variant)
    if setting.name == "bertscore":
        cfg = GreedyMatchConfig(use_idf=setting.use_idf)
        return lambda s, d: bertscore_reffree(s, d, cfg, backend, idf_table=idf_table)
    if setting.name == "moverscore":
        cfg = GreedyMatchConfig(use_idf=False)
        return lambda s, d: moverscore_greedy(s, d, cfg, backend)
    if setting.name == "sentence_bertscore":
        cfg = SentenceSimConfig(sim_kind=setting.sim_kind, weighting=setting.weighting)
        return lambda s, d: sentence_bertscore(s, d, cfg, backend)
    raise BenchmarkError(f"metric {setting.name!r} is not scored internally")


def score_pair(
    summary: str,
    document: str,
    setting: MetricSetting,
    backend=None,
    idf_table: IdfTable | None = None,
) -> ScoreTriple | float:
    """Score a single (summary, document) pair under one metric setting."""
    if setting.leadword_k < 1.0:
        document = leadword_filter(
            Document(id="document", text=document), setting.leadword_k
        ).text
    return _pair_scorer(setting, backend, idf_table)(summary, document)


def score_dataset(
    dataset: Dataset,
    setting: MetricSetting,
    backend,
    idf_table: IdfTable | None = None,
) -> MetricRun:
    """Score every summary of the dataset under one metric setting.

    Grouped documents (multi-document topics) are aggregated by summing
    the per-document scores; the leadword filter, when enabled, is applied
    to each document before scoring.
    """
    if setting.name == "external":
        if not setting.path:
            raise BenchmarkError("external metric entry needs a 'path'")
        return ingest_external_scores(setting.path)
    scorer = _pair_scorer(setting, backend, idf_table)
    component = setting.component
    scores: dict[tuple[str, str], float] = {}
    for rec in dataset.summaries:
        doc = dataset.document(rec.doc_id)
        docs = dataset.group_documents(doc)
        if setting.leadword_k < 1.0:
            docs = [leadword_filter(d, setting.leadword_k) for d in docs]
        try:
            scores[rec.key] = multi_doc_score(docs, rec.text, scorer, component)
        except Exception as exc:
            raise BenchmarkError(
                f"metric {setting.display_name!r} failed on "
                f"(doc_id={rec.doc_id!r}, system_id={rec.system_id!r}): {exc}"
            ) from exc
    model_id = getattr(backend, "model_id", "") if backend is not None else ""
    return MetricRun(
        metric_name=setting.display_name,
        component=component,
        scores=scores,
        config_digest=setting.digest(model_id),
    )


# --------------------------------------------------------------------------
# correlation
# --------------------------------------------------------------------------

_CORR = {"spearman": spearman, "pearson": pearson}


def summary_level_correlation(
    dataset: Dataset,
    run: MetricRun,
    aspect: str,
    kind: str = "spearman",
    pooling: str = "per_doc_mean",
) -> tuple[float | None, int]:
    """Correlation between metric scores and an aspect's human ratings.

    ``per_doc_mean``: correlate across each document's summaries, then
    average over the documents where the correlation is defined (at
    least two summaries, non-constant ratings and scores); returns that
    mean and the qualifying-document count. ``pooled``: one correlation
    over all rated summaries, with ``n_units`` the summary count.
    Undefined correlations return ``(None, 0)``.
    """
    if pooling not in POOLINGS:
        raise ValueError(f"unknown pooling {pooling!r}")
    corr = _CORR[kind]
    # Summaries the run does not cover (possible for ingested external
    # scores) drop out of the correlation; see coverage_warnings.
    rated = [
        rec
        for rec in dataset.summaries
        if aspect in rec.ratings and rec.key in run.scores
    ]
    if pooling == "pooled":
        if len(rated) < 2:
            return None, 0
        value = corr([run.scores[r.key] for r in rated], [r.ratings[aspect] for r in rated])
        return (value, len(rated)) if value is not None else (None, 0)
    by_doc: dict[str, list] = {}
    for rec in rated:
        by_doc.setdefault(rec.doc_id, []).append(rec)
    values = []
    for doc_id in sorted(by_doc):
        recs = by_doc[doc_id]
        if len(recs) < 2:
            continue
        value = corr([run.scores[r.key] for r in recs], [r.ratings[aspect] for r in recs])
        if value is not None:
            values.append(value)
    if not values:
        return None, 0
    return sum(values) / len(values), len(values)


def run_benchmark(
    dataset: Dataset,
    suite: list[MetricSetting],
    pooling: str = "per_doc_mean",
    backend=None,
) -> CorrelationReport:
    """Score the whole suite and correlate every metric against every aspect.

    Deterministic given a fixed backend. When any entry uses IDF, the
    table is computed once over the dataset's source documents with the
    backend's subword tokenizer.
    """
    if not suite:
        raise BenchmarkError("metric suite is empty")
    if pooling not in POOLINGS:
        raise BenchmarkError(f"unknown pooling {pooling!r}")
    idf_table = None
    if any(s.use_idf for s in suite if s.name == "bertscore"):
        if backend is None:
            raise BenchmarkError("IDF weighting needs an embedding backend")
        idf_table = compute_idf([backend.tokenize(d.text) for d in dataset.documents])
    rows: list[ReportRow] = []
    for setting in suite:
        run = score_dataset(dataset, setting, backend, idf_table=idf_table)
        for aspect in dataset.aspects:
            s_value, n_units = summary_level_correlation(
                dataset, run, aspect, "spearman", pooling
            )
            p_value, _ = summary_level_correlation(dataset, run, aspect, "pearson", pooling)
            rows.append(
                ReportRow(
                    metric_name=run.metric_name,
                    component=run.component,
                    aspect=aspect,
                    spearman=s_value,
                    pearson=p_value,
                    n_units=n_units,
                )
            )
    return CorrelationReport(rows=rows, dataset_name=dataset.name, pooling=pooling)


# --------------------------------------------------------------------------
# external scores and rendering
# --------------------------------------------------------------------------


def ingest_external_scores(path: str | Path) -> MetricRun:
    """Read a ``doc_id,system_id,score`` CSV produced by another tool.

    The file starts with a ``# metric=<name>`` comment naming the metric;
    scores join the benchmark under the identical correlation protocol.
    """
    path = Path(path)
    metric_name = path.stem
    scores: dict[tuple[str, str], float] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        first = fh.readline().strip()
        if first.startswith("#"):
            comment = first.lstrip("#").strip()
            if comment.startswith("metric="):
                metric_name = comment.split("=", 1)[1].strip()
            header_line = fh.readline().strip()
        else:
            header_line = first
        if [c.strip() for c in header_line.split(",")] != ["doc_id", "system_id", "score"]:
            raise BenchmarkError(
                f"{path.name}: expected header 'doc_id,system_id,score', got {header_line!r}"
            )
        for rowno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if len(row) != 3:
                raise BenchmarkError(f"{path.name}: row {rowno}: expected 3 cells, got {len(row)}")
            doc_id, system_id, cell = row
            try:
                value = float(cell)
            except ValueError as exc:
                raise BenchmarkError(
                    f"{path.name}: row {rowno}: non-numeric score {cell!r}"
                ) from exc
            if not math.isfinite(value):
                raise BenchmarkError(f"{path.name}: row {rowno}: non-finite score {cell!r}")
            scores[(doc_id, system_id)] = value
    return MetricRun(metric_name=metric_name, component="scalar", scores=scores)


def coverage_warnings(dataset: Dataset, run: MetricRun) -> list[str]:
    """Dataset pairs that an (external) run does not cover."""
    return [
        f"missing score for (doc_id={rec.doc_id!r}, system_id={rec.system_id!r})"
        for rec in dataset.summaries
        if rec.key not in run.scores
    ]


def _cell(value: float | None) -> str:
    return "NA" if value is None else f"{value:.3f}"


def render_report(report: CorrelationReport, format: str = "csv") -> str:
    """Render with a stable column order and 3-decimal values."""
    columns = ("metric", "component", "aspect", "spearman", "pearson", "n_units")
    if format == "csv":
        lines = [",".join(columns)]
        for row in report.rows:
            lines.append(
                ",".join(
                    [
                        row.metric_name,
                        row.component,
                        row.aspect,
                        _cell(row.spearman),
                        _cell(row.pearson),
                        str(row.n_units),
                    ]
                )
            )
        return "\n".join(lines) + "\n"
    if format == "markdown":
        lines = [
            f"# {report.dataset_name} (summary-level, {report.pooling})",
            "",
            "| " + " | ".join(columns) + " |",
            "|" + "|".join(["---"] * len(columns)) + "|",
        ]
        for row in report.rows:
            lines.append(
                "| "
                + " | ".join(
                    [
                        row.metric_name,
                        row.component,
                        row.aspect,
                        _cell(row.spearman),
                        _cell(row.pearson),
                        str(row.n_units),
                    ]
                )
                + " |"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")
