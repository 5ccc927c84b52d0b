#!/usr/bin/env python3
"""Benchmark a metric suite against human ratings.

Every summary in the dataset is scored under each metric; per-aspect
Spearman/Pearson correlations are computed at the summary level
(correlate across each document's summaries, average over documents).
"""

from pathlib import Path

from docasref import FixtureBackend, MetricSetting, load_dataset, render_report, run_benchmark

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

dataset = load_dataset(FIXTURES / "dataset.jsonl")
print(f"dataset: {dataset.name}: {len(dataset.documents)} documents, "
      f"{len(dataset.summaries)} summaries, aspects {dataset.aspects}")

backend = FixtureBackend(FIXTURES / "embeddings.json", nli_path=FIXTURES / "nli_pairs.json")

suite = [
    MetricSetting(name="rouge", variant="r1", component="r"),
    MetricSetting(name="bertscore", component="f"),
    MetricSetting(name="bertscore", component="f", use_idf=True),  # IDF ablation arm
    MetricSetting(name="moverscore"),
    MetricSetting(name="sentence_bertscore", component="f", sim_kind="cosine", weighting="sum"),
    # scores computed by any external tool join the same protocol
    MetricSetting(name="external", path=str(FIXTURES / "external_scores.csv")),
]

report = run_benchmark(dataset, suite, pooling="per_doc_mean", backend=backend)
print()
print(render_report(report, "markdown"))
