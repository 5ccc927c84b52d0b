"""Reference-free summary quality scoring.

Comparison algorithms built for (summary, reference) pairs are applied
directly to (summary, source document): greedy embedding matching with
P/R/F pooling, ROUGE-1/2/L overlap, a greedy mover similarity, and
sentence-level variants with NLI or cosine similarity. A benchmark
harness correlates metric outputs with human ratings at the summary
level.
"""

from .data import Dataset, DatasetError, Document, ScoreTriple, SummaryRecord, load_dataset, save_dataset
from .embeddings import (
    BackendError,
    EmbeddingSequence,
    FixtureBackend,
    FixtureError,
    IdfTable,
    ModelConfig,
    NliDistribution,
    compute_idf,
    load_fixture,
    load_nli_fixture,
    save_fixture,
)
from .harness import (
    BenchmarkError,
    CorrelationReport,
    MetricRun,
    MetricSetting,
    ReportRow,
    coverage_warnings,
    ingest_external_scores,
    render_report,
    run_benchmark,
    score_dataset,
    score_pair,
    summary_level_correlation,
)
from .lexical_metrics import lcs_length, ngram_counts, rouge_l, rouge_n, rouge_reffree
from .sentence_metrics import (
    SentenceSimConfig,
    doc_sentence_weights,
    leadword_filter,
    multi_doc_score,
    sent_sim_matrix,
    sentence_bertscore,
    summary_sentence_votes,
)
from .stats import pearson, spearman
from .text import split_sentences, word_tokenize
from .token_metrics import GreedyMatchConfig, bertscore_reffree, greedy_match_scores, moverscore_greedy

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "BenchmarkError",
    "CorrelationReport",
    "Dataset",
    "DatasetError",
    "Document",
    "EmbeddingSequence",
    "FixtureBackend",
    "FixtureError",
    "GreedyMatchConfig",
    "IdfTable",
    "MetricRun",
    "MetricSetting",
    "ModelConfig",
    "NliDistribution",
    "ReportRow",
    "ScoreTriple",
    "SentenceSimConfig",
    "SummaryRecord",
    "bertscore_reffree",
    "compute_idf",
    "coverage_warnings",
    "doc_sentence_weights",
    "greedy_match_scores",
    "ingest_external_scores",
    "lcs_length",
    "leadword_filter",
    "load_dataset",
    "load_fixture",
    "load_nli_fixture",
    "moverscore_greedy",
    "multi_doc_score",
    "ngram_counts",
    "pearson",
    "render_report",
    "rouge_l",
    "rouge_n",
    "rouge_reffree",
    "run_benchmark",
    "save_dataset",
    "save_fixture",
    "score_dataset",
    "score_pair",
    "sent_sim_matrix",
    "sentence_bertscore",
    "spearman",
    "split_sentences",
    "summary_level_correlation",
    "summary_sentence_votes",
    "word_tokenize",
]
