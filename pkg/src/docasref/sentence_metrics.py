"""Sentence-level scoring: similarity matrices, voting weights, lead filtering.

Sentence pairs are compared either by embedding cosine or by NLI
probabilities (1-N, E-C, or E). Document sentences earn importance
weights from their mutual similarities; they then vote on summary
sentences, and both weight vectors (normalized) replace IDF in the
max-pooled precision/recall. The NLI direction is fixed: the document
sentence is the premise, the summary sentence the hypothesis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .data import Document, ScoreTriple
from .embeddings import ModelConfig, NliDistribution
from .text import split_sentences

SIM_KINDS = ("cosine", "nli_1mN", "nli_EmC", "nli_E")
WEIGHTINGS = ("none", "sum", "entropy")


@dataclass(frozen=True, slots=True)
class SentenceSimConfig:
    sim_kind: str = "cosine"
    weighting: str = "none"
    model: ModelConfig | None = None

    def __post_init__(self) -> None:
        if self.sim_kind not in SIM_KINDS:
            raise ValueError(f"unknown sim_kind {self.sim_kind!r}")
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"unknown weighting {self.weighting!r}")


def _nli_value(probs: NliDistribution, kind: str) -> float:
    if kind == "nli_1mN":
        return 1.0 - probs.neutral
    if kind == "nli_EmC":
        return probs.entail - probs.contradict
    return probs.entail


def sent_sim_matrix(
    left: list[str], right: list[str], cfg: SentenceSimConfig, backend
) -> np.ndarray:
    """Similarity of every left sentence (premise side) to every right one."""
    if not left or not right:
        raise ValueError("sentence lists must be non-empty")
    if cfg.sim_kind == "cosine":
        lv = np.stack([backend.embed_sentence(s) for s in left])
        rv = np.stack([backend.embed_sentence(s) for s in right])
        return lv @ rv.T
    out = np.empty((len(left), len(right)))
    for i, premise in enumerate(left):
        for j, hypothesis in enumerate(right):
            out[i, j] = _nli_value(backend.nli_probs(premise, hypothesis), cfg.sim_kind)
    return out


def doc_sentence_weights(self_sim: np.ndarray, g: str = "sum") -> list[float]:
    """Importance of each document sentence from its off-diagonal similarities.

    ``sum``: w_i is the sum of sentence i's similarities to all others.
    ``entropy``: the off-diagonal row is shifted by +1 (similarities may
    be negative), normalized to a distribution, and scored by entropy.
    A single-sentence document gets weight [1].
    """
    k = self_sim.shape[0]
    if self_sim.ndim != 2 or self_sim.shape[1] != k:
        raise ValueError("self-similarity matrix must be square")
    if k == 1:
        return [1.0]
    if g == "sum":
        return [float(self_sim[i].sum() - self_sim[i, i]) for i in range(k)]
    if g != "entropy":
        raise ValueError(f"unknown weighting function {g!r}")
    weights = []
    for i in range(k):
        row = np.delete(self_sim[i], i) + 1.0
        total = row.sum()
        if total <= 0:
            weights.append(0.0)
            continue
        p = row / total
        p = p[p > 0]
        weights.append(float(-(p * np.log(p)).sum()))
    return weights


def summary_sentence_votes(w: list[float], cross_sim: np.ndarray) -> list[float]:
    """v_j = sum_i w_i * sim(doc_i, sum_j): weighted votes per summary sentence."""
    if len(w) != cross_sim.shape[0]:
        raise ValueError(
            f"weight count {len(w)} does not match {cross_sim.shape[0]} document sentences"
        )
    return [float(v) for v in np.asarray(w, dtype=float) @ cross_sim]


def _normalized(values: np.ndarray) -> np.ndarray:
    # Weights may sum to ~0 for adversarial similarity kinds (e.g. E-C on
    # mutually contradicting sentences); fall back to uniform pooling so the
    # score stays finite and bounded.
    total = values.sum()
    if total <= 1e-12:
        return np.full(len(values), 1.0 / len(values))
    return values / total


def sentence_bertscore(
    summary: str, document: str, cfg: SentenceSimConfig, backend
) -> ScoreTriple:
    """Max-pooled sentence-level P/R/F with optional voting weights.

    Precision pools per summary sentence over document sentences; recall
    pools per document sentence over summary sentences. With weighting
    ``sum`` or ``entropy``, recall uses the normalized document weights
    and precision the normalized summary votes in place of uniform means.
    """
    doc_sents = split_sentences(document)
    sum_sents = split_sentences(summary)
    if not doc_sents or not sum_sents:
        raise ValueError("both texts must contain at least one sentence")
    cross = sent_sim_matrix(doc_sents, sum_sents, cfg, backend)
    best_per_sum = cross.max(axis=0)  # over document sentences
    best_per_doc = cross.max(axis=1)  # over summary sentences
    if cfg.weighting == "none":
        return ScoreTriple.from_pr(float(best_per_sum.mean()), float(best_per_doc.mean()))
    self_sim = sent_sim_matrix(doc_sents, doc_sents, cfg, backend)
    w = np.asarray(doc_sentence_weights(self_sim, cfg.weighting), dtype=float)
    v = np.asarray(summary_sentence_votes(list(w), cross), dtype=float)
    precision = float(best_per_sum @ _normalized(v))
    recall = float(best_per_doc @ _normalized(w))
    return ScoreTriple.from_pr(precision, recall)


def leadword_filter(document: Document, k: float) -> Document:
    """Keep the leading ceil(k * sentence_count) sentences of a document.

    ``k`` is a ratio in (0, 1]; k = 1.0 keeps every sentence.
    """
    if not 0.0 < k <= 1.0:
        raise ValueError(f"leadword ratio must be in (0, 1], got {k}")
    sentences = split_sentences(document.text)
    if not sentences:
        raise ValueError(f"document {document.id!r} has no sentences")
    keep = math.ceil(k * len(sentences))
    return Document(id=document.id, text=" ".join(sentences[:keep]), doc_group=document.doc_group)


def multi_doc_score(
    docs: list[Document],
    summary: str,
    metric: Callable[[str, str], ScoreTriple | float],
    component: str = "scalar",
) -> float:
    """Sum of per-document metric values for one summary over a topic's docs."""
    if not docs:
        raise ValueError("multi_doc_score needs at least one document")
    total = 0.0
    for doc in docs:
        try:
            value = metric(summary, doc.text)
        except Exception as exc:
            raise RuntimeError(f"metric failed on document {doc.id!r}: {exc}") from exc
        if component == "scalar":
            if isinstance(value, ScoreTriple):
                raise ValueError("component 'scalar' given a ScoreTriple metric")
            total += float(value)
        else:
            if not isinstance(value, ScoreTriple):
                raise ValueError(f"component {component!r} needs a ScoreTriple metric")
            total += value.component(component)
    return total
