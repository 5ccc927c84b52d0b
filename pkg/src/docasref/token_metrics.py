"""Token-level soft-alignment metrics on contextual embeddings.

Greedy matching scores a candidate against a reference-slot sequence by
max-pooling cosine similarities; applied reference-freely the source
document takes the reference slot, so recall pools over document tokens.
The greedy mover similarity averages each document token's best match and
coincides exactly with unweighted greedy recall.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import ScoreTriple
from .embeddings import EmbeddingSequence, IdfTable, ModelConfig


@dataclass(frozen=True, slots=True)
class GreedyMatchConfig:
    use_idf: bool = False
    model: ModelConfig | None = None


def greedy_match_scores(
    cand: EmbeddingSequence, ref: EmbeddingSequence, use_idf: bool = False
) -> ScoreTriple:
    """Greedy max-pooled similarity with optional IDF-weighted pooling.

    With unit-norm rows, sim(i, j) is the dot product. Precision averages
    each candidate token's best match over reference tokens; recall,
    each reference token's best match over candidate tokens. Weights are
    the sequences' IDF values (uniform when ``use_idf`` is false).
    """
    if len(cand) == 0 or len(ref) == 0:
        raise ValueError("greedy matching needs non-empty sequences")
    if cand.dim != ref.dim:
        raise ValueError(f"embedding dimension mismatch: {cand.dim} vs {ref.dim}")
    if use_idf and (cand.idf is None or ref.idf is None):
        raise ValueError("use_idf requires idf weights on both sequences")
    sim = cand.vectors @ ref.vectors.T
    best_for_cand = sim.max(axis=1)
    best_for_ref = sim.max(axis=0)
    if use_idf:
        w = np.asarray(cand.idf, dtype=float)
        u = np.asarray(ref.idf, dtype=float)
        w_total = w.sum()
        u_total = u.sum()
        if w_total <= 0 or u_total <= 0:
            raise ValueError("idf weights sum to zero; provide a larger idf corpus")
        precision = float((best_for_cand * w).sum() / w_total)
        recall = float((best_for_ref * u).sum() / u_total)
    else:
        precision = float(best_for_cand.mean())
        recall = float(best_for_ref.mean())
    return ScoreTriple.from_pr(precision, recall)


def bertscore_reffree(
    summary: str,
    document: str,
    cfg: GreedyMatchConfig,
    backend,
    idf_table: IdfTable | None = None,
) -> ScoreTriple:
    """Greedy-matching P/R/F of a summary against its source document.

    The document occupies the reference slot. With ``cfg.use_idf`` an
    :class:`IdfTable` (normally computed over the scored corpus's
    documents) must be supplied; its weights attach to both sequences.
    """
    cand = backend.embed_tokens(summary)
    ref = backend.embed_tokens(document)
    if cfg.use_idf:
        if idf_table is None:
            raise ValueError("use_idf requires an IdfTable computed over the scoring corpus")
        cand = cand.with_idf(idf_table.weights_for(cand.tokens))
        ref = ref.with_idf(idf_table.weights_for(ref.tokens))
    return greedy_match_scores(cand, ref, use_idf=cfg.use_idf)


def moverscore_greedy(summary: str, document: str, cfg: GreedyMatchConfig, backend) -> float:
    """Mean over document tokens of their best summary-token similarity.

    Algebraically identical to unweighted greedy recall with the document
    in the reference slot.
    """
    cand = backend.embed_tokens(summary)
    ref = backend.embed_tokens(document)
    return greedy_match_scores(cand, ref, use_idf=False).recall
