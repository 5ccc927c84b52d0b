"""Lexical overlap metrics: ROUGE-1/2 n-gram clipping and ROUGE-L LCS.

Applied reference-freely: the source document sits in the reference slot,
so recall pools over document n-grams. Tokenization is the deterministic
lowercase alphanumeric-run tokenizer; no stemming, no stopword removal.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence

from .data import ScoreTriple
from .text import word_tokenize

VARIANTS = ("r1", "r2", "rl")


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    """Multiset of n-grams (token tuples) in ``tokens``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(cand_tokens: Sequence[str], ref_tokens: Sequence[str], n: int) -> ScoreTriple:
    """Clipped n-gram overlap precision/recall/F1.

    Overlap counts each n-gram at most min(candidate count, reference
    count) times. If either side has no n-grams, all components are 0.
    """
    cand = ngram_counts(cand_tokens, n)
    ref = ngram_counts(ref_tokens, n)
    total_cand = sum(cand.values())
    total_ref = sum(ref.values())
    if total_cand == 0 or total_ref == 0:
        return ScoreTriple(0.0, 0.0, 0.0)
    overlap = sum(min(count, ref[g]) for g, count in cand.items())
    return ScoreTriple.from_pr(overlap / total_cand, overlap / total_ref)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Longest common subsequence length via a rolling-row DP."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b):
            curr.append(prev[j] + 1 if x == y else max(prev[j + 1], curr[j]))
        prev = curr
    return prev[-1]


def rouge_l(cand_tokens: Sequence[str], ref_tokens: Sequence[str]) -> ScoreTriple:
    """LCS-based precision/recall/F1 (plain LCS, no sentence-union variant)."""
    if not cand_tokens or not ref_tokens:
        return ScoreTriple(0.0, 0.0, 0.0)
    length = lcs_length(cand_tokens, ref_tokens)
    return ScoreTriple.from_pr(length / len(cand_tokens), length / len(ref_tokens))


def rouge_reffree(summary: str, document: str, variant: str) -> ScoreTriple:
    """Tokenize both texts and score with the document as the reference."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown ROUGE variant {variant!r} (expected one of {VARIANTS})")
    cand = word_tokenize(summary)
    ref = word_tokenize(document)
    if variant == "r1":
        return rouge_n(cand, ref, 1)
    if variant == "r2":
        return rouge_n(cand, ref, 2)
    return rouge_l(cand, ref)
