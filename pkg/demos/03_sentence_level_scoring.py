#!/usr/bin/env python3
"""Sentence-level scoring: cosine or NLI similarity plus voting weights.

Instead of aligning tokens, align whole sentences. Similarity is either
the cosine of sentence embeddings or a function of NLI probabilities
(1-N, E-C, or E, with the document sentence as premise). Document
sentences earn importance weights from their mutual similarities and
vote on summary sentences; the normalized weights replace IDF.
"""

from pathlib import Path

import numpy as np

from docasref import (
    FixtureBackend,
    SentenceSimConfig,
    doc_sentence_weights,
    sent_sim_matrix,
    sentence_bertscore,
    split_sentences,
    summary_sentence_votes,
)

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
backend = FixtureBackend(FIXTURES / "embeddings.json", nli_path=FIXTURES / "nli_pairs.json")

document = (
    "A coastal storm flooded several streets on Friday. "
    "Residents moved to higher ground before nightfall. "
    "Cleanup crews began work the next morning."
)
summary = "A storm flooded streets on Friday. Residents moved to higher ground."

doc_sents = split_sentences(document)
sum_sents = split_sentences(summary)
print("document sentences:", len(doc_sents), "| summary sentences:", len(sum_sents))

# Cross-similarity matrix, document rows x summary columns.
cosine = sent_sim_matrix(doc_sents, sum_sents, SentenceSimConfig("cosine"), backend)
print("\ncosine cross-similarity:\n", np.round(cosine, 3))

# NLI entail-minus-contradict similarity for the same sentence pairs.
emc = sent_sim_matrix(doc_sents, sum_sents, SentenceSimConfig("nli_EmC"), backend)
print("\nE-C cross-similarity:\n", np.round(emc, 3))

# Document sentences that relate to many others weigh more; they vote
# on the summary sentences.
self_sim = sent_sim_matrix(doc_sents, doc_sents, SentenceSimConfig("cosine"), backend)
w = doc_sentence_weights(self_sim, "sum")
v = summary_sentence_votes(w, cosine)
print("\ndocument sentence weights:", np.round(w, 3))
print("summary sentence votes:   ", np.round(v, 3))

for weighting in ("none", "sum", "entropy"):
    triple = sentence_bertscore(summary, document, SentenceSimConfig("cosine", weighting), backend)
    print(f"cosine/{weighting:7s}: P={triple.precision:.3f} R={triple.recall:.3f} F={triple.f1:.3f}")
