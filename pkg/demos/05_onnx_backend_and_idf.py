#!/usr/bin/env python3
"""Run the ONNX encoder directly and toggle IDF weighting.

The committed mini encoder (2 layers, 32 dims) exposes all hidden
layers; the backend tokenizes with the committed byte-level BPE
vocabulary, takes the configured layer, and L2-normalizes the rows.
Embeddings can be cached on disk via DOCASREF_CACHE_DIR.
"""

from pathlib import Path

from docasref import GreedyMatchConfig, ModelConfig, bertscore_reffree, compute_idf, load_dataset
from docasref.onnx_backend import OnnxBackend

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

backend = OnnxBackend(ModelConfig.from_manifest(FIXTURES / "models"))
seq = backend.embed_tokens("The library extended evening hours through the exam period.")
print(f"model {seq.model_id}, layer {seq.layer}: {len(seq.tokens)} tokens x {seq.dim} dims")
print("subwords:", seq.tokens[:8], "...")

dataset = load_dataset(FIXTURES / "dataset.jsonl")

# IDF weights come from the documents of the corpus being scored; rare
# tokens then dominate the pooled similarity.
idf_table = compute_idf([backend.tokenize(d.text) for d in dataset.documents])
common = min(idf_table.weights, key=idf_table.weights.get)
rare = max(idf_table.weights, key=idf_table.weights.get)
print(f"\nidf over {idf_table.doc_count} documents: "
      f"most common {common!r} -> {idf_table.weight(common):.3f}, "
      f"rarest {rare!r} -> {idf_table.weight(rare):.3f}")

doc = dataset.documents[1]
summary = next(r for r in dataset.summaries if r.key == (doc.id, "sysA"))
plain = bertscore_reffree(summary.text, doc.text, GreedyMatchConfig(use_idf=False), backend)
weighted = bertscore_reffree(
    summary.text, doc.text, GreedyMatchConfig(use_idf=True), backend, idf_table=idf_table
)
print(f"\n{doc.id}/sysA  plain F={plain.f1:.4f}   idf F={weighted.f1:.4f}")
