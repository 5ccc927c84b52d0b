#!/usr/bin/env python3
"""Lead filtering and multi-document aggregation.

Leadword keeps only the first fraction k of a document's sentences
before scoring (important content tends to cluster early in news text).
Multi-document topics score a summary as the sum of its per-document
scores.
"""

from pathlib import Path

from docasref import (
    Document,
    leadword_filter,
    load_dataset,
    multi_doc_score,
    rouge_reffree,
    split_sentences,
)

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

document = Document(
    id="museum",
    text=(
        "The museum opened its new wing on Saturday. "
        "Visitors praised the glass atrium and the quiet reading room. "
        "Dr. Alvarez led the opening tour for donors. "
        "Ticket sales doubled compared with last spring."
    ),
)
summary = "The museum opened a new wing. Visitors praised the atrium and reading room."

for k in (1.0, 0.75, 0.5, 0.25):
    lead = leadword_filter(document, k)
    triple = rouge_reffree(summary, lead.text, "r1")
    kept = len(split_sentences(lead.text))
    print(f"k={k:4.2f}: kept {kept} sentence(s)  R1 recall={triple.recall:.3f}")

# Multi-document topics: each summary is scored against every document
# in its group and the scores are summed.
dataset = load_dataset(FIXTURES / "multidoc.jsonl")
topic_docs = dataset.group_documents(dataset.document("t1d0"))
record = next(r for r in dataset.summaries if r.key == ("t1d0", "sysA"))
total = multi_doc_score(topic_docs, record.text, lambda s, d: rouge_reffree(s, d, "r1"), "r")
print(f"\ntopic t1: {len(topic_docs)} documents; summed R1 recall = {total:.3f}")
for doc in topic_docs:
    part = rouge_reffree(record.text, doc.text, "r1").recall
    print(f"  {doc.id}: {part:.3f}")
