#!/usr/bin/env python3
"""Score a summary directly against its source document.

The core move: metrics built to compare a summary with a human reference
work just as well when the source document is placed in the reference
slot. No reference summary is needed anywhere below.
"""

from pathlib import Path

from docasref import (
    FixtureBackend,
    GreedyMatchConfig,
    bertscore_reffree,
    moverscore_greedy,
    rouge_reffree,
)

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

document = (
    "A coastal storm flooded several streets on Friday. "
    "Residents moved to higher ground before nightfall. "
    "Cleanup crews began work the next morning."
)
summary = "A storm flooded streets on Friday. Residents moved to higher ground."

# Lexical overlap: ROUGE with the document as the reference. Recall now
# answers "how much of the document does the summary cover?"
for variant in ("r1", "r2", "rl"):
    triple = rouge_reffree(summary, document, variant)
    print(f"rouge_{variant}:  P={triple.precision:.3f}  R={triple.recall:.3f}  F={triple.f1:.3f}")

# Soft alignment on contextual embeddings. The committed fixture store
# replays the mini encoder's vectors, so this runs without any model.
backend = FixtureBackend(FIXTURES / "embeddings.json")
triple = bertscore_reffree(summary, document, GreedyMatchConfig(use_idf=False), backend)
print(f"greedy-match: P={triple.precision:.3f}  R={triple.recall:.3f}  F={triple.f1:.3f}")

# The greedy mover similarity averages each document token's best match;
# it equals unweighted greedy recall by construction.
mover = moverscore_greedy(summary, document, GreedyMatchConfig(), backend)
print(f"greedy-mover: {mover:.3f}  (= recall above: {triple.recall:.3f})")
