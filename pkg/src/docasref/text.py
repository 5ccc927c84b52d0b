"""Deterministic, dependency-free sentence segmentation and word tokenization.

Both functions are pure: equal inputs give equal outputs across runs and
platforms. They deliberately avoid trained models so that every downstream
score is reproducible from text alone.
"""

from __future__ import annotations

import re

# A sentence may end with ./!/? (optionally followed by closing quotes or
# brackets) when the next non-space character opens a new sentence.
_BOUNDARY = re.compile(
    r"""
    [.!?]+            # terminal punctuation run
    ["'”’)\]]*   # optional trailing close-quote / bracket
    \s+               # inter-sentence whitespace
    (?=["'“‘(\[]*[A-Z0-9])   # next sentence opens with upper/quote/digit
    """,
    re.VERBOSE,
)

# Abbreviations that end in a period but do not end a sentence.
_ABBREVIATIONS = frozenset(
    ["Dr.", "Mr.", "Mrs.", "Ms.", "St.", "No.", "U.S.", "e.g.", "i.e.", "etc."]
)

_WORD = re.compile(r"[^\W_]+", re.UNICODE)


def split_sentences(text: str) -> list[str]:
    """Split text into sentences with a fixed rule set.

    A boundary is a run of ``.``/``!``/``?`` (plus any closing quotes)
    followed by whitespace and an uppercase letter, digit, or opening
    quote. Periods belonging to a small abbreviation stop-list never
    split. The returned sentences, re-joined with single spaces, contain
    exactly the non-whitespace content of the trimmed input.
    """
    text = text.strip()
    if not text:
        return []
    sentences = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        candidate = text[start : m.end()].rstrip()
        # Last whitespace-delimited chunk before the boundary, e.g. "Dr."
        last_word = candidate.rsplit(None, 1)[-1]
        if last_word in _ABBREVIATIONS:
            continue
        sentences.append(candidate)
        start = m.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def word_tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric-run tokens; punctuation and underscores split.

    No stemming, no stopword removal. "state-of-the-art" becomes
    ["state", "of", "the", "art"].
    """
    return _WORD.findall(text.lower())
