"""Byte-level BPE subword tokenizer (GPT-2/RoBERTa vocabulary format).

Loads the standard ``vocab.json`` + ``merges.txt`` pair and reproduces the
byte-level encoding used by RoBERTa-family encoders: text is pre-split
with the GPT-2 pattern, each chunk's UTF-8 bytes are mapped to printable
stand-in characters, and merges are applied by learned rank. Encoding is
lossless, so ``decode(encode(text)) == text``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

import regex

_PRETOKENIZE = regex.compile(
    r"""'s|'t|'re|'ve|'m|'ll|'d| ?\p{L}+| ?\p{N}+| ?[^\s\p{L}\p{N}]+|\s+(?!\S)|\s+"""
)

_NO_MERGE = 1 << 60


def _byte_to_unicode() -> dict[int, str]:
    # GPT-2's fixed mapping of all 256 byte values onto printable characters.
    bs = (
        list(range(ord("!"), ord("~") + 1))
        + list(range(ord("\xa1"), ord("\xac") + 1))
        + list(range(ord("\xae"), ord("\xff") + 1))
    )
    cs = bs[:]
    n = 0
    for b in range(256):
        if b not in bs:
            bs.append(b)
            cs.append(256 + n)
            n += 1
    return dict(zip(bs, (chr(c) for c in cs)))


_BYTE_ENCODER = _byte_to_unicode()
_BYTE_DECODER = {c: b for b, c in _BYTE_ENCODER.items()}


def decode_tokens(tokens: list[str]) -> str:
    """Invert the byte-level representation back to the original text.

    Needs no vocabulary: token strings are themselves byte sequences in
    the fixed stand-in alphabet.
    """
    data = bytes(_BYTE_DECODER[ch] for tok in tokens for ch in tok)
    return data.decode("utf-8")


class BpeTokenizer:
    """Encoder over a committed vocabulary/merges pair."""

    def __init__(self, vocab: dict[str, int], merges: list[tuple[str, str]],
                 unk_token: str = "<unk>", bos_token: str = "<s>", eos_token: str = "</s>"):
        self.vocab = vocab
        self.ids_to_tokens = {i: t for t, i in vocab.items()}
        self.ranks = {pair: rank for rank, pair in enumerate(merges)}
        self.unk_id = vocab[unk_token]
        self.bos_id = vocab[bos_token]
        self.eos_id = vocab[eos_token]
        self._bpe_chunk = lru_cache(maxsize=8192)(self._bpe_chunk_uncached)

    @classmethod
    def from_files(cls, vocab_path: str | Path, merges_path: str | Path) -> "BpeTokenizer":
        with open(vocab_path, encoding="utf-8") as fh:
            vocab = json.load(fh)
        merges = []
        with open(merges_path, encoding="utf-8") as fh:
            for line in fh.read().splitlines():
                if not line or line.startswith("#version"):
                    continue
                left, right = line.split(" ")
                merges.append((left, right))
        return cls(vocab, merges)

    @classmethod
    def from_dir(cls, path: str | Path) -> "BpeTokenizer":
        path = Path(path)
        return cls.from_files(path / "vocab.json", path / "merges.txt")

    def _bpe_chunk_uncached(self, chunk: str) -> tuple[str, ...]:
        pieces = list(chunk)
        while len(pieces) > 1:
            rank, idx = min(
                (self.ranks.get((pieces[i], pieces[i + 1]), _NO_MERGE), i)
                for i in range(len(pieces) - 1)
            )
            if rank == _NO_MERGE:
                break
            left, right = pieces[idx], pieces[idx + 1]
            merged, i = [], 0
            while i < len(pieces):
                if i < len(pieces) - 1 and pieces[i] == left and pieces[i + 1] == right:
                    merged.append(left + right)
                    i += 2
                else:
                    merged.append(pieces[i])
                    i += 1
            pieces = merged
        return tuple(pieces)

    def tokenize(self, text: str) -> list[str]:
        """Subword token strings, without any special tokens."""
        out: list[str] = []
        for chunk in _PRETOKENIZE.findall(text):
            mapped = "".join(_BYTE_ENCODER[b] for b in chunk.encode("utf-8"))
            out.extend(self._bpe_chunk(mapped))
        return out

    def token_ids(self, tokens: list[str]) -> list[int]:
        return [self.vocab.get(t, self.unk_id) for t in tokens]

    def encode(self, text: str) -> list[int]:
        """Token ids without special tokens."""
        return self.token_ids(self.tokenize(text))
