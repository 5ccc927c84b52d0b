"""Embedding-backend types, IDF weighting, and the hermetic fixture store.

The fixture store replays committed token embeddings and NLI probabilities
keyed by exact input text, so every embedding-based metric can be tested
without model inference. Token strings in fixtures use the byte-level
representation, which decodes losslessly back to the source text.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bpe import decode_tokens

CANONICAL_NLI_ORDER = ("entail", "neutral", "contradict")


class BackendError(RuntimeError):
    """Raised when an embedding or NLI backend cannot serve a request."""


class FixtureError(ValueError):
    """Raised when a fixture file violates its schema."""


@dataclass(frozen=True, slots=True)
class EmbeddingSequence:
    """Subword tokens with one unit-norm contextual vector per token."""

    tokens: list[str]
    vectors: np.ndarray  # (n_tokens, dim), rows L2-normalized
    idf: np.ndarray | None = None
    model_id: str = ""
    layer: int = 0

    def __post_init__(self) -> None:
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.tokens):
            raise FixtureError(
                f"vector matrix shape {self.vectors.shape} does not match "
                f"{len(self.tokens)} tokens"
            )
        if not np.isfinite(self.vectors).all():
            raise FixtureError("non-finite embedding values")
        if self.idf is not None and len(self.idf) != len(self.tokens):
            raise FixtureError("idf length does not match token count")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def with_idf(self, idf: np.ndarray) -> "EmbeddingSequence":
        return EmbeddingSequence(self.tokens, self.vectors, np.asarray(idf, dtype=float),
                                 self.model_id, self.layer)

    def text(self) -> str:
        """Original text recovered from the byte-level token strings."""
        return decode_tokens(self.tokens)


@dataclass(frozen=True, slots=True)
class NliDistribution:
    """Probabilities of entail / neutral / contradict for a sentence pair."""

    entail: float
    neutral: float
    contradict: float

    def __post_init__(self) -> None:
        total = self.entail + self.neutral + self.contradict
        if abs(total - 1.0) > 1e-5:
            raise BackendError(f"NLI probabilities sum to {total}, not 1")
        for v in (self.entail, self.neutral, self.contradict):
            if not 0.0 <= v <= 1.0:
                raise BackendError(f"NLI probability {v} outside [0, 1]")


@dataclass(frozen=True, slots=True)
class ModelConfig:
    """Paths and knobs identifying one ONNX encoder or NLI classifier."""

    model_id: str
    encoder_path: str
    tokenizer_path: str
    layer: int
    max_length: int = 512
    nli_label_order: tuple[str, str, str] = CANONICAL_NLI_ORDER
    long_input_mode: str = "truncate"  # or "window"

    def __post_init__(self) -> None:
        if self.max_length < 8:
            raise ValueError("max_length must be >= 8")
        if self.long_input_mode not in ("truncate", "window"):
            raise ValueError(f"unknown long_input_mode {self.long_input_mode!r}")
        if sorted(self.nli_label_order) != sorted(CANONICAL_NLI_ORDER):
            raise ValueError(
                f"nli_label_order must be a permutation of {CANONICAL_NLI_ORDER}"
            )

    @classmethod
    def from_manifest(cls, path: str | Path, role: str = "encoder") -> "ModelConfig":
        """Build a config from a model directory's ``manifest.json``.

        ``role`` selects the encoder or the NLI classifier graph from the
        same directory.
        """
        path = Path(path)
        if path.is_dir():
            path = path / "manifest.json"
        with path.open(encoding="utf-8") as fh:
            manifest = json.load(fh)
        base = path.parent
        if role == "encoder":
            graph = manifest["encoder_file"]
            layer = int(manifest["default_layer"])
        elif role == "nli":
            graph = manifest["nli_file"]
            layer = 0
        else:
            raise ValueError(f"unknown model role {role!r}")
        return cls(
            model_id=manifest["model_id"],
            encoder_path=str(base / graph),
            tokenizer_path=str(base),
            layer=layer,
            max_length=int(manifest.get("max_length", 512)),
            nli_label_order=tuple(manifest.get("nli_label_order", CANONICAL_NLI_ORDER)),
            long_input_mode=manifest.get("long_input_mode", "truncate"),
        )


# --------------------------------------------------------------------------
# IDF weighting
# --------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class IdfTable:
    """Smoothed inverse document frequencies over subword tokens."""

    doc_count: int
    weights: dict[str, float]
    default_weight: float

    def weight(self, token: str) -> float:
        return self.weights.get(token, self.default_weight)

    def weights_for(self, tokens: list[str]) -> np.ndarray:
        return np.array([self.weight(t) for t in tokens], dtype=float)


def compute_idf(tokenized_docs: list[list[str]]) -> IdfTable:
    """weights[t] = log((M+1)/(df(t)+1)); unseen tokens get log(M+1)."""
    if not tokenized_docs:
        raise ValueError("compute_idf needs at least one document")
    m = len(tokenized_docs)
    df: dict[str, int] = {}
    for doc in tokenized_docs:
        for token in set(doc):
            df[token] = df.get(token, 0) + 1
    weights = {t: math.log((m + 1) / (count + 1)) for t, count in df.items()}
    return IdfTable(doc_count=m, weights=weights, default_weight=math.log(m + 1))


# --------------------------------------------------------------------------
# Fixture store
# --------------------------------------------------------------------------


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    if (norms == 0).any():
        raise BackendError("cannot normalize a zero embedding row")
    return matrix / norms


def load_fixture(path: str | Path) -> dict[str, EmbeddingSequence]:
    """Load an embedding fixture file into id-keyed sequences."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    model_id = data["model_id"]
    layer = int(data["layer"])
    dim = int(data["dim"])
    out: dict[str, EmbeddingSequence] = {}
    for item in data["items"]:
        item_id = item.get("id", "<missing id>")
        vectors = item["vectors"]
        if any(len(row) != dim for row in vectors):
            raise FixtureError(f"fixture item {item_id!r}: vector length != dim {dim}")
        try:
            idf = item.get("idf")
            seq = EmbeddingSequence(
                tokens=list(item["tokens"]),
                vectors=np.array(vectors, dtype=float),
                idf=None if idf is None else np.array(idf, dtype=float),
                model_id=model_id,
                layer=layer,
            )
        except (FixtureError, KeyError) as exc:
            raise FixtureError(f"fixture item {item_id!r}: {exc}") from exc
        out[item_id] = seq
    return out


def save_fixture(path: str | Path, sequences: dict[str, EmbeddingSequence],
                 model_id: str, layer: int, dim: int) -> None:
    """Write the fixture schema; floats keep their shortest round-trip form."""
    items = []
    for item_id, seq in sequences.items():
        items.append(
            {
                "id": item_id,
                "tokens": seq.tokens,
                "vectors": [[float(v) for v in row] for row in seq.vectors],
                "idf": None if seq.idf is None else [float(v) for v in seq.idf],
            }
        )
    payload = {"model_id": model_id, "layer": layer, "dim": dim, "items": items}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_nli_fixture(path: str | Path) -> dict[tuple[str, str], NliDistribution]:
    """Load committed NLI probabilities keyed by (premise, hypothesis)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    table: dict[tuple[str, str], NliDistribution] = {}
    for item in data["items"]:
        table[(item["premise"], item["hypothesis"])] = NliDistribution(
            entail=item["entail"], neutral=item["neutral"], contradict=item["contradict"]
        )
    return table


class FixtureBackend:
    """Replays committed embeddings and NLI outputs keyed by exact text.

    Immutable after construction; safe to share across worker threads.
    """

    def __init__(self, embedding_path: str | Path, nli_path: str | Path | None = None):
        self.items = load_fixture(embedding_path)
        self._by_text: dict[str, EmbeddingSequence] = {}
        for seq in self.items.values():
            self._by_text[seq.text()] = seq
        self._nli = load_nli_fixture(nli_path) if nli_path else {}
        first = next(iter(self.items.values()), None)
        self.model_id = first.model_id if first else ""

    def embed_tokens(self, text: str) -> EmbeddingSequence:
        seq = self._by_text.get(text)
        if seq is None:
            raise BackendError(f"no fixture embedding for text {text!r}")
        return seq

    def tokenize(self, text: str) -> list[str]:
        return self.embed_tokens(text).tokens

    def embed_sentence(self, text: str) -> np.ndarray:
        vectors = self.embed_tokens(text).vectors
        mean = vectors.mean(axis=0)
        return normalize_rows(mean[None, :])[0]

    def nli_probs(self, premise: str, hypothesis: str) -> NliDistribution:
        probs = self._nli.get((premise, hypothesis))
        if probs is None:
            raise BackendError(
                f"no fixture NLI entry for premise {premise!r} / hypothesis {hypothesis!r}"
            )
        return probs
