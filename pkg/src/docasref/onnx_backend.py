"""ONNX-runtime embedding and NLI backend.

An :class:`OnnxBackend` owns one tokenizer and one inference session per
graph. Sessions are single-consumer: run one request at a time per
backend; create independent backends for parallel workers. Inference is
deterministic for fixed inputs on a fixed CPU execution provider.

Set ``DOCASREF_CACHE_DIR`` to cache token embeddings on disk keyed by
model digest, layer, input mode, and text.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

import numpy as np

from .bpe import BpeTokenizer
from .embeddings import (
    CANONICAL_NLI_ORDER,
    BackendError,
    EmbeddingSequence,
    ModelConfig,
    NliDistribution,
    normalize_rows,
)

_PROVIDERS = ["CPUExecutionProvider"]


def _file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


class OnnxBackend:
    """Encoder (and optional NLI classifier) served from ONNX graphs.

    The encoder graph must expose all hidden layers stacked as its first
    output with shape (layers+1, batch, seq, hidden); the NLI graph takes
    (input_ids, attention_mask, token_type_ids) and emits 3 logits.
    """

    def __init__(self, cfg: ModelConfig, nli_cfg: ModelConfig | None = None):
        import onnxruntime as ort

        self.cfg = cfg
        try:
            self.tokenizer = BpeTokenizer.from_dir(cfg.tokenizer_path)
        except (OSError, KeyError, ValueError) as exc:
            raise BackendError(f"cannot load tokenizer from {cfg.tokenizer_path}: {exc}") from exc
        try:
            self._session = ort.InferenceSession(cfg.encoder_path, providers=_PROVIDERS)
        except Exception as exc:  # ort raises several internal types
            raise BackendError(f"cannot load encoder {cfg.encoder_path}: {exc}") from exc
        self._nli_cfg = nli_cfg
        self._nli_session = None
        if nli_cfg is not None:
            try:
                self._nli_session = ort.InferenceSession(nli_cfg.encoder_path, providers=_PROVIDERS)
            except Exception as exc:
                raise BackendError(f"cannot load NLI model {nli_cfg.encoder_path}: {exc}") from exc
        self.model_id = cfg.model_id
        self._cache_dir = os.environ.get("DOCASREF_CACHE_DIR")
        self._digest = _file_digest(cfg.encoder_path)[:16] if self._cache_dir else ""

    # -- token embeddings ---------------------------------------------------

    def tokenize(self, text: str) -> list[str]:
        return self.tokenizer.tokenize(text)

    def embed_tokens(self, text: str) -> EmbeddingSequence:
        """Contextual vectors for the subword tokens of ``text``.

        Sequence start/end markers are added for encoding but excluded
        from the returned sequence; rows come from hidden layer
        ``cfg.layer`` and are L2-normalized. Inputs longer than
        ``max_length - 2`` subwords are truncated or windowed per
        ``cfg.long_input_mode`` (windows hold max_length - 2 tokens at
        stride max_length // 2; overlaps keep each token's first
        occurrence).
        """
        cached = self._cache_load(text)
        if cached is not None:
            return cached
        tokens = self.tokenizer.tokenize(text)
        if not tokens:
            raise BackendError("empty text after tokenization")
        content = self.cfg.max_length - 2
        if len(tokens) <= content:
            vectors = self._encode_window(tokens)
        elif self.cfg.long_input_mode == "truncate":
            tokens = tokens[:content]
            vectors = self._encode_window(tokens)
        else:
            vectors = self._encode_windows(tokens, content, self.cfg.max_length // 2)
        seq = EmbeddingSequence(
            tokens=tokens,
            vectors=normalize_rows(vectors),
            model_id=self.cfg.model_id,
            layer=self.cfg.layer,
        )
        self._cache_store(text, seq)
        return seq

    def _encode_window(self, tokens: list[str]) -> np.ndarray:
        ids = [self.tokenizer.bos_id] + self.tokenizer.token_ids(tokens) + [self.tokenizer.eos_id]
        input_ids = np.array([ids], dtype=np.int64)
        attention = np.ones_like(input_ids)
        try:
            (hidden,) = self._session.run(
                None, {"input_ids": input_ids, "attention_mask": attention}
            )
        except Exception as exc:  # tokenizer/encoder vocabulary mismatch, bad graph
            raise BackendError(f"encoder inference failed: {exc}") from exc
        n_layers = hidden.shape[0] - 1
        if not 0 <= self.cfg.layer <= n_layers:
            raise BackendError(
                f"layer {self.cfg.layer} outside encoder's 0..{n_layers} hidden layers"
            )
        return hidden[self.cfg.layer, 0, 1:-1, :].astype(np.float64)

    def _encode_windows(self, tokens: list[str], width: int, stride: int) -> np.ndarray:
        starts = list(range(0, len(tokens), stride))
        filled: np.ndarray | None = None
        have = np.zeros(len(tokens), dtype=bool)
        for start in starts:
            if have.all():
                break
            window = tokens[start : start + width]
            vectors = self._encode_window(window)
            if filled is None:
                filled = np.zeros((len(tokens), vectors.shape[1]))
            for offset in range(len(window)):
                idx = start + offset
                if not have[idx]:
                    filled[idx] = vectors[offset]
                    have[idx] = True
        assert filled is not None and have.all()
        return filled

    # -- sentence embeddings --------------------------------------------------

    def embed_sentence(self, text: str) -> np.ndarray:
        """Mean of the (non-special) token vectors, re-normalized."""
        vectors = self.embed_tokens(text).vectors
        return normalize_rows(vectors.mean(axis=0)[None, :])[0]

    # -- NLI -----------------------------------------------------------------

    def nli_probs(self, premise: str, hypothesis: str) -> NliDistribution:
        """Canonical (entail, neutral, contradict) softmax probabilities.

        The classifier emits logits in ``nli_label_order``; they are
        remapped here so callers never see the model's native order.
        """
        if self._nli_session is None or self._nli_cfg is None:
            raise BackendError("backend has no NLI classifier configured")
        cfg = self._nli_cfg
        budget = (cfg.max_length - 4) // 2
        p_ids = self.tokenizer.encode(premise)[:budget]
        h_ids = self.tokenizer.encode(hypothesis)[:budget]
        if not p_ids or not h_ids:
            raise BackendError("empty NLI input after tokenization")
        bos, eos = self.tokenizer.bos_id, self.tokenizer.eos_id
        ids = [bos] + p_ids + [eos, eos] + h_ids + [eos]
        types = [0] * (len(p_ids) + 3) + [1] * (len(h_ids) + 1)
        feed = {
            "input_ids": np.array([ids], dtype=np.int64),
            "attention_mask": np.ones((1, len(ids)), dtype=np.int64),
            "token_type_ids": np.array([types], dtype=np.int64),
        }
        try:
            (logits,) = self._nli_session.run(None, feed)
        except Exception as exc:
            raise BackendError(f"NLI inference failed: {exc}") from exc
        if logits.shape[-1] != 3:
            raise BackendError(f"NLI classifier emitted {logits.shape[-1]} logits, expected 3")
        logits = logits.reshape(3).astype(np.float64)
        exp = np.exp(logits - logits.max())
        probs = exp / exp.sum()
        by_label = dict(zip(cfg.nli_label_order, probs))
        return NliDistribution(*(float(by_label[k]) for k in CANONICAL_NLI_ORDER))

    # -- disk cache -----------------------------------------------------------

    def _cache_key(self, text: str) -> Path:
        cfg = self.cfg
        raw = f"{self._digest}:{cfg.layer}:{cfg.long_input_mode}:{cfg.max_length}:{text}"
        return Path(self._cache_dir) / (hashlib.sha256(raw.encode("utf-8")).hexdigest() + ".npz")

    def _cache_load(self, text: str) -> EmbeddingSequence | None:
        if not self._cache_dir:
            return None
        path = self._cache_key(text)
        if not path.exists():
            return None
        with np.load(path, allow_pickle=False) as data:
            return EmbeddingSequence(
                tokens=[str(t) for t in data["tokens"]],
                vectors=data["vectors"],
                model_id=self.cfg.model_id,
                layer=self.cfg.layer,
            )

    def _cache_store(self, text: str, seq: EmbeddingSequence) -> None:
        if not self._cache_dir:
            return
        path = self._cache_key(text)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(path, tokens=np.array(seq.tokens, dtype=np.str_), vectors=seq.vectors)


def fixture_deviations(
    backend: OnnxBackend, items: dict[str, EmbeddingSequence]
) -> dict[str, float]:
    """Max per-element deviation between re-embedded and stored vectors.

    Re-embeds each fixture item's decoded text; a token mismatch counts
    as an infinite deviation.
    """
    out: dict[str, float] = {}
    for item_id, stored in items.items():
        fresh = backend.embed_tokens(stored.text())
        if fresh.tokens != stored.tokens:
            out[item_id] = float("inf")
            continue
        out[item_id] = float(np.abs(fresh.vectors - stored.vectors).max())
    return out
