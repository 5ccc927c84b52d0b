"""Construct and export the committed mini models.

Everything is derived deterministically from fixed seeds: a byte-level
BPE tokenizer trained on the fixture corpus, a tiny randomly-initialized
RoBERTa-style encoder, and a hand-weighted NLI pair scorer whose logits
come from the cosine of segment mean embeddings. The NLI graph emits its
logits in a deliberately non-canonical order (contradict, neutral,
entail) so downstream label remapping is exercised.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np
import torch
from tokenizers import Tokenizer, decoders, models, pre_tokenizers, processors, trainers
from transformers import PreTrainedTokenizerFast, RobertaConfig, RobertaModel

from .corpus import training_corpus

MODEL_ID = "mini-encoder-2l-32d"
SEED = 20240613
NLI_SEED = 77
VOCAB_SIZE = 384
HIDDEN = 32
LAYERS = 2
HEADS = 2
INTERMEDIATE = 64
MAX_LENGTH = 128
OPSET = 17
NLI_LABEL_ORDER = ["contradict", "neutral", "entail"]

SPECIALS = ["<s>", "<pad>", "</s>", "<unk>", "<mask>"]


def build_tokenizer(out_dir: Path) -> PreTrainedTokenizerFast:
    """Train the byte-level BPE and write vocab.json / merges.txt / tokenizer.json."""
    tok = Tokenizer(models.BPE(unk_token="<unk>"))
    tok.pre_tokenizer = pre_tokenizers.ByteLevel(add_prefix_space=False)
    tok.decoder = decoders.ByteLevel()
    trainer = trainers.BpeTrainer(
        vocab_size=VOCAB_SIZE,
        min_frequency=1,
        special_tokens=SPECIALS,
        initial_alphabet=pre_tokenizers.ByteLevel.alphabet(),
    )
    tok.train_from_iterator(training_corpus(), trainer)
    tok.post_processor = processors.RobertaProcessing(
        sep=("</s>", tok.token_to_id("</s>")), cls=("<s>", tok.token_to_id("<s>"))
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    tok.save(str(out_dir / "tokenizer.json"))
    tok.model.save(str(out_dir))  # vocab.json + merges.txt
    return PreTrainedTokenizerFast(
        tokenizer_file=str(out_dir / "tokenizer.json"),
        model_max_length=MAX_LENGTH,
        bos_token="<s>",
        eos_token="</s>",
        unk_token="<unk>",
        sep_token="</s>",
        cls_token="<s>",
        pad_token="<pad>",
        mask_token="<mask>",
    )


def load_tokenizer(model_dir: Path) -> PreTrainedTokenizerFast:
    """Load a previously built tokenizer directory."""
    return PreTrainedTokenizerFast(
        tokenizer_file=str(Path(model_dir) / "tokenizer.json"),
        model_max_length=MAX_LENGTH,
        bos_token="<s>",
        eos_token="</s>",
        unk_token="<unk>",
        sep_token="</s>",
        cls_token="<s>",
        pad_token="<pad>",
        mask_token="<mask>",
    )


def build_encoder(vocab_size: int) -> RobertaModel:
    torch.manual_seed(SEED)
    config = RobertaConfig(
        vocab_size=vocab_size,
        hidden_size=HIDDEN,
        num_hidden_layers=LAYERS,
        num_attention_heads=HEADS,
        intermediate_size=INTERMEDIATE,
        max_position_embeddings=MAX_LENGTH + 32,
        type_vocab_size=1,
        initializer_range=0.1,
        pad_token_id=1,
        bos_token_id=0,
        eos_token_id=2,
    )
    model = RobertaModel(config)
    model.eval()
    return model


class HiddenStatesWrapper(torch.nn.Module):
    """Expose all hidden layers stacked as (layers+1, batch, seq, hidden)."""

    def __init__(self, encoder: RobertaModel):
        super().__init__()
        self.encoder = encoder

    def forward(self, input_ids, attention_mask):
        out = self.encoder(
            input_ids=input_ids, attention_mask=attention_mask, output_hidden_states=True
        )
        return torch.stack(out.hidden_states, dim=0)


class NliPairScorer(torch.nn.Module):
    """Constructed sequence-pair classifier: cosine of segment means.

    Special ids (bos 0, pad 1, eos 2) are excluded from pooling inside
    the graph, so callers pass ordinary masks. Logit order follows
    NLI_LABEL_ORDER, not the canonical one.
    """

    def __init__(self, vocab_size: int, dim: int = HIDDEN):
        super().__init__()
        torch.manual_seed(NLI_SEED)
        self.emb = torch.nn.Embedding(vocab_size, dim)
        torch.nn.init.normal_(self.emb.weight, std=0.5)

    def forward(self, input_ids, attention_mask, token_type_ids):
        vectors = self.emb(input_ids)
        real = (input_ids != 0) & (input_ids != 1) & (input_ids != 2)
        keep = attention_mask.bool() & real
        m0 = (keep & (token_type_ids == 0)).unsqueeze(-1).float()
        m1 = (keep & (token_type_ids == 1)).unsqueeze(-1).float()
        premise = (vectors * m0).sum(1) / m0.sum(1).clamp(min=1.0)
        hypothesis = (vectors * m1).sum(1) / m1.sum(1).clamp(min=1.0)
        premise = premise / premise.norm(dim=-1, keepdim=True).clamp(min=1e-12)
        hypothesis = hypothesis / hypothesis.norm(dim=-1, keepdim=True).clamp(min=1e-12)
        cos = (premise * hypothesis).sum(-1, keepdim=True)
        entail = 4.0 * cos - 2.4
        contradict = -4.0 * cos + 1.6
        neutral = torch.full_like(entail, 1.2)
        return torch.cat([contradict, neutral, entail], dim=-1)


def export_encoder(model: RobertaModel, tokenizer: PreTrainedTokenizerFast,
                   path: Path) -> None:
    wrapper = HiddenStatesWrapper(model).eval()
    enc = tokenizer("A short probe sentence for export.", return_tensors="pt")
    torch.onnx.export(
        wrapper,
        (enc["input_ids"], enc["attention_mask"]),
        str(path),
        input_names=["input_ids", "attention_mask"],
        output_names=["hidden_states"],
        dynamic_axes={
            "input_ids": {0: "batch", 1: "seq"},
            "attention_mask": {0: "batch", 1: "seq"},
            "hidden_states": {1: "batch", 2: "seq"},
        },
        opset_version=OPSET,
        dynamo=False,
    )


def export_nli(model: NliPairScorer, path: Path) -> None:
    ids = torch.tensor([[0, 9, 8, 2, 2, 7, 6, 2]])
    att = torch.ones_like(ids)
    types = torch.tensor([[0, 0, 0, 0, 0, 1, 1, 1]])
    torch.onnx.export(
        model.eval(),
        (ids, att, types),
        str(path),
        input_names=["input_ids", "attention_mask", "token_type_ids"],
        output_names=["logits"],
        dynamic_axes={
            "input_ids": {0: "batch", 1: "seq"},
            "attention_mask": {0: "batch", 1: "seq"},
            "token_type_ids": {0: "batch", 1: "seq"},
            "logits": {0: "batch"},
        },
        opset_version=OPSET,
        dynamo=False,
    )


PROBE_SENTENCES = [
    "The city council approved the annual budget on Monday.",
    "Cleanup crews began work the next morning.",
    "A short probe with numbers like 42 and 1908.",
    "Quotes, dashes - and (parentheses) should tokenize without trouble.",
    "Its call is unusually low for its size.",
]


def encoder_parity(model: RobertaModel, tokenizer: PreTrainedTokenizerFast,
                   onnx_path: Path) -> float:
    """Max per-element deviation between source and exported hidden states."""
    import onnxruntime as ort

    session = ort.InferenceSession(str(onnx_path), providers=["CPUExecutionProvider"])
    wrapper = HiddenStatesWrapper(model).eval()
    worst = 0.0
    for sentence in PROBE_SENTENCES:
        enc = tokenizer(sentence, return_tensors="pt")
        with torch.no_grad():
            expected = wrapper(enc["input_ids"], enc["attention_mask"]).numpy()
        (got,) = session.run(
            None,
            {
                "input_ids": enc["input_ids"].numpy(),
                "attention_mask": enc["attention_mask"].numpy(),
            },
        )
        worst = max(worst, float(np.abs(got - expected).max()))
    return worst


def nli_parity(model: NliPairScorer, tokenizer: PreTrainedTokenizerFast,
               onnx_path: Path) -> float:
    import onnxruntime as ort

    session = ort.InferenceSession(str(onnx_path), providers=["CPUExecutionProvider"])
    worst = 0.0
    for premise, hypothesis in zip(PROBE_SENTENCES, reversed(PROBE_SENTENCES)):
        feed = _nli_inputs(tokenizer, premise, hypothesis)
        with torch.no_grad():
            expected = model(*(torch.from_numpy(v) for v in feed.values())).numpy()
        (got,) = session.run(None, feed)
        worst = max(worst, float(np.abs(got - expected).max()))
    return worst


def _nli_inputs(tokenizer: PreTrainedTokenizerFast, premise: str, hypothesis: str) -> dict:
    p_ids = tokenizer(premise, add_special_tokens=False)["input_ids"]
    h_ids = tokenizer(hypothesis, add_special_tokens=False)["input_ids"]
    bos, eos = tokenizer.bos_token_id, tokenizer.eos_token_id
    ids = [bos] + p_ids + [eos, eos] + h_ids + [eos]
    types = [0] * (len(p_ids) + 3) + [1] * (len(h_ids) + 1)
    return {
        "input_ids": np.array([ids], dtype=np.int64),
        "attention_mask": np.ones((1, len(ids)), dtype=np.int64),
        "token_type_ids": np.array([types], dtype=np.int64),
    }


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out_dir: Path, encoder_parity_dev: float, nli_parity_dev: float) -> dict:
    manifest = {
        "model_id": MODEL_ID,
        "source_checkpoint": f"constructed(seed={SEED}, nli_seed={NLI_SEED})",
        "opset": OPSET,
        "layers": LAYERS,
        "hidden_dim": HIDDEN,
        "vocab_size": VOCAB_SIZE,
        "max_length": MAX_LENGTH,
        "default_layer": LAYERS,
        "long_input_mode": "truncate",
        "nli_label_order": NLI_LABEL_ORDER,
        "encoder_file": "encoder.onnx",
        "nli_file": "nli.onnx",
        "tokenizer_files": ["vocab.json", "merges.txt"],
        "digests": {
            "encoder.onnx": file_digest(out_dir / "encoder.onnx"),
            "nli.onnx": file_digest(out_dir / "nli.onnx"),
            "vocab.json": file_digest(out_dir / "vocab.json"),
            "merges.txt": file_digest(out_dir / "merges.txt"),
        },
        "export_parity": {"encoder": encoder_parity_dev, "nli": nli_parity_dev},
    }
    with (out_dir / "manifest.json").open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def build_all(out_dir: Path, parity_tolerance: float = 1e-3) -> dict:
    """Build tokenizer + models, export, check parity, write the manifest."""
    out_dir = Path(out_dir)
    tokenizer = build_tokenizer(out_dir)
    encoder = build_encoder(tokenizer.vocab_size)
    nli = NliPairScorer(tokenizer.vocab_size)
    export_encoder(encoder, tokenizer, out_dir / "encoder.onnx")
    export_nli(nli, out_dir / "nli.onnx")
    enc_dev = encoder_parity(encoder, tokenizer, out_dir / "encoder.onnx")
    nli_dev = nli_parity(nli, tokenizer, out_dir / "nli.onnx")
    if enc_dev > parity_tolerance or nli_dev > parity_tolerance:
        raise RuntimeError(
            f"export parity failure: encoder {enc_dev:.2e}, nli {nli_dev:.2e} "
            f"(tolerance {parity_tolerance:.0e})"
        )
    return write_manifest(out_dir, enc_dev, nli_dev)
