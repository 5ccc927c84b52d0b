"""Orchestrate fixture generation into an output directory.

Writes, under ``<out>``:

* ``models/`` - encoder.onnx, nli.onnx, vocab.json, merges.txt,
  tokenizer.json, manifest.json
* ``embeddings.json`` - token-embedding fixtures (engine schema)
* ``nli_pairs.json`` - committed NLI probabilities
* ``goldens.json`` - reference-implementation greedy-matching goldens
* ``sentence_goldens.json`` - cross similarity matrices for pair01
* ``corpus.json`` - the fixture texts, sentence splits, and ratings
* ``dataset.jsonl`` - the benchmark dataset (engine JSONL schema)
* ``external_scores.csv`` - demo external metric column

Regeneration with the same seeds and environment is byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import corpus, goldens, models


def write_json(path: Path, payload) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def write_dataset(path: Path) -> None:
    lines = [
        json.dumps({"kind": "meta", "name": "fixture-benchmark", "aspects": corpus.ASPECTS})
    ]
    for pair in corpus.PAIRS:
        lines.append(
            json.dumps({"kind": "doc", "id": pair.pair_id, "text": pair.doc_text, "group": None})
        )
    for pair in corpus.PAIRS:
        for system_id in corpus.SYSTEMS:
            lines.append(
                json.dumps(
                    {
                        "kind": "sum",
                        "doc_id": pair.pair_id,
                        "system_id": system_id,
                        "text": pair.summary_text(system_id),
                        "ratings": pair.ratings[system_id],
                    }
                )
            )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_external_scores(path: Path) -> None:
    # Synthetic baseline column: ranks systems A > B > C with small
    # per-document offsets so correlations are defined but imperfect.
    base = {"sysA": 0.9, "sysB": 0.6, "sysC": 0.3}
    rows = ["# metric=external_demo", "doc_id,system_id,score"]
    for i, pair in enumerate(corpus.PAIRS):
        for system_id in corpus.SYSTEMS:
            wobble = ((i * 7 + len(system_id)) % 5 - 2) * 0.01
            rows.append(f"{pair.pair_id},{system_id},{base[system_id] + wobble:.3f}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def generate(out_dir: str | Path) -> dict:
    import tempfile

    out = Path(out_dir)
    models_dir = out / "models"
    out.mkdir(parents=True, exist_ok=True)

    manifest = models.build_all(models_dir)
    tokenizer = models.load_tokenizer(models_dir)
    encoder = models.build_encoder(tokenizer.vocab_size)
    nli = models.NliPairScorer(tokenizer.vocab_size)

    items = goldens.build_embedding_items(tokenizer, encoder)
    write_json(
        out / "embeddings.json",
        {
            "model_id": models.MODEL_ID,
            "layer": models.LAYERS,
            "dim": models.HIDDEN,
            "items": list(items.values()),
        },
    )

    nli_items = goldens.build_nli_items(nli, tokenizer)
    write_json(
        out / "nli_pairs.json",
        {
            "model_id": models.MODEL_ID,
            "label_order": list(goldens.CANONICAL),
            "items": nli_items,
        },
    )

    # The reference metric package loads the source model from a standard
    # transformers checkpoint directory; stage one temporarily.
    with tempfile.TemporaryDirectory() as hf_dir:
        encoder.save_pretrained(hf_dir)
        tokenizer.save_pretrained(hf_dir)
        golden_rows = goldens.build_goldens(hf_dir, encoder, tokenizer, items)
    write_json(out / "goldens.json", {"model_id": models.MODEL_ID, "pairs": golden_rows})

    write_json(out / "sentence_goldens.json", goldens.build_sentence_goldens(items, nli_items))
    write_json(out / "corpus.json", corpus.corpus_as_json())
    write_dataset(out / "dataset.jsonl")
    write_external_scores(out / "external_scores.csv")
    return manifest
