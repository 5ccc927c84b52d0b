"""Compute committed fixtures and reference-implementation golden values.

Embedding fixtures come straight from the source (torch) encoder. The
greedy-matching goldens are produced by the published metric package's
own embedding and pooling routines; the only adjustment is that the
sequence-start/end positions are masked out of the match (the same
mechanism the package applies to padding), because the engine's sequence
contract excludes special tokens. Every golden is cross-checked against
an independent brute-force oracle before being written.
"""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np
import torch
from transformers import PreTrainedTokenizerFast, RobertaModel

from .corpus import PAIRS, SYSTEMS, FixturePair
from .models import LAYERS, NLI_LABEL_ORDER, NliPairScorer, _nli_inputs

CANONICAL = ("entail", "neutral", "contradict")

ORACLE_TOLERANCE = 2e-6
# Minimum per-token best real-token similarity for the masked-specials
# golden path to be exact (masked entries read as 0 in the max).
MIN_POOLED_SIM = 0.02


# --------------------------------------------------------------------------
# source-model embeddings
# --------------------------------------------------------------------------


def embed_text(text: str, tokenizer: PreTrainedTokenizerFast, encoder: RobertaModel,
               layer: int = LAYERS) -> tuple[list[str], np.ndarray]:
    """Stripped, L2-normalized hidden states of ``layer`` for one text."""
    enc = tokenizer(text, return_tensors="pt")
    with torch.no_grad():
        hidden = encoder(**enc, output_hidden_states=True).hidden_states[layer]
    vectors = hidden[0, 1:-1, :].numpy().astype(np.float64)
    vectors = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    tokens = tokenizer.convert_ids_to_tokens(enc["input_ids"][0])[1:-1]
    return list(tokens), vectors


def fixture_texts(pair: FixturePair) -> dict[str, str]:
    """All text items (document, summaries, and their sentences) of a pair."""
    items = {f"{pair.pair_id}.doc": pair.doc_text}
    for j, sentence in enumerate(pair.doc_sentences):
        items[f"{pair.pair_id}.doc.s{j}"] = sentence
    for system_id in SYSTEMS:
        items[f"{pair.pair_id}.{system_id}"] = pair.summary_text(system_id)
        for j, sentence in enumerate(pair.summaries[system_id]):
            items[f"{pair.pair_id}.{system_id}.s{j}"] = sentence
    return items


def subword_idf_table(tokenizer: PreTrainedTokenizerFast) -> tuple[dict[str, float], float]:
    """log((M+1)/(df+1)) over the 10 fixture documents' subword tokens."""
    docs = [
        tokenizer.convert_ids_to_tokens(
            tokenizer(pair.doc_text, add_special_tokens=False)["input_ids"]
        )
        for pair in PAIRS
    ]
    m = len(docs)
    df: dict[str, int] = {}
    for tokens in docs:
        for token in set(tokens):
            df[token] = df.get(token, 0) + 1
    weights = {t: math.log((m + 1) / (c + 1)) for t, c in df.items()}
    return weights, math.log(m + 1)


def build_embedding_items(tokenizer: PreTrainedTokenizerFast,
                          encoder: RobertaModel) -> dict[str, dict]:
    weights, default = subword_idf_table(tokenizer)
    items: dict[str, dict] = {}
    for pair in PAIRS:
        for item_id, text in fixture_texts(pair).items():
            tokens, vectors = embed_text(text, tokenizer, encoder)
            items[item_id] = {
                "id": item_id,
                "tokens": tokens,
                "vectors": [[float(v) for v in row] for row in vectors],
                "idf": [float(weights.get(t, default)) for t in tokens],
            }
    return items


# --------------------------------------------------------------------------
# greedy-matching goldens via the published reference implementation
# --------------------------------------------------------------------------


def _reference_idf_dict(tokenizer: PreTrainedTokenizerFast) -> dict[int, float]:
    """The reference package's idf dict over the fixture documents."""
    from bert_score.utils import sent_encode

    m = len(PAIRS)
    counts: dict[int, int] = {}
    for pair in PAIRS:
        for idx in set(sent_encode(tokenizer, pair.doc_text)):
            counts[idx] = counts.get(idx, 0) + 1
    idf = defaultdict(lambda: math.log((m + 1) / 1.0))
    idf.update({idx: math.log((m + 1) / (c + 1)) for idx, c in counts.items()})
    idf[tokenizer.sep_token_id] = 0
    idf[tokenizer.cls_token_id] = 0
    return idf


def _uniform_idf_dict(tokenizer: PreTrainedTokenizerFast) -> dict[int, float]:
    idf = defaultdict(lambda: 1.0)
    idf[tokenizer.sep_token_id] = 0
    idf[tokenizer.cls_token_id] = 0
    return idf


def reference_greedy_scores(
    summary: str,
    document: str,
    ref_model,
    tokenizer: PreTrainedTokenizerFast,
    idf_dict,
) -> tuple[float, float, float]:
    """Reference-implementation greedy matching, specials masked like padding."""
    from bert_score.utils import get_bert_embedding, greedy_cos_idf

    hyp_emb, hyp_mask, hyp_idf = get_bert_embedding(
        [summary], ref_model, tokenizer, idf_dict, device="cpu", all_layers=False
    )
    ref_emb, ref_mask, ref_idf = get_bert_embedding(
        [document], ref_model, tokenizer, idf_dict, device="cpu", all_layers=False
    )
    for mask in (hyp_mask, ref_mask):
        mask[:, 0] = 0
        mask[torch.arange(mask.size(0)), mask.sum(1)] = 0
    p, r, f = greedy_cos_idf(ref_emb, ref_mask, ref_idf, hyp_emb, hyp_mask, hyp_idf)
    return float(p.item()), float(r.item()), float(f.item())


def oracle_greedy(cand: np.ndarray, ref: np.ndarray,
                  w: np.ndarray | None = None, u: np.ndarray | None = None):
    """Brute-force double-loop greedy matching used to vet every golden."""
    n_cand, n_ref = cand.shape[0], ref.shape[0]
    best_cand = np.full(n_cand, -np.inf)
    best_ref = np.full(n_ref, -np.inf)
    for i in range(n_cand):
        for j in range(n_ref):
            sim = float(cand[i] @ ref[j])
            best_cand[i] = max(best_cand[i], sim)
            best_ref[j] = max(best_ref[j], sim)
    if min(best_cand.min(), best_ref.min()) <= MIN_POOLED_SIM:
        raise RuntimeError(
            "fixture corpus produces a non-positive pooled similarity; "
            "masked-specials goldens would not equal special-free matching"
        )
    w = np.ones(n_cand) if w is None else w
    u = np.ones(n_ref) if u is None else u
    precision = float((best_cand * w).sum() / w.sum())
    recall = float((best_ref * u).sum() / u.sum())
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def build_goldens(hf_dir, encoder: RobertaModel,
                  tokenizer: PreTrainedTokenizerFast, items: dict[str, dict]) -> list[dict]:
    """Golden P/R/F (plain and IDF) plus greedy-mover values per pair.

    ``hf_dir`` holds the source checkpoint in the standard transformers
    layout so the reference metric package can load it directly.
    """
    import bert_score
    from bert_score.utils import get_model

    ref_model = get_model(str(hf_dir), num_layers=LAYERS, all_layers=False)
    plain_idf = _uniform_idf_dict(tokenizer)
    corpus_idf = _reference_idf_dict(tokenizer)

    string_weights, default_weight = subword_idf_table(tokenizer)
    goldens = []
    for pair in PAIRS:
        summary = pair.summary_text("sysA")
        document = pair.doc_text
        plain = reference_greedy_scores(summary, document, ref_model, tokenizer, plain_idf)
        idf = reference_greedy_scores(summary, document, ref_model, tokenizer, corpus_idf)

        cand = np.array(items[f"{pair.pair_id}.sysA"]["vectors"])
        ref = np.array(items[f"{pair.pair_id}.doc"]["vectors"])
        cand_tokens = items[f"{pair.pair_id}.sysA"]["tokens"]
        ref_tokens = items[f"{pair.pair_id}.doc"]["tokens"]
        w = np.array([string_weights.get(t, default_weight) for t in cand_tokens])
        u = np.array([string_weights.get(t, default_weight) for t in ref_tokens])

        check_plain = oracle_greedy(cand, ref)
        check_idf = oracle_greedy(cand, ref, w, u)
        for got, expected, label in ((plain, check_plain, "plain"), (idf, check_idf, "idf")):
            dev = max(abs(a - b) for a, b in zip(got, expected))
            if dev > ORACLE_TOLERANCE:
                raise RuntimeError(
                    f"{pair.pair_id}: reference {label} golden deviates {dev:.2e} "
                    "from the brute-force oracle"
                )

        # Greedy mover similarity: document tokens pool over summary tokens.
        mover = float(np.mean([max(float(r @ c) for c in cand) for r in ref]))

        # Public-API scores (specials participate in max pooling there);
        # recorded for documentation, not asserted by the engine.
        p_pub, r_pub, f_pub = (
            t.item()
            for t in bert_score.score(
                [summary], [document], model_type=str(hf_dir),
                num_layers=LAYERS, idf=False, rescale_with_baseline=False,
                batch_size=1, verbose=False,
            )
        )
        goldens.append(
            {
                "id": pair.pair_id,
                "summary": summary,
                "document": document,
                "bertscore": {"precision": plain[0], "recall": plain[1], "f1": plain[2]},
                "bertscore_idf": {"precision": idf[0], "recall": idf[1], "f1": idf[2]},
                "moverscore": mover,
                "public_api_bertscore": {"precision": p_pub, "recall": r_pub, "f1": f_pub},
            }
        )
    return goldens


# --------------------------------------------------------------------------
# NLI fixtures and sentence-level goldens
# --------------------------------------------------------------------------

NLI_PAIR_IDS = ("pair00", "pair01", "pair02", "pair03")


def nli_probabilities(model: NliPairScorer, tokenizer: PreTrainedTokenizerFast,
                      premise: str, hypothesis: str) -> dict[str, float]:
    feed = _nli_inputs(tokenizer, premise, hypothesis)
    with torch.no_grad():
        logits = model(*(torch.from_numpy(v) for v in feed.values())).numpy()
    logits = logits.reshape(3).astype(np.float64)
    exp = np.exp(logits - logits.max())
    probs = exp / exp.sum()
    by_label = dict(zip(NLI_LABEL_ORDER, probs))
    return {label: float(by_label[label]) for label in CANONICAL}


def build_nli_items(model: NliPairScorer, tokenizer: PreTrainedTokenizerFast) -> list[dict]:
    """NLI probabilities for the sentence pairs the engine's tests replay.

    Covers, for the first four pairs: every ordered document-sentence
    pair, document-sentence x sysA-summary-sentence, and each sentence
    with itself.
    """
    wanted: list[tuple[str, str]] = []
    for pair in PAIRS:
        if pair.pair_id not in NLI_PAIR_IDS:
            continue
        doc_sents = pair.doc_sentences
        sum_sents = pair.summaries["sysA"]
        for left in doc_sents:
            for right in doc_sents:
                wanted.append((left, right))
        for left in doc_sents:
            for right in sum_sents:
                wanted.append((left, right))
        for sentence in list(doc_sents) + list(sum_sents):
            wanted.append((sentence, sentence))
    seen = set()
    items = []
    for premise, hypothesis in wanted:
        if (premise, hypothesis) in seen:
            continue
        seen.add((premise, hypothesis))
        probs = nli_probabilities(model, tokenizer, premise, hypothesis)
        items.append({"premise": premise, "hypothesis": hypothesis, **probs})
    return items


def build_sentence_goldens(items: dict[str, dict], nli_items: list[dict]) -> dict:
    """Cross similarity matrices for pair01 (3 doc x 2 summary sentences)."""
    pair = next(p for p in PAIRS if p.pair_id == "pair01")
    doc_ids = [f"pair01.doc.s{j}" for j in range(len(pair.doc_sentences))]
    sum_ids = [f"pair01.sysA.s{j}" for j in range(len(pair.summaries["sysA"]))]

    def sentence_vector(item_id: str) -> np.ndarray:
        vectors = np.array(items[item_id]["vectors"])
        mean = vectors.mean(axis=0)
        return mean / np.linalg.norm(mean)

    cosine = [
        [float(sentence_vector(d) @ sentence_vector(s)) for s in sum_ids] for d in doc_ids
    ]
    nli_table = {(i["premise"], i["hypothesis"]): i for i in nli_items}
    kinds = {"nli_1mN": lambda e: 1.0 - e["neutral"],
             "nli_EmC": lambda e: e["entail"] - e["contradict"],
             "nli_E": lambda e: e["entail"]}
    matrices: dict[str, list[list[float]]] = {"cosine": cosine}
    for kind, fn in kinds.items():
        matrices[kind] = [
            [float(fn(nli_table[(d, s)])) for s in pair.summaries["sysA"]]
            for d in pair.doc_sentences
        ]
    return {
        "pair_id": "pair01",
        "doc_sentences": list(pair.doc_sentences),
        "summary_sentences": list(pair.summaries["sysA"]),
        "matrices": matrices,
    }
