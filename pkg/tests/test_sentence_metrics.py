import math

import numpy as np
import pytest

from docasref import (
    Document,
    ScoreTriple,
    SentenceSimConfig,
    doc_sentence_weights,
    leadword_filter,
    multi_doc_score,
    rouge_reffree,
    sent_sim_matrix,
    sentence_bertscore,
    split_sentences,
    summary_sentence_votes,
)


class FakeBackend:
    """Serves fixed sentence vectors keyed by text; no NLI."""

    def __init__(self, table):
        self.table = {k: np.asarray(v, dtype=float) for k, v in table.items()}

    def embed_sentence(self, text):
        v = self.table[text]
        return v / np.linalg.norm(v)


class TestSentSimMatrix:
    def test_single_identical_sentence(self, backend):
        s = "The city council approved the annual budget on Monday."
        m = sent_sim_matrix([s], [s], SentenceSimConfig("cosine"), backend)
        assert m.shape == (1, 1)
        assert m[0, 0] == pytest.approx(1.0, abs=1e-6)

    def test_nli_emc_arithmetic(self):
        class OneNli:
            def nli_probs(self, p, h):
                from docasref import NliDistribution

                return NliDistribution(entail=0.7, neutral=0.2, contradict=0.1)

        m = sent_sim_matrix(["a"], ["b"], SentenceSimConfig("nli_EmC"), OneNli())
        assert m[0, 0] == pytest.approx(0.6, abs=1e-12)
        m = sent_sim_matrix(["a"], ["b"], SentenceSimConfig("nli_1mN"), OneNli())
        assert m[0, 0] == pytest.approx(0.8, abs=1e-12)
        m = sent_sim_matrix(["a"], ["b"], SentenceSimConfig("nli_E"), OneNli())
        assert m[0, 0] == pytest.approx(0.7, abs=1e-12)

    def test_matches_committed_goldens(self, backend, sentence_goldens):
        docs = sentence_goldens["doc_sentences"]
        sums = sentence_goldens["summary_sentences"]
        for kind, expected in sentence_goldens["matrices"].items():
            got = sent_sim_matrix(docs, sums, SentenceSimConfig(kind), backend)
            np.testing.assert_allclose(got, np.array(expected), atol=1e-4)

    def test_cosine_self_symmetry(self, backend, sentence_goldens):
        docs = sentence_goldens["doc_sentences"]
        m = sent_sim_matrix(docs, docs, SentenceSimConfig("cosine"), backend)
        np.testing.assert_allclose(m, m.T, atol=1e-6)

    def test_empty_lists_rejected(self, backend):
        with pytest.raises(ValueError):
            sent_sim_matrix([], ["a"], SentenceSimConfig("cosine"), backend)


class TestDocSentenceWeights:
    def test_uniform_offdiagonal(self):
        m = np.full((3, 3), 0.5)
        np.fill_diagonal(m, 1.0)
        assert doc_sentence_weights(m, "sum") == pytest.approx([1.0, 1.0, 1.0])

    def test_single_sentence(self):
        assert doc_sentence_weights(np.array([[1.0]]), "sum") == [1.0]
        assert doc_sentence_weights(np.array([[1.0]]), "entropy") == [1.0]

    def test_sum_matches_direct_formula(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            m = rng.uniform(-1, 1, size=(4, 4))
            got = doc_sentence_weights(m, "sum")
            expected = [sum(m[i, j] for j in range(4) if j != i) for i in range(4)]
            assert got == pytest.approx(expected, abs=1e-12)

    def test_entropy_matches_direct_formula(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            m = rng.uniform(-0.9, 1, size=(4, 4))
            got = doc_sentence_weights(m, "entropy")
            for i in range(4):
                row = [m[i, j] + 1.0 for j in range(4) if j != i]
                total = sum(row)
                p = [x / total for x in row if x > 0]
                expected = -sum(x * math.log(x) for x in p)
                assert got[i] == pytest.approx(expected, abs=1e-12)

    def test_sum_scales_linearly(self):
        rng = np.random.default_rng(17)
        m = rng.uniform(0, 1, size=(5, 5))
        base = np.array(doc_sentence_weights(m, "sum"))
        scaled = np.array(doc_sentence_weights(3.0 * m, "sum"))
        np.testing.assert_allclose(scaled, 3.0 * base, atol=1e-12)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            doc_sentence_weights(np.zeros((2, 3)), "sum")


class TestSummarySentenceVotes:
    def test_hand_example(self):
        votes = summary_sentence_votes([1.0, 1.0], np.array([[0.2], [0.4]]))
        assert votes == pytest.approx([0.6], abs=1e-12)

    def test_zero_weights(self):
        votes = summary_sentence_votes([0.0, 0.0], np.array([[0.2, 0.1], [0.4, 0.3]]))
        assert votes == pytest.approx([0.0, 0.0], abs=1e-15)

    def test_matches_matrix_vector_product(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            w = rng.uniform(0, 2, size=3).tolist()
            cross = rng.uniform(-1, 1, size=(3, 4))
            got = summary_sentence_votes(w, cross)
            expected = [sum(w[i] * cross[i, j] for i in range(3)) for j in range(4)]
            assert got == pytest.approx(expected, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            summary_sentence_votes([1.0], np.zeros((2, 2)))


class TestSentenceBertscore:
    def test_identity_cosine(self, backend, fixture_texts):
        cfg = SentenceSimConfig("cosine", "none")
        for text in fixture_texts:
            triple = sentence_bertscore(text, text, cfg, backend)
            assert triple.precision == pytest.approx(1.0, abs=1e-6)
            assert triple.recall == pytest.approx(1.0, abs=1e-6)
            assert triple.f1 == pytest.approx(1.0, abs=1e-6)

    def test_hand_computed_sum_weighting(self):
        # 2 document sentences, 1 summary sentence with fixed vectors
        table = {
            "D one.": [1.0, 0.0],
            "D two.": [0.6, 0.8],
            "S one.": [0.8, 0.6],
        }
        fake = FakeBackend(table)
        cfg = SentenceSimConfig("cosine", "sum")
        triple = sentence_bertscore("S one.", "D one. D two.", cfg, fake)
        # cross sims: s(d1,y)=0.8, s(d2,y)=0.96; self sim s(d1,d2)=0.6
        # w = [0.6, 0.6] -> w' = [0.5, 0.5]; v = [0.6*0.8+0.6*0.96] -> v' = [1]
        # precision = max_i cross = 0.96; recall = 0.5*0.8 + 0.5*0.96 = 0.88
        assert triple.precision == pytest.approx(0.96, abs=1e-6)
        assert triple.recall == pytest.approx(0.88, abs=1e-6)
        expected_f1 = 2 * 0.96 * 0.88 / (0.96 + 0.88)
        assert triple.f1 == pytest.approx(expected_f1, abs=1e-6)

    def test_equidistant_sentences_collapse_to_unweighted(self):
        # all document sentences mutually equidistant -> equal weights
        table = {
            "D one.": [1.0, 0.0, 0.0],
            "D two.": [0.0, 1.0, 0.0],
            "D three.": [0.0, 0.0, 1.0],
            "S one.": [0.5, 0.5, 0.5],
        }
        fake = FakeBackend(table)
        doc = "D one. D two. D three."
        none = sentence_bertscore("S one.", doc, SentenceSimConfig("cosine", "none"), fake)
        summed = sentence_bertscore("S one.", doc, SentenceSimConfig("cosine", "sum"), fake)
        assert summed.precision == pytest.approx(none.precision, abs=1e-9)
        assert summed.recall == pytest.approx(none.recall, abs=1e-9)
        assert summed.f1 == pytest.approx(none.f1, abs=1e-9)

    def test_single_pair_all_weightings_equal(self, backend, corpus):
        # k_doc = k_sum = 1: P = R = F = the single similarity entry
        doc = corpus["pairs"][0]["doc_sentences"][0]
        summary = corpus["pairs"][0]["summaries"]["sysB"][0]
        values = []
        for weighting in ("none", "sum", "entropy"):
            t = sentence_bertscore(summary, doc, SentenceSimConfig("cosine", weighting), backend)
            values.append((t.precision, t.recall))
            assert t.precision == pytest.approx(t.recall, abs=1e-9)
        for other in values[1:]:
            assert other == pytest.approx(values[0], abs=1e-9)

    def test_nli_kinds_on_fixture(self, backend, sentence_goldens):
        doc = " ".join(sentence_goldens["doc_sentences"])
        summary = " ".join(sentence_goldens["summary_sentences"])
        for kind in ("nli_1mN", "nli_EmC", "nli_E"):
            triple = sentence_bertscore(summary, doc, SentenceSimConfig(kind, "none"), backend)
            expected = np.array(sentence_goldens["matrices"][kind])
            assert triple.precision == pytest.approx(expected.max(axis=0).mean(), abs=1e-4)
            assert triple.recall == pytest.approx(expected.max(axis=1).mean(), abs=1e-4)


class TestLeadwordFilter:
    def test_half_of_four(self, corpus):
        pair = next(p for p in corpus["pairs"] if p["id"] == "pair03")
        doc = Document(id="pair03", text=" ".join(pair["doc_sentences"]))
        lead = leadword_filter(doc, 0.5)
        assert split_sentences(lead.text) == pair["doc_sentences"][:2]

    def test_k_one_is_identity(self, corpus):
        for p in corpus["pairs"]:
            doc = Document(id=p["id"], text=" ".join(p["doc_sentences"]))
            assert leadword_filter(doc, 1.0).text == doc.text

    def test_ceiling_rule(self):
        text = "One. Two. Three. Four. Five."
        doc = Document(id="d", text=text)
        lead = leadword_filter(doc, 0.5)
        assert split_sentences(lead.text) == ["One.", "Two.", "Three."]

    def test_idempotent(self):
        doc = Document(id="d", text="One. Two. Three. Four.")
        once = leadword_filter(doc, 0.5)
        twice = leadword_filter(once, 1.0)
        assert twice.text == once.text

    def test_k_out_of_range(self):
        doc = Document(id="d", text="One.")
        for k in (0.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                leadword_filter(doc, k)


class TestMultiDocScore:
    def metric(self, summary, doc_text):
        return rouge_reffree(summary, doc_text, "r1")

    def test_sum_of_parts(self):
        docs = [Document(id=f"d{i}", text=t) for i, t in enumerate(
            ["alpha beta gamma", "beta gamma delta", "gamma delta epsilon"])]
        summary = "beta gamma"
        total = multi_doc_score(docs, summary, self.metric, "r")
        parts = [multi_doc_score([d], summary, self.metric, "r") for d in docs]
        assert total == pytest.approx(sum(parts), abs=1e-12)

    def test_single_doc_equals_metric(self):
        doc = Document(id="d", text="alpha beta gamma")
        value = multi_doc_score([doc], "beta", self.metric, "r")
        assert value == pytest.approx(self.metric("beta", doc.text).recall, abs=1e-15)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(10)
        docs = [Document(id=f"d{i}", text=f"w{i} alpha w{i + 1}") for i in range(5)]
        base = multi_doc_score(docs, "alpha w2", self.metric, "f")
        for _ in range(5):
            perm = [docs[i] for i in rng.permutation(5)]
            assert multi_doc_score(perm, "alpha w2", self.metric, "f") == pytest.approx(
                base, abs=1e-12
            )

    def test_scalar_component(self):
        docs = [Document(id="a", text="x"), Document(id="b", text="y")]
        value = multi_doc_score(docs, "s", lambda s, d: 0.25, "scalar")
        assert value == pytest.approx(0.5, abs=1e-15)

    def test_error_carries_doc_id(self):
        def broken(summary, text):
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError, match="'bad'"):
            multi_doc_score([Document(id="bad", text="x")], "s", broken, "scalar")

    def test_empty_doc_list(self):
        with pytest.raises(ValueError):
            multi_doc_score([], "s", self.metric, "r")
