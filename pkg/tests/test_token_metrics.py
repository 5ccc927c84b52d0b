import numpy as np
import pytest

from docasref import (
    EmbeddingSequence,
    GreedyMatchConfig,
    bertscore_reffree,
    compute_idf,
    greedy_match_scores,
    moverscore_greedy,
)


def unit_rows(rng, n, dim):
    m = rng.normal(size=(n, dim))
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def seq(vectors, idf=None):
    return EmbeddingSequence(
        tokens=[f"t{i}" for i in range(len(vectors))],
        vectors=np.asarray(vectors, dtype=float),
        idf=None if idf is None else np.asarray(idf, dtype=float),
    )


def oracle(cand, ref, w=None, u=None):
    """Independent O(n*m) double-loop max pooling."""
    n, m = len(cand), len(ref)
    best_c = [-np.inf] * n
    best_r = [-np.inf] * m
    for i in range(n):
        for j in range(m):
            s = float(np.dot(cand[i], ref[j]))
            best_c[i] = max(best_c[i], s)
            best_r[j] = max(best_r[j], s)
    w = [1.0] * n if w is None else list(w)
    u = [1.0] * m if u is None else list(u)
    p = sum(b * x for b, x in zip(best_c, w)) / sum(w)
    r = sum(b * x for b, x in zip(best_r, u)) / sum(u)
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f


class TestGreedyMatchScores:
    def test_self_match_is_one(self):
        rng = np.random.default_rng(0)
        s = seq(unit_rows(rng, 6, 8))
        triple = greedy_match_scores(s, s)
        assert triple.precision == pytest.approx(1.0, abs=1e-9)
        assert triple.recall == pytest.approx(1.0, abs=1e-9)
        assert triple.f1 == pytest.approx(1.0, abs=1e-9)

    def test_hand_example(self):
        cand = seq([[1.0, 0.0]])
        ref = seq([[1.0, 0.0], [0.0, 1.0]])
        triple = greedy_match_scores(cand, ref)
        assert triple.precision == pytest.approx(1.0, abs=1e-9)
        assert triple.recall == pytest.approx(0.5, abs=1e-9)
        assert triple.f1 == pytest.approx(2 / 3, abs=1e-9)

    def test_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            n, m = rng.integers(1, 11, size=2)
            dim = int(rng.integers(2, 9))
            cand = seq(unit_rows(rng, n, dim))
            ref = seq(unit_rows(rng, m, dim))
            triple = greedy_match_scores(cand, ref)
            p, r, f = oracle(cand.vectors, ref.vectors)
            assert triple.precision == pytest.approx(p, abs=1e-9)
            assert triple.recall == pytest.approx(r, abs=1e-9)
            assert triple.f1 == pytest.approx(f, abs=1e-9)

    def test_idf_matches_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n, m = rng.integers(1, 9, size=2)
            w = rng.uniform(0.1, 2.0, size=n)
            u = rng.uniform(0.1, 2.0, size=m)
            cand = seq(unit_rows(rng, n, 6), idf=w)
            ref = seq(unit_rows(rng, m, 6), idf=u)
            triple = greedy_match_scores(cand, ref, use_idf=True)
            p, r, f = oracle(cand.vectors, ref.vectors, w, u)
            assert triple.precision == pytest.approx(p, abs=1e-9)
            assert triple.recall == pytest.approx(r, abs=1e-9)

    def test_swap_symmetry_exact(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            a = seq(unit_rows(rng, int(rng.integers(1, 9)), 5))
            b = seq(unit_rows(rng, int(rng.integers(1, 9)), 5))
            assert greedy_match_scores(a, b).precision == greedy_match_scores(b, a).recall
            assert greedy_match_scores(a, b).recall == greedy_match_scores(b, a).precision

    def test_bounds(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            a = seq(unit_rows(rng, 4, 3))
            b = seq(unit_rows(rng, 6, 3))
            t = greedy_match_scores(a, b)
            assert -1.0 - 1e-12 <= t.precision <= 1.0 + 1e-12
            assert -1.0 - 1e-12 <= t.recall <= 1.0 + 1e-12
            assert -1.0 - 1e-12 <= t.f1 <= 1.0 + 1e-12

    def test_idf_neutrality(self):
        rng = np.random.default_rng(3)
        for c in (0.5, 1.0, 3.7):
            a = seq(unit_rows(rng, 5, 4), idf=np.full(5, c))
            b = seq(unit_rows(rng, 7, 4), idf=np.full(7, c))
            weighted = greedy_match_scores(a, b, use_idf=True)
            plain = greedy_match_scores(a, b, use_idf=False)
            assert weighted.precision == pytest.approx(plain.precision, abs=1e-12)
            assert weighted.recall == pytest.approx(plain.recall, abs=1e-12)
            assert weighted.f1 == pytest.approx(plain.f1, abs=1e-12)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(9)
        a = seq(unit_rows(rng, 6, 4))
        b = seq(unit_rows(rng, 8, 4))
        base = greedy_match_scores(a, b)
        for _ in range(10):
            pa = rng.permutation(6)
            pb = rng.permutation(8)
            ta = seq(a.vectors[pa])
            tb = seq(b.vectors[pb])
            got = greedy_match_scores(ta, tb)
            assert got.precision == pytest.approx(base.precision, abs=1e-12)
            assert got.recall == pytest.approx(base.recall, abs=1e-12)

    def test_errors(self):
        rng = np.random.default_rng(1)
        a = seq(unit_rows(rng, 3, 4))
        b = seq(unit_rows(rng, 3, 5))
        with pytest.raises(ValueError, match="dimension"):
            greedy_match_scores(a, b)
        with pytest.raises(ValueError, match="idf"):
            greedy_match_scores(a, seq(unit_rows(rng, 3, 4)), use_idf=True)


class TestBertscoreReffree:
    def test_identity_on_fixture_texts(self, backend, fixture_texts):
        cfg = GreedyMatchConfig(use_idf=False)
        for text in fixture_texts:
            triple = bertscore_reffree(text, text, cfg, backend)
            assert triple.f1 == pytest.approx(1.0, abs=1e-6)

    def test_matches_reference_goldens(self, backend, goldens):
        cfg = GreedyMatchConfig(use_idf=False)
        for g in goldens:
            triple = bertscore_reffree(g["summary"], g["document"], cfg, backend)
            assert triple.precision == pytest.approx(g["bertscore"]["precision"], abs=1e-4)
            assert triple.recall == pytest.approx(g["bertscore"]["recall"], abs=1e-4)
            assert triple.f1 == pytest.approx(g["bertscore"]["f1"], abs=1e-4)

    def test_matches_reference_goldens_with_idf(self, backend, goldens, corpus):
        docs = [" ".join(p["doc_sentences"]) for p in corpus["pairs"]]
        table = compute_idf([backend.tokenize(d) for d in docs])
        cfg = GreedyMatchConfig(use_idf=True)
        for g in goldens:
            triple = bertscore_reffree(g["summary"], g["document"], cfg, backend, idf_table=table)
            assert triple.precision == pytest.approx(g["bertscore_idf"]["precision"], abs=1e-4)
            assert triple.recall == pytest.approx(g["bertscore_idf"]["recall"], abs=1e-4)
            assert triple.f1 == pytest.approx(g["bertscore_idf"]["f1"], abs=1e-4)

    def test_idf_toggle_changes_scores(self, backend, goldens, corpus):
        docs = [" ".join(p["doc_sentences"]) for p in corpus["pairs"]]
        table = compute_idf([backend.tokenize(d) for d in docs])
        changed = 0
        for g in goldens:
            plain = bertscore_reffree(g["summary"], g["document"], GreedyMatchConfig(False), backend)
            weighted = bertscore_reffree(
                g["summary"], g["document"], GreedyMatchConfig(True), backend, idf_table=table
            )
            if abs(plain.f1 - weighted.f1) > 1e-12:
                changed += 1
        assert changed >= 1

    def test_use_idf_without_table_raises(self, backend, goldens):
        with pytest.raises(ValueError, match="IdfTable"):
            bertscore_reffree(
                goldens[1]["summary"], goldens[1]["document"], GreedyMatchConfig(True), backend
            )


class TestMoverscoreGreedy:
    def test_identity(self, backend, fixture_texts):
        cfg = GreedyMatchConfig()
        for text in fixture_texts[:5]:
            assert moverscore_greedy(text, text, cfg, backend) == pytest.approx(1.0, abs=1e-6)

    def test_equals_unweighted_greedy_recall(self, backend, goldens):
        cfg = GreedyMatchConfig()
        for g in goldens:
            mover = moverscore_greedy(g["summary"], g["document"], cfg, backend)
            recall = bertscore_reffree(g["summary"], g["document"], cfg, backend).recall
            assert mover == pytest.approx(recall, abs=1e-12)

    def test_matches_goldens(self, backend, goldens):
        cfg = GreedyMatchConfig()
        for g in goldens:
            mover = moverscore_greedy(g["summary"], g["document"], cfg, backend)
            assert mover == pytest.approx(g["moverscore"], abs=1e-4)
