import json
from pathlib import Path

import pytest

from docasref import Dataset, DatasetError, Document, ScoreTriple, SummaryRecord, load_dataset, save_dataset

FIXTURES = Path(__file__).parent / "fixtures"



def _write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


GOOD_ROWS = [
    {"kind": "meta", "name": "demo", "aspects": ["coverage"]},
    {"kind": "doc", "id": "d1", "text": "First document text.", "group": None},
    {"kind": "doc", "id": "d2", "text": "Second document text.", "group": None},
    {"kind": "sum", "doc_id": "d1", "system_id": "s1", "text": "Summary one.", "ratings": {"coverage": 4}},
    {"kind": "sum", "doc_id": "d1", "system_id": "s2", "text": "Summary two.", "ratings": {"coverage": 2}},
    {"kind": "sum", "doc_id": "d2", "system_id": "s1", "text": "Summary three.", "ratings": {}},
]


class TestScoreTriple:
    def test_f1_rule(self):
        t = ScoreTriple.from_pr(1.0, 0.5)
        assert t.f1 == pytest.approx(2 / 3, abs=1e-12)

    def test_degenerate_f1_is_zero(self):
        assert ScoreTriple.from_pr(0.0, 0.0).f1 == 0.0
        assert ScoreTriple.from_pr(-0.25, 0.25).f1 == 0.0

    def test_component_accessor(self):
        t = ScoreTriple.from_pr(0.2, 0.4)
        assert (t.component("p"), t.component("r"), t.component("f")) == (
            t.precision,
            t.recall,
            t.f1,
        )
        with pytest.raises(ValueError):
            t.component("x")


class TestLoadDataset:
    def test_counts_preserved(self, tmp_path):
        path = tmp_path / "demo.jsonl"
        _write_jsonl(path, GOOD_ROWS)
        ds = load_dataset(path)
        assert ds.name == "demo"
        assert len(ds.documents) == 2
        assert len(ds.summaries) == 3
        assert [d.id for d in ds.documents] == ["d1", "d2"]

    def test_duplicate_pair_rejected(self, tmp_path):
        rows = GOOD_ROWS + [
            {"kind": "sum", "doc_id": "d1", "system_id": "s1", "text": "Again.", "ratings": {}}
        ]
        path = tmp_path / "dup.jsonl"
        _write_jsonl(path, rows)
        with pytest.raises(DatasetError, match=r"doc_id='d1', system_id='s1'"):
            load_dataset(path)

    def test_malformed_line_names_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"kind":"meta","name":"x","aspects":[]}\n{oops\n', encoding="utf-8")
        with pytest.raises(DatasetError, match=r"bad\.jsonl:2"):
            load_dataset(path)

    def test_unknown_aspect_rejected(self, tmp_path):
        rows = list(GOOD_ROWS)
        rows[3] = {**rows[3], "ratings": {"sparkle": 3}}
        path = tmp_path / "aspect.jsonl"
        _write_jsonl(path, rows)
        with pytest.raises(DatasetError, match="sparkle"):
            load_dataset(path)

    def test_unknown_doc_reference_rejected(self, tmp_path):
        rows = GOOD_ROWS + [
            {"kind": "sum", "doc_id": "ghost", "system_id": "s9", "text": "X.", "ratings": {}}
        ]
        path = tmp_path / "ghost.jsonl"
        _write_jsonl(path, rows)
        with pytest.raises(DatasetError, match="unknown document"):
            load_dataset(path)

    def test_unsupported_format(self, tmp_path):
        with pytest.raises(DatasetError):
            load_dataset(tmp_path / "x.csv", format="csv")

    def test_fixture_dataset_counts(self):
        ds = load_dataset(FIXTURES / "dataset.jsonl")
        assert len(ds.documents) == 10
        assert len(ds.summaries) == 30
        assert ds.aspects == ["coverage", "fluency"]

    def test_round_trip_identity(self, tmp_path):
        ds = load_dataset(FIXTURES / "dataset.jsonl")
        out = tmp_path / "copy.jsonl"
        save_dataset(ds, out)
        again = load_dataset(out)
        assert again.documents == ds.documents
        assert again.summaries == ds.summaries
        assert again.aspects == ds.aspects
        # and the normalized bytes are stable too
        save_dataset(again, tmp_path / "copy2.jsonl")
        assert (tmp_path / "copy2.jsonl").read_bytes() == out.read_bytes()


class TestInvariants:
    def test_empty_document_text_rejected(self):
        with pytest.raises(DatasetError):
            Document(id="d", text="   ")

    def test_nonfinite_rating_rejected(self):
        with pytest.raises(DatasetError):
            Dataset(
                name="x",
                documents=[Document(id="d", text="Text.")],
                summaries=[
                    SummaryRecord(doc_id="d", system_id="s", text="T.", ratings={"a": float("nan")})
                ],
                aspects=["a"],
            )

    def test_group_documents(self):
        ds = load_dataset(FIXTURES / "multidoc.jsonl")
        group = ds.group_documents(ds.document("t1d0"))
        assert [d.id for d in group] == ["t1d0", "t1d1", "t1d2"]
        assert ds.group_documents(Document(id="solo", text="Alone.")) == [
            Document(id="solo", text="Alone.")
        ]
