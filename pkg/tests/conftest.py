import json
from pathlib import Path

import pytest

from docasref import FixtureBackend, ModelConfig

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def backend() -> FixtureBackend:
    return FixtureBackend(FIXTURES / "embeddings.json", nli_path=FIXTURES / "nli_pairs.json")


@pytest.fixture(scope="session")
def goldens() -> list[dict]:
    with open(FIXTURES / "goldens.json", encoding="utf-8") as fh:
        return json.load(fh)["pairs"]


@pytest.fixture(scope="session")
def corpus() -> dict:
    with open(FIXTURES / "corpus.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def sentence_goldens() -> dict:
    with open(FIXTURES / "sentence_goldens.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def onnx_backend():
    from docasref.onnx_backend import OnnxBackend

    cfg = ModelConfig.from_manifest(FIXTURES / "models")
    nli_cfg = ModelConfig.from_manifest(FIXTURES / "models", role="nli")
    return OnnxBackend(cfg, nli_cfg=nli_cfg)


@pytest.fixture(scope="session")
def fixture_texts(corpus) -> list[str]:
    """Every committed document and summary text."""
    texts = []
    for pair in corpus["pairs"]:
        texts.append(" ".join(pair["doc_sentences"]))
        for sentences in pair["summaries"].values():
            texts.append(" ".join(sentences))
    return texts
