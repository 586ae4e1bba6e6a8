import sys
from pathlib import Path

import pytest

PKG_ROOT = Path(__file__).resolve().parents[1]
DATA = PKG_ROOT / "data"


@pytest.fixture(scope="session")
def caption_data():
    from neural_backend.datasets import load_caption_dataset
    return load_caption_dataset(DATA / "captions")


@pytest.fixture(scope="session")
def path_corpus():
    from neural_backend.datasets import load_path_corpus
    return load_path_corpus(DATA / "paths" / "corpus.json")


@pytest.fixture(scope="session")
def trained_artifacts(tmp_path_factory, caption_data, path_corpus):
    """Train both models once per session (reduced epochs, real training)."""
    from neural_backend.captioner import CaptionModelConfig, train_captioner
    from neural_backend.path_model import PathModelConfig, train_path_model

    root = tmp_path_factory.mktemp("artifacts")
    _, cap_manifest = train_captioner(
        caption_data, CaptionModelConfig(epochs=40), root / "captioner")
    _, path_manifest = train_path_model(
        path_corpus, PathModelConfig(epochs=12), root / "path_model")
    return {"root": root, "captioner": cap_manifest,
            "path_model": path_manifest}


def serve_cmd(artifact_root) -> list[str]:
    return [sys.executable, "-m", "neural_backend.serve",
            "--artifacts", str(artifact_root)]
