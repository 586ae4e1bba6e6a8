import json
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
FIXTURES = TESTS_DIR / "fixtures"

sys.path.insert(0, str(TESTS_DIR))


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def appsrc(fixtures) -> Path:
    return fixtures / "appsrc"


@pytest.fixture(scope="session")
def appsrc_manifest(fixtures) -> dict:
    return json.loads((fixtures / "appsrc_manifest.json").read_text())


@pytest.fixture(scope="session")
def miniapp(fixtures) -> Path:
    return fixtures / "miniapp"


@pytest.fixture(scope="session")
def gallery_dir(fixtures) -> Path:
    return fixtures / "gallery"


def stub_cmd(*modes: str) -> list[str]:
    return [sys.executable, str(TESTS_DIR / "stub_backend.py"), *modes]
