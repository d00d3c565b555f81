import json
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

import denoiser as dn  # noqa: E402
from worlds import acceptance_world  # noqa: E402

GOLDENS = TESTS_DIR / "goldens"


def load_golden(name: str) -> dict:
    return json.loads((GOLDENS / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def default_corpus():
    return dn.load_default_corpus()


@pytest.fixture(scope="session")
def world():
    return acceptance_world()
