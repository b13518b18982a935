import pathlib

import pytest

from qppad import KeyMaterial

REPO_ROOT = pathlib.Path(__file__).resolve().parents[1]
DATA_DIR = pathlib.Path(__file__).resolve().parent / "data"
ASSET_PATH = REPO_ROOT / "assets" / "sample.jpg"

# frozen test key used by every golden fixture
TEST_KEY = bytes.fromhex(
    "8f3a2c11d94be7655fa0c83d12764e9b0b61d5f2a9c04e8737de19ab54c6f024"
)


@pytest.fixture
def key() -> KeyMaterial:
    return KeyMaterial(TEST_KEY)


@pytest.fixture(scope="session")
def asset_bytes() -> bytes:
    return ASSET_PATH.read_bytes()
