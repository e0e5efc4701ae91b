import sys
from pathlib import Path

import pytest

from selfie.theory import parse_theory

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def itrev():
    return parse_theory((DATA / "itrev.thy").read_text(), "itrev.thy")


@pytest.fixture(scope="session")
def itrev_path():
    return str(DATA / "itrev.thy")
