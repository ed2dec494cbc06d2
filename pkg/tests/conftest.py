import json
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))  # oracles.py


@pytest.fixture(scope="session")
def fx():
    return json.loads((HERE / "fixtures" / "oracle_fixtures.json").read_text())


@pytest.fixture(scope="session")
def docs_dir():
    return HERE.parent / "fixtures"
