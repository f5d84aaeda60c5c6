import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
if str(HERE) not in sys.path:
    sys.path.insert(0, str(HERE))

GOLDEN = HERE / "golden"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN
