import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gen import GOLDEN_MATRIX, GOLDEN_P, GOLDEN_T  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def golden():
    return GOLDEN_P, GOLDEN_T, GOLDEN_MATRIX


@pytest.fixture
def data_dir():
    return DATA


_REPORT = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    return request.config.stash.setdefault(_REPORT, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_REPORT, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
