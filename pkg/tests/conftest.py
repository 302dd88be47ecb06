import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


@pytest.fixture
def data_dir():
    return DATA


def finite(lo=-3.0, hi=3.0):
    return st.floats(lo, hi, allow_nan=False, allow_infinity=False)


def random_net(rng, input_dim=None, n_classes=None, k=None, scale=1.0):
    from curious_elm.network import NetworkState

    m = input_dim or int(rng.integers(1, 5))
    n = n_classes or int(rng.integers(2, 5))
    k = k if k is not None else int(rng.integers(1, 7))
    return NetworkState(
        m, n,
        centers=rng.uniform(-1, 1, (k, m)),
        impacts=rng.uniform(0.1, 3.0, k),
        labels=rng.integers(1, n + 1, k),
        weights=rng.normal(0, scale, (k, n)),
    )


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
