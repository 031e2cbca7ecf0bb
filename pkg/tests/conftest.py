import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bibs.scorers import MarkovScorer  # noqa: E402
from bibs.seqcore import BACKWARD, FORWARD  # noqa: E402

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def markov_pair(vocab_size, seed, scale=2.0):
    """Raw logit tables and the forward/backward scorers built from them."""
    rng = np.random.default_rng(seed)
    lf = rng.normal(0.0, scale, size=(vocab_size, vocab_size))
    lb = rng.normal(0.0, scale, size=(vocab_size, vocab_size))
    return lf, lb, MarkovScorer(lf, FORWARD), MarkovScorer(lb, BACKWARD)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
