import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from woi_search.benchmarks import Concept, TestFunction, make_concept  # noqa: E402

# acceptance tests append (criterion, passed, detail) here
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


class CountingFunction:
    """Wraps a test function and counts every design vector it evaluates."""

    def __init__(self, function: TestFunction):
        self.function = function
        self.lower = function.lower
        self.upper = function.upper
        self.n = function.n
        self.kind = function.kind
        self.calls = 0

    def __call__(self, X):
        X = np.atleast_2d(X)
        self.calls += len(X)
        return self.function(X)


@pytest.fixture
def counting_concept():
    def build(cid="ZDT1", kind="ZDT1", scale=(1.0, 1.0), offset=(0.0, 0.0)):
        base = make_concept(cid, kind, scale, offset)
        return Concept(cid, CountingFunction(base.function), base.transform)

    return build


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
