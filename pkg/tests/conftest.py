from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_addoption(parser):
    g = parser.getgroup("vsqe fuzzing")
    g.addoption("--fuzz-depth", type=int, default=4, help="max and/or nesting of random formulas")
    g.addoption("--fuzz-atoms", type=int, default=4, help="max atoms per random formula")
    g.addoption("--fuzz-bound", type=int, default=9, help="coefficient bound of random formulas")


@pytest.fixture(scope="session")
def fuzz(request):
    """Generator limits for random formulas (command-line configurable)."""
    o = request.config.option
    return {"max_depth": o.fuzz_depth, "max_atoms": o.fuzz_atoms, "bound": o.fuzz_bound}
