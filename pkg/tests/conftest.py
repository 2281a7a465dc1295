from fractions import Fraction

import pytest
from hypothesis import settings

from conleyforms.dynamics import Relation
from conleyforms.order_core import FinitePoset, downset_lattice, poset_from_cover_pairs
from conleyforms.pipeline import FixedPointOracle, PiecewiseMonotoneMap1D

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def f3():
    return Relation.from_edges(
        ("1", "2", "3"), [("1", "1"), ("1", "2"), ("2", "2"), ("3", "2"), ("3", "3")])


@pytest.fixture
def chain3():
    """0 < a < 1 as the down-set lattice of a two-element chain labelled a, 1."""
    return downset_lattice(poset_from_cover_pairs(["a", "1"], [("a", "1")]))


@pytest.fixture
def diamond():
    return downset_lattice(FinitePoset(("x", "y"), (0b01, 0b10)))


@pytest.fixture
def half():
    return PiecewiseMonotoneMap1D.affine(0, 1, Fraction(1, 2), 0)


@pytest.fixture
def half_oracle():
    return FixedPointOracle(Fraction(0), (Fraction(0), Fraction(1)))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
