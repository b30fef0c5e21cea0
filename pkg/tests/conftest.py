import sys
from fractions import Fraction as F

import pytest
from hypothesis import settings

from liftcert.fuzzy import FuzzyRelation
from liftcert.terms import Distribution

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def running():
    """Three-point instance used throughout: optimum 1/4 under the standard lifting."""
    d = FuzzyRelation.from_entries(
        "abc", {("a", "b"): F(1, 5), ("a", "c"): F(3, 5), ("b", "b"): F(0), ("b", "c"): F(3, 10)}, default=1)
    mu = Distribution({"a": F(1, 2), "b": F(1, 2)})
    nu = Distribution({"b": F(1, 2), "c": F(1, 2)})
    return d, mu, nu


@pytest.fixture
def asym():
    """Two-point non-symmetric relation [[1/2, 1], [3/10, 0]]."""
    return FuzzyRelation(("a1", "a2"), ((F(1, 2), F(1)), (F(3, 10), F(0))))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.summary_line(number, module.RESULTS[number]))
