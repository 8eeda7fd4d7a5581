import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from skewdyn.algebra import parse_fx, parse_mpoly, parse_upoly  # noqa: E402
from skewdyn.skew import MarkedPair, check_regular  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def family(f, g):
    return check_regular(parse_fx(f), parse_mpoly(g))


def marked(f, g, a, b):
    return MarkedPair(family(f, g), parse_upoly(a), parse_upoly(b))


@pytest.fixture
def deg11():
    return marked("x^11", "y^11 + t*y^2 - t*x^11", "t^2", "t^11")


@pytest.fixture
def disk():
    return marked("x^2", "y^2 + t*x*y", "t", "0")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
