import os
import sys

import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from vfiltration.monomial import minimalize  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def generator_lists(draw, n=None, max_gens=4, max_exp=3, min_gens=1):
    n = draw(st.integers(1, 3)) if n is None else n
    vec = st.tuples(*[st.integers(0, max_exp)] * n).filter(any)
    return n, draw(st.lists(vec, min_size=min_gens, max_size=max_gens))


@st.composite
def ideals(draw, n=None, max_gens=4, max_exp=3):
    n, gens = draw(generator_lists(n=n, max_gens=max_gens, max_exp=max_exp))
    return minimalize(gens, n)


@st.composite
def ideal_pairs(draw, max_gens=3, max_exp=3):
    n = draw(st.integers(1, 3))
    return draw(ideals(n=n, max_gens=max_gens, max_exp=max_exp)), draw(ideals(n=n, max_gens=max_gens, max_exp=max_exp))


@pytest.fixture(scope="session")
def triangle():
    return minimalize([(1, 1, 0), (1, 0, 1), (0, 1, 1)], 3)


@pytest.fixture(scope="session")
def session_ideal():
    from vfiltration.parsing import parse_ideal_text

    return parse_ideal_text("x1*x2,x1*x3,x2*x3,x2*x4,x3*x4,x4*x5,x5*x6", 6)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_log.summary_lines():
        terminalreporter.write_line(line)
