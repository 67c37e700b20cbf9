import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from knotpos.diagram_model import BraidWord, braid_closure, load_fixtures

settings.register_profile("repo", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("repo")

FIXTURES = load_fixtures()
SMALL = sorted(n for n, d in FIXTURES.items() if d.c <= 10)


@pytest.fixture(scope="session")
def fixtures():
    return FIXTURES


@st.composite
def knot_braids(draw, max_letters=10, max_strands=4, positive=False):
    n = draw(st.integers(2, max_strands))
    gens = st.integers(1, n - 1)
    if not positive:
        gens = st.builds(lambda g, s: g * s, gens, st.sampled_from((1, -1)))
    letters = draw(st.lists(gens, min_size=n - 1, max_size=max_letters))
    b = BraidWord(n, tuple(letters))
    # every generator present keeps the closure connected
    used = {abs(k) for k in letters}
    if len(used) < n - 1 or b.closure_components() != 1:
        from hypothesis import assume
        assume(False)
    return b


def random_knot_braid(rng: random.Random, max_letters=12, max_strands=4, positive=False) -> BraidWord:
    while True:
        n = rng.randint(2, max_strands)
        L = rng.randint(n - 1, max_letters)
        letters = tuple(rng.randint(1, n - 1) * (1 if positive else rng.choice((1, -1))) for _ in range(L))
        b = BraidWord(n, letters)
        if {abs(k) for k in letters} == set(range(1, n)) and b.closure_components() == 1:
            return b


def closure(letters, n=None):
    n = n or max(abs(k) for k in letters) + 1
    return braid_closure(BraidWord(n, tuple(letters)))


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
