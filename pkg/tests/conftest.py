import pytest
from hypothesis import settings
from hypothesis import strategies as st

from leibniz4.scalar import Scalar

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def small_fraction():
    return st.fractions(min_value=-6, max_value=6, max_denominator=5)


@st.composite
def scalars(draw, complex_part=True):
    re = draw(small_fraction())
    im = draw(small_fraction()) if complex_part else 0
    return Scalar(re, im)


@st.composite
def invertible_matrices(draw, n=4):
    from leibniz4.linalg import det

    rows = draw(st.lists(st.lists(small_fraction(), min_size=n, max_size=n), min_size=n, max_size=n))
    T = tuple(tuple(Scalar(x) for x in r) for r in rows)
    if not det(T):
        # nudge onto the diagonal; adding t*I is singular for at most n values of t
        for t in range(1, n + 2):
            U = tuple(tuple(x + (t if i == j else 0) for j, x in enumerate(r)) for i, r in enumerate(T))
            if det(U):
                return U
    return T


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_lines():
    return ACCEPTANCE_LINES
