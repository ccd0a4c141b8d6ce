from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from treelike.construct import build_tower
from treelike.exactnum import Dyadic, Quad
from treelike.plcurve import Point2

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def tower():
    """Levels 1..5, built once for the whole session."""
    return build_tower(5)


def dy(text) -> Dyadic:
    return Dyadic.parse(str(text))


def pt(x, y) -> Point2:
    return Point2(dy(x), dy(y))


dyadics = st.builds(Dyadic, st.integers(-2 ** 20, 2 ** 20), st.integers(0, 12))
small_dyadics = st.builds(Dyadic, st.integers(-64, 64), st.integers(0, 4))
quads = st.builds(Quad, dyadics, dyadics)
nonneg_dyadics = st.builds(Dyadic, st.integers(0, 2 ** 20), st.integers(0, 12))
unit_params = st.builds(lambda k, e: Dyadic(k % (2 ** e + 1), e), st.integers(0, 2 ** 16), st.integers(0, 10))


def frac(d: Dyadic) -> Fraction:
    return Fraction(d.num, 2 ** d.exp)
