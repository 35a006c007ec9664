from fractions import Fraction

import pytest
from hypothesis import settings

from findyn.space import FiniteMetricSpace, FiniteSystem

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def s2():
    return FiniteSystem(FiniteMetricSpace.uniform(("a", "b")), (1, 1))


@pytest.fixture
def s3():
    return FiniteSystem(FiniteMetricSpace.uniform(("a", "b", "c")), (1, 2, 0))


@pytest.fixture
def ident2():
    return FiniteSystem(FiniteMetricSpace.uniform(("a", "b")), (0, 1))


@pytest.fixture
def half():
    return Fraction(1, 2)
