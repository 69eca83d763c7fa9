import random

import pytest
from hypothesis import strategies as st

from deformed_hecke.lattice import Params
from deformed_hecke.scalar import scalar


def points(k_min=1, k_max=5, lo=-4, hi=4):
    return st.integers(k_min, k_max).flatmap(
        lambda k: st.tuples(*[st.integers(lo, hi)] * k)
    )


rationals = st.builds(
    lambda n, d: scalar(f"{n}/{d}"), st.integers(-9, 9), st.integers(1, 9)
)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def params2():
    # q = 1 + 1*(-1/3) - 2*(1/5) = 4/15
    return Params("2", "1", "-1/3", "1/5", 2)


@pytest.fixture
def params3():
    return Params("1/2", "-3/4", "2/3", "5/7", 3)
