from fractions import Fraction as F

import pytest

from composite_bethe.bethe import BetheIndex, bethe_cache
from composite_bethe.composite import SplitSpec
from composite_bethe.rep import ChainSpec, build_chain

XI = (F(0), F(10, 3), F(-7, 2), F(23, 5))
# pairwise differences avoid 0 and +-1 among themselves and against XI
POINTS = (F(1, 3), F(5, 7), F(-2, 9), F(11, 4), F(-13, 8), F(17, 11), F(29, 6))
TWIST = (F(2), F(3, 5), F(-7, 4))
TWIST1 = (F(3), F(1, 2), F(5))


@pytest.fixture(autouse=True)
def _fresh_cache():
    bethe_cache().clear()
    yield


def chain(L: int, twist=TWIST, c=1) -> ChainSpec:
    return ChainSpec(L, XI[:L], twist, c)


def rep(L: int, twist=TWIST):
    return build_chain(chain(L, twist))


def index(a: int, b: int) -> BetheIndex:
    return BetheIndex.of(POINTS[:a], POINTS[a:a + b])


def split(L: int, L1: int) -> SplitSpec:
    return SplitSpec.with_twist1(chain(L), L1, TWIST1)


def spare(a: int, b: int, k: int = 0) -> F:
    """A spectral point not used by index(a, b)."""
    return POINTS[a + b + k]
