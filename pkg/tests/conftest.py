import numpy as np
import pytest

from contractcheck.auxfn import AuxFn
from contractcheck.family import build_family
from contractcheck.metric import FiniteMetricSpace, SelfMap
from contractcheck.rational import rat


@pytest.fixture
def halving_space():
    """Powers of two 2^-3..2^3 with T shifting one power down.

    The smallest point is sent to itself's image chain end (it maps to
    itself once reached); every other pair contracts by exactly 1/2.
    """
    pts = [2.0 ** i for i in range(-3, 4)]
    space = FiniteMetricSpace.induced_from_reals(pts)
    smap = SelfMap([0] + list(range(0, 6)))
    return space, smap


@pytest.fixture
def step11():
    return AuxFn.step(rat(1), rat(1))


@pytest.fixture
def fam11(step11):
    return build_family(step11, rat(1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
