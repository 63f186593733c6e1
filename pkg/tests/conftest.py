import numpy as np
import pytest

from rscd.model import build_params

# (n, p, M, g); all type (i), covering both signs of M and p > 1
CONFIGS = [
    (3, 1, 2, 0.5),
    (3, 2, 1, 1.5),
    (3, 2, -1, 1.6),
    (4, 1, -2, 2.3),
    (4, 3, 2, 4.7),
    (5, 2, 1, 1.37),
]
SMALL = [(2, 1, 3, 0.7), (3, 1, 5, 0.3), (3, 1, -2, 2.2)]


@pytest.fixture(params=CONFIGS, ids=lambda c: "n{}p{}M{}g{}".format(*c))
def params(request):
    return build_params(*request.param)


@pytest.fixture(params=CONFIGS + SMALL, ids=lambda c: "n{}p{}M{}g{}".format(*c))
def any_params(request):
    return build_params(*request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
