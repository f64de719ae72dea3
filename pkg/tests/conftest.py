import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from tripack.core import Instance, fig1_instance

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_instance(n, seed, bound=100, low=0):
    rng = random.Random(seed)
    w = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            w[u][v] = w[v][u] = rng.randint(low, bound)
    return Instance(n, w)


def ab_bc_instance():
    """n = 6 with w(ab) = 10, w(bc) = 5 and zero elsewhere."""
    return Instance.from_edges(6, {(0, 1): 10, (1, 2): 5})


@pytest.fixture
def fig1():
    return fig1_instance()


@pytest.fixture
def zero6():
    return Instance(6, [[0] * 6 for _ in range(6)])


F = Fraction
