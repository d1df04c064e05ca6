import itertools
import random

import pytest

from qlap.graph_core import Graph


def all_labeled(n):
    m = n * (n - 1) // 2
    for mask in range(1 << m):
        yield Graph.from_mask(n, mask)


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


@pytest.fixture
def rng():
    return random.Random(20241015)
