import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from planmod.graphs import Graph


@pytest.fixture
def rng():
    import random
    return random.Random(0xC0FFEE)


def adj_of(g: Graph) -> dict:
    return {v: set(g.adj[v]) for v in g.vertices}
