from pathlib import Path
import sys

import numpy as np
import pytest

# main.py と同様に src を sys.path に追加する / Put src on sys.path the way main.py does
sys.path.append(str(Path(__file__).parent.parent / "src"))

from lks.config import get_settings  # noqa: E402
from lks.extremal import spider, tight_construction  # noqa: E402
from lks.graph_core import Graph, Tree  # noqa: E402
from lks.taxonomy import CaterpillarShape, reconstruct  # noqa: E402

SAMPLE_SHAPE = CaterpillarShape.of(2, 3, 4, 2, 1)


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def tight_3_8() -> Graph:
    return tight_construction(3, 8)


@pytest.fixture
def spider3() -> Tree:
    return spider(3)


@pytest.fixture
def sample_caterpillar() -> Tree:
    return reconstruct(SAMPLE_SHAPE)


@pytest.fixture
def double_star() -> Tree:
    # centres 0 and 1, two leaves each
    return Tree(6, ((0, 1), (0, 2), (0, 3), (1, 4), (1, 5)))


def complete_minus_matching(n: int, pairs: int) -> Graph:
    removed = {(2 * i, 2 * i + 1) for i in range(pairs)}
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in removed])


def random_tree(order: int, parents) -> Tree:
    """Tree on 0..order-1 where vertex i > 0 hangs below parents[i-1] < i."""
    return Tree(order, tuple((p, i + 1) for i, p in enumerate(parents)))
