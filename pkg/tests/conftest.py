import numpy as np
import pytest

from orc4.bfs import build

SHIFTS = (4 * np.arange(16)).astype(np.uint64)


def random_words(n, seed=0):
    """``n`` uniform random permutations as packed words."""
    rng = np.random.default_rng(seed)
    imgs = rng.permuted(np.tile(np.arange(16, dtype=np.uint64), (n, 1)), axis=1)
    return np.bitwise_or.reduce(imgs << SHIFTS, axis=1)


def naive_images(word):
    return [(int(word) >> (4 * i)) & 15 for i in range(16)]


def naive_word(images):
    return sum(int(v) << (4 * i) for i, v in enumerate(images))


@pytest.fixture(scope="session")
def table2():
    return build(2)


@pytest.fixture(scope="session")
def table4():
    return build(4)


@pytest.fixture(scope="session")
def table6():
    return build(6)


@pytest.fixture(scope="session")
def naive4():
    from orc4.oracle import naive_bfs

    return naive_bfs(4)
