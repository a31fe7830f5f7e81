import numpy as np
import pytest

from combcluster import (build_ring_supergraph, build_torus_supergraph,
                         expand)


@pytest.fixture(scope="session")
def torus6():
    return build_torus_supergraph(6)


@pytest.fixture(scope="session")
def lattice6(torus6):
    return expand(torus6)


@pytest.fixture(scope="session")
def ring4():
    return build_ring_supergraph(4)


@pytest.fixture(scope="session")
def crown8(ring4):
    return expand(ring4)


@pytest.fixture(scope="session")
def two_mode():
    return np.array([[0.0, 1.0], [1.0, 0.0]])
