import pytest

from tetralap import assemble, build_level, jacobi_eigen


@pytest.fixture(scope="session")
def graphs():
    """Level -> LevelGraph, built once per session."""
    cache = {}

    def get(m):
        if m not in cache:
            cache[m] = build_level(m)
        return cache[m]

    return get


@pytest.fixture(scope="session")
def oracle_decomps(graphs):
    """Level -> Jacobi eigendecomposition of the Dirichlet matrix.

    Level 4 (dim 510) takes a noticeable while; everything sharing it
    must go through this fixture.
    """
    cache = {}

    def get(m):
        if m not in cache:
            cache[m] = jacobi_eigen(assemble(m, graph=graphs(m)))
        return cache[m]

    return get
