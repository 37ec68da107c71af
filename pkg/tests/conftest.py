from functools import lru_cache

import pytest

from cube_om.matroid import enumerate_hyperplanes
from cube_om.orientation import aff_orientation


@lru_cache(maxsize=None)
def _catalog(n):
    return enumerate_hyperplanes(n)


@lru_cache(maxsize=None)
def _aff(n):
    return aff_orientation(n, _catalog(n))


@pytest.fixture(scope="session")
def catalog():
    return _catalog


@pytest.fixture(scope="session")
def aff():
    return _aff


def V(*coords):
    """Vertex index from +-1 coordinates."""
    from cube_om.core import vertex_from_coords

    return vertex_from_coords(coords)


def S(*vertices):
    return sum(1 << v for v in vertices)
