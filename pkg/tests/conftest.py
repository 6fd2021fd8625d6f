import numpy as np
import pytest

from cnnd.constructions import family1, graph_surface
from cnnd.surface import SurfaceDef

LAMBDA = "(2 + x + x^2*(1+y)/4)"


def cone_surface() -> SurfaceDef:
    """Surface on the light cone over e1 with a != 0 (Z = e1)."""
    return SurfaceDef.from_sources(["x", f"{LAMBDA}*cos(y)", f"{LAMBDA}*sin(y)", LAMBDA])


CONE_POINTS = [(0.5, -0.3), (1.0, 0.2), (1.4, 0.5), (0.3, 0.4)]


@pytest.fixture
def cone():
    return cone_surface()


@pytest.fixture
def fam1():
    return graph_surface(*family1("t^2"))


@pytest.fixture
def rng():
    return np.random.default_rng(20260417)
