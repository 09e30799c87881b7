import numpy as np
import pytest
import sympy as sp

import mvlab.events
from mvlab.projective import Camera, Quadric3


@pytest.fixture(autouse=True)
def clear_events():
    """Remove callbacks left registered by a test."""
    yield
    mvlab.events.clear()


@pytest.fixture
def rng():
    """A seeded generator so that random scenes are the same on every run."""
    return np.random.default_rng(20240607)


@pytest.fixture
def standard_pair():
    """The cameras [I|0] and [I|-e1], centered at the origin and at (1, 0, 0)."""
    first = Camera(matrix=[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    second = Camera(matrix=[[1, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0]])
    return first, second


@pytest.fixture
def general_triple():
    """Three integer cameras with non-collinear centers."""
    return [
        Camera(matrix=[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]),
        Camera(matrix=[[1, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0]]),
        Camera(matrix=[[1, 0, 0, 0], [0, 1, 0, -1], [0, 0, 1, 0]]),
    ]


@pytest.fixture
def two_circle_cones():
    """The cones X^2 + Y^2 + Z^2 and Y^2 + Z^2 + W^2, meeting in the conics on the planes X = W and X = -W."""
    return Quadric3(matrix=sp.diag(1, 1, 1, 0)), Quadric3(matrix=sp.diag(0, 1, 1, 1))


@pytest.fixture
def double_line_cones():
    """The cones X^2 - YZ and (X - W)^2 - (Y - W)(Z - W), meeting in a conic and a doubled line."""
    half = sp.Rational(1, 2)
    first = Quadric3(matrix=[[1, 0, 0, 0], [0, 0, -half, 0], [0, -half, 0, 0], [0, 0, 0, 0]])
    second = Quadric3(matrix=[[1, 0, 0, -1], [0, 0, -half, half], [0, -half, 0, half], [-1, half, half, 0]])
    return first, second
