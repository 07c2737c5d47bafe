import numpy as np
import pytest

import geonewton as gn


@pytest.fixture
def sphere3():
    return gn.Sphere(3)


@pytest.fixture
def rotations():
    return gn.Rotations3()


@pytest.fixture
def rayleigh_321():
    return gn.Rayleigh(np.diag([3.0, 2.0, 1.0]))
