import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dwelltime.quantities import cesium_defaults  # noqa: E402


@pytest.fixture(scope="session")
def cs():
    """(mass, length, barrier height, threshold momentum) for the Cs setup."""
    particle, region, v0 = cesium_defaults()
    m, l = particle.mass, region.length
    return m, l, v0, math.sqrt(2 * m * v0)
