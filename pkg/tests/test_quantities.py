import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dwelltime.errors import DomainError
from dwelltime.quantities import (
    HBAR,
    NATURAL,
    SI,
    ParticleSpec,
    RegionSpec,
    cesium_defaults,
    convert,
    energy_from_momentum,
)


def test_hbar_value():
    assert HBAR == 1.054571817e-34
    assert SI.hbar == HBAR
    assert NATURAL.hbar == 1.0


def test_cesium_defaults():
    particle, region, v0 = cesium_defaults()
    assert particle.label == "Cs"
    assert region.length == pytest.approx(2.0e-6, rel=1e-15)
    assert particle.mass == pytest.approx(2.2069e-25, rel=1e-4)
    # threshold speed of the barrier
    assert np.sqrt(2 * v0 / particle.mass) == pytest.approx(2.8e-3, rel=1e-14)
    assert v0 == pytest.approx(8.65e-31, rel=1e-3)


def test_convert_unit_values():
    k = convert(1.0, 1.0)
    assert (k.momentum, k.velocity, k.energy) == (1.0, 1.0, 0.5)


def test_convert_cs_threshold():
    assert convert(2.8e-3, 2.2069e-25).momentum == pytest.approx(6.179e-28, rel=1e-4)


@pytest.mark.parametrize("v, m", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
def test_convert_rejects_non_positive(v, m):
    with pytest.raises(DomainError):
        convert(v, m)


@pytest.mark.parametrize("exponent", range(-8, 5))
def test_convert_round_trip_over_decades(exponent):
    v = 1.7 * 10.0**exponent
    k = convert(v, 2.2069e-25)
    assert k.momentum / 2.2069e-25 == pytest.approx(v, rel=4e-16)
    assert k.energy == pytest.approx(energy_from_momentum(k.momentum, 2.2069e-25), rel=1e-15)


@given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6))
def test_energy_strictly_increasing(p, dp):
    assert energy_from_momentum(p + dp, 3.0) > energy_from_momentum(p, 3.0)


def test_value_type_invariants():
    with pytest.raises(DomainError):
        ParticleSpec(-1.0)
    with pytest.raises(DomainError):
        RegionSpec(1.0, 1.0)
    r = RegionSpec(-1.0, 3.0)
    assert r.length == 4.0 and r.center == 1.0
