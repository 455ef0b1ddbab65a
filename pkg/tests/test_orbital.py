import math

import numpy as np
import pytest

from debrisplan.orbital import (EARTH, CircularOrbit, Debris, EarthModel,
                                angle_diff, circular_velocity, fuel_consumed,
                                propagate_raan, raan_rate, wrap_angle)

DAY = 86400.0
DEG_PER_DAY = math.degrees(1.0) * DAY


def test_earth_model_constants():
    assert EARTH.r_eq == 6378137.0
    assert EARTH.mu == 3.986005e14
    assert EARTH.j2 == 1.08266e-3


def test_earth_model_validation():
    with pytest.raises(ValueError):
        EarthModel(r_eq=-1.0, mu=EARTH.mu, j2=EARTH.j2)
    with pytest.raises(ValueError):
        EarthModel(r_eq=EARTH.r_eq, mu=0.0, j2=EARTH.j2)


def test_circular_velocity_low_orbit():
    # frozen: sqrt(mu / (r_eq + 700 km))
    assert circular_velocity(EARTH.r_eq + 700.0e3) == pytest.approx(
        7504.29, abs=0.01)


def test_raan_rate_sign_by_inclination():
    a = EARTH.r_eq + 700.0e3
    assert raan_rate(a, math.radians(97.0)) > 0.0   # retrograde: eastward
    assert raan_rate(a, math.radians(51.6)) < 0.0   # prograde: westward
    assert raan_rate(a, math.radians(90.0)) == pytest.approx(0.0, abs=1e-15)


def test_raan_rate_sso_magnitude():
    # a 700 km orbit at 97 deg precesses at roughly the solar rate
    rate = raan_rate(EARTH.r_eq + 700.0e3, math.radians(97.0))
    assert rate * DEG_PER_DAY == pytest.approx(0.8429, abs=0.002)


def test_raan_rate_decreases_with_radius():
    inc = math.radians(97.0)
    lo = abs(raan_rate(EARTH.r_eq + 400.0e3, inc))
    hi = abs(raan_rate(EARTH.r_eq + 2000.0e3, inc))
    assert lo > hi


def test_propagate_raan_linear():
    orbit = CircularOrbit(a=EARTH.r_eq + 700.0e3, inc=math.radians(97.0),
                          raan0=1.0, epoch=0.0)
    rate = raan_rate(orbit.a, orbit.inc)
    t = 100.0 * DAY
    assert propagate_raan(orbit, t) == pytest.approx(
        wrap_angle(1.0 + rate * t), abs=1e-12)


def test_propagate_raan_respects_epoch():
    orbit = CircularOrbit(a=EARTH.r_eq + 700.0e3, inc=math.radians(97.0),
                          raan0=1.0, epoch=50.0 * DAY)
    assert propagate_raan(orbit, 50.0 * DAY) == pytest.approx(1.0)


def test_raan0_normalized():
    orbit = CircularOrbit(a=7.0e6, inc=1.0, raan0=7.0, epoch=0.0)
    assert 0.0 <= orbit.raan0 < 2.0 * math.pi or -math.pi < orbit.raan0 <= math.pi
    assert math.isclose(math.cos(orbit.raan0), math.cos(7.0))
    assert math.isclose(math.sin(orbit.raan0), math.sin(7.0))


def test_angle_diff_wraps():
    assert angle_diff(0.1, 0.0) == pytest.approx(0.1)
    assert angle_diff(0.0, 0.1) == pytest.approx(-0.1)
    assert abs(angle_diff(math.pi - 0.05, -math.pi + 0.05)) == pytest.approx(
        0.1, abs=1e-12)


def test_fuel_consumed_rocket_equation():
    # frozen: 2000 kg * (1 - exp(-300/3000))
    assert fuel_consumed(2000.0, 300.0, 3000.0) == pytest.approx(
        190.33, abs=0.01)
    assert fuel_consumed(2000.0, 0.0, 3000.0) == 0.0


def test_debris_record(debris21):
    d = debris21[0]
    assert isinstance(d, Debris)
    assert d.id == 1
    assert d.orbit.a == pytest.approx(EARTH.r_eq + 700.0e3)
    assert d.orbit.inc == pytest.approx(math.radians(97.0))
    assert d.weight == 1.0
    assert d.op_cost == 15.0


def test_orbit_validation():
    with pytest.raises(ValueError):
        CircularOrbit(a=-1.0, inc=1.0, raan0=0.0, epoch=0.0)
    with pytest.raises(ValueError):
        CircularOrbit(a=7.0e6, inc=4.0, raan0=0.0, epoch=0.0)
