"""Circular-orbit dynamics under the J2 zonal perturbation.

All quantities are SI (meters, seconds, radians) and all orbits are
circular.  The only secular effect modelled is the nodal precession
driven by the Earth's equatorial bulge: the orbit radius and inclination
stay constant while the RAAN drifts linearly in time.

Sign convention: the precession rate is negative for prograde orbits
(inclination below 90 deg) and positive for retrograde ones, so the
near-polar sun-synchronous debris considered here all precess eastward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EarthModel:
    """Earth gravitational constants used by the precession model.

    Attributes
    ----------
    r_eq : equatorial radius (m)
    mu : gravitational parameter (m^3/s^2)
    j2 : first zonal harmonic coefficient (dimensionless)
    """

    r_eq: float = 6378137.0
    mu: float = 3.986005e14
    j2: float = 1.08266e-3

    def __post_init__(self):
        if self.r_eq <= 0.0 or self.mu <= 0.0:
            raise ValueError("Earth radius and mu must be positive")
        if not 0.0 < self.j2 < 0.01:
            raise ValueError(f"implausible J2 value {self.j2!r}")


EARTH = EarthModel()


def wrap_angle(theta: float) -> float:
    """Normalize an angle into [0, 2*pi)."""
    return theta % TWO_PI


def angle_diff(target: float, source: float) -> float:
    """Signed difference ``target - source`` wrapped into (-pi, pi]."""
    d = (target - source) % TWO_PI
    if d > math.pi:
        d -= TWO_PI
    return d


@dataclass(frozen=True)
class CircularOrbit:
    """A circular orbit frozen at an epoch of the mission clock.

    Attributes
    ----------
    a : semi-major axis measured from the Earth center (m)
    inc : inclination (rad)
    raan0 : RAAN at ``epoch`` (rad, normalized to [0, 2*pi))
    epoch : mission-clock time of ``raan0`` (s)
    """

    a: float
    inc: float
    raan0: float
    epoch: float = 0.0

    def __post_init__(self):
        if self.a <= EARTH.r_eq:
            raise ValueError(f"orbit radius {self.a} below Earth surface")
        if not 0.0 <= self.inc <= math.pi:
            raise ValueError(f"inclination {self.inc} outside [0, pi]")
        object.__setattr__(self, "raan0", wrap_angle(self.raan0))


@dataclass(frozen=True)
class Debris:
    """A candidate debris: orbit plus bookkeeping for the planner.

    ``op_cost`` is the cost of processing the debris once reached: a
    deorbit delta-V (m/s) when the vehicle performs the deorbit burn, or
    a kit mass (kg) when an autonomous deorbit kit is released.
    ``weight`` is a priority multiplier applied to edges arriving at
    this debris.
    """

    id: int
    orbit: CircularOrbit
    op_cost: float = 0.0
    weight: float = 1.0

    def __post_init__(self):
        if self.op_cost < 0.0:
            raise ValueError("op_cost must be >= 0")
        if self.weight <= 0.0:
            raise ValueError("weight must be > 0")


def raan_rate(a: float, inc: float, earth: EarthModel = EARTH) -> float:
    """Secular RAAN precession rate of a circular orbit (rad/s).

    rate = -(3/2) * J2 * sqrt(mu) * R_eq^2 * a^(-7/2) * cos(inc)
    """
    return (-1.5 * earth.j2 * math.sqrt(earth.mu) * earth.r_eq**2
            * a**-3.5 * math.cos(inc))


def orbit_raan_rate(orbit: CircularOrbit, earth: EarthModel = EARTH) -> float:
    return raan_rate(orbit.a, orbit.inc, earth)


def propagate_raan(orbit: CircularOrbit, t: float,
                   earth: EarthModel = EARTH) -> float:
    """RAAN of ``orbit`` at mission time ``t`` (rad, in [0, 2*pi)).

    The J2 perturbation leaves radius and inclination untouched, so the
    RAAN evolves linearly from the epoch value.
    """
    return wrap_angle(orbit.raan0 + orbit_raan_rate(orbit, earth)
                      * (t - orbit.epoch))


def circular_velocity(a: float, earth: EarthModel = EARTH) -> float:
    """Circular orbital speed sqrt(mu/a) (m/s)."""
    if a <= 0.0:
        raise ValueError("radius must be positive")
    return math.sqrt(earth.mu / a)


def fuel_consumed(m_start: float, dv: float, ve: float) -> float:
    """Propellant mass burned for an impulse ``dv`` (rocket equation).

    m_c = m_start * (1 - exp(-dv / ve))
    """
    if m_start <= 0.0:
        raise ValueError("initial mass must be positive")
    if ve <= 0.0:
        raise ValueError("exhaust velocity must be positive")
    if dv < 0.0:
        raise ValueError("delta-V must be non-negative")
    return m_start * (1.0 - math.exp(-dv / ve))
