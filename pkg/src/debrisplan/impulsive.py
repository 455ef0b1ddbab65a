"""High-thrust transfer legs: two Hohmann transfers with split plane change.

A leg goes from the starting orbit to a circular drift orbit and later
from the drift orbit to the target orbit.  Each hop is a two-impulse
Hohmann transfer whose plane change is shared between the two burns.
The share is chosen by minimizing the sum of the *squared* impulses,
which admits a closed form and stays within a fraction of a m/s of the
true minimum-sum split for the small plane changes met here.

Burn magnitudes combine the before/after velocity vectors by the law of
cosines: dv = sqrt(va^2 + vb^2 - 2*va*vb*cos(delta_i)).

Hohmann durations (half the transfer-ellipse period, about an hour) are
exposed for information but are negligible against drift durations of
days to months, so callers ignore them in RAAN bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .orbital import EARTH, EarthModel, CircularOrbit


def _burn(va: float, vb: float, di: float) -> float:
    # law-of-cosines combination; abs() guards tiny negative round-off
    return math.sqrt(abs(va * va + vb * vb - 2.0 * va * vb * math.cos(di)))


def hohmann_split(r1: float, i1: float, r2: float, i2: float,
                  earth: EarthModel = EARTH) -> tuple[float, float, float]:
    """Two-impulse Hohmann transfer with optimally split plane change.

    Returns ``(dv_a, dv_b, s)`` where the first burn carries a fraction
    ``s`` of the total inclination change and the second the rest.

    The split minimizes dv_a^2 + dv_b^2.  Writing rho for the ratio of
    the velocity products at the two burns, the stationarity condition
    v1*vp*sin(s*di) = va*v2*sin((1-s)*di) solves in closed form:
    tan(s*di) = rho*sin(di) / (1 + rho*cos(di)).
    """
    if r1 <= 0.0 or r2 <= 0.0:
        raise ValueError("radii must be positive")
    mu = earth.mu
    a_t = 0.5 * (r1 + r2)
    v1 = math.sqrt(mu / r1)
    v2 = math.sqrt(mu / r2)
    vp = math.sqrt(mu * (2.0 / r1 - 1.0 / a_t))  # ellipse speed at r1
    va = math.sqrt(mu * (2.0 / r2 - 1.0 / a_t))  # ellipse speed at r2
    di = abs(i2 - i1)
    if di == 0.0:
        return abs(vp - v1), abs(v2 - va), 0.5
    rho = (va * v2) / (v1 * vp)
    s = math.atan2(rho * math.sin(di), 1.0 + rho * math.cos(di)) / di
    s = min(max(s, 0.0), 1.0)
    return _burn(v1, vp, s * di), _burn(va, v2, (1.0 - s) * di), s


def hohmann_duration(r1: float, r2: float, earth: EarthModel = EARTH) -> float:
    """Half the transfer-ellipse period (s)."""
    a_t = 0.5 * (r1 + r2)
    return math.pi * math.sqrt(a_t**3 / earth.mu)


@dataclass(frozen=True)
class ImpulsiveLeg:
    """The four burns of a high-thrust leg via a drift orbit."""

    dv1: float
    dv2: float
    dv3: float
    dv4: float
    i_mid_a: float  # intermediate-ellipse inclination, first Hohmann pair
    i_mid_b: float  # same for the second pair
    duration_a: float  # first Hohmann duration (s), excluded from RAAN bookkeeping
    duration_b: float

    @property
    def total_dv(self) -> float:
        return self.dv1 + self.dv2 + self.dv3 + self.dv4


def impulsive_leg(orbit1: CircularOrbit, drift: tuple[float, float],
                  orbit2: CircularOrbit,
                  earth: EarthModel = EARTH) -> ImpulsiveLeg:
    """Compose the two Hohmann hops of a high-thrust leg.

    ``drift`` is the (radius, inclination) of the intermediate circular
    drift orbit.  A drift identical to ``orbit1`` degenerates into the
    single direct Hohmann pair toward ``orbit2``.
    """
    a_d, i_d = drift
    dv1, dv2, s1 = hohmann_split(orbit1.a, orbit1.inc, a_d, i_d, earth)
    dv3, dv4, s2 = hohmann_split(a_d, i_d, orbit2.a, orbit2.inc, earth)
    return ImpulsiveLeg(
        dv1=dv1, dv2=dv2, dv3=dv3, dv4=dv4,
        i_mid_a=orbit1.inc + s1 * (i_d - orbit1.inc),
        i_mid_b=i_d + s2 * (orbit2.inc - i_d),
        duration_a=hohmann_duration(orbit1.a, a_d, earth),
        duration_b=hohmann_duration(a_d, orbit2.a, earth),
    )
