"""Low-thrust transfer legs: Edelbaum spirals with yaw steering.

The Edelbaum model gives the minimum-time transfer between inclined
circular orbits under a constant acceleration ``f``.  With v0 and vf
the circular speeds of the boundary orbits and ``di`` the inclination
change, the closed form is

    dv      = sqrt(v0^2 - 2*v0*vf*cos(pi*di/2) + vf^2)
    duration = dv / f
    tan(b0) = sin(pi*di/2) / (v0/vf - cos(pi*di/2))

where b0 is the initial out-of-plane yaw angle.  Along the spiral the
velocity magnitude, yaw and accumulated inclination evolve analytically,
which yields the radius/inclination history a(t), I(t) needed to
integrate the J2 RAAN drift during the propelled phases.

A leg chains two spirals (start orbit -> drift orbit, then drift orbit
-> target orbit).  When a thrust/mass model is supplied each spiral is
re-solved once at the mass-averaged acceleration; with a bare mean
acceleration the refinement is a no-op.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .orbital import EARTH, EarthModel, CircularOrbit, circular_velocity

_HALF_PI = 0.5 * math.pi


def edelbaum_solve(v0: float, vf: float, di: float,
                   f: float) -> tuple[float, float, float]:
    """Closed-form Edelbaum transfer: returns ``(dv, duration, beta0)``.

    ``di`` is the magnitude of the inclination change (rad).
    """
    if f <= 0.0:
        raise ValueError("acceleration must be positive")
    if v0 <= 0.0 or vf <= 0.0:
        raise ValueError("circular speeds must be positive")
    di = abs(di)
    if di == 0.0:
        dv = abs(v0 - vf)
        return dv, dv / f, 0.0 if vf <= v0 else math.pi
    c = math.cos(_HALF_PI * di)
    s = math.sin(_HALF_PI * di)
    dv = math.sqrt(v0 * v0 - 2.0 * v0 * vf * c + vf * vf)
    beta0 = math.atan2(s, v0 / vf - c)
    return dv, dv / f, beta0


@dataclass(frozen=True)
class EdelbaumSolution:
    """One propelled spiral with its sampled radius/inclination history."""

    dv: float
    duration: float
    beta0: float
    times: np.ndarray  # s, relative to the spiral start
    radii: np.ndarray  # m
    incs: np.ndarray   # rad


def edelbaum_profile(o1: tuple[float, float], o2: tuple[float, float],
                     f: float, n_samples: int = 200,
                     earth: EarthModel = EARTH) -> EdelbaumSolution:
    """Sampled evolution of a(t), I(t) along the Edelbaum spiral.

    ``o1`` and ``o2`` are (radius, inclination) pairs.  The velocity
    magnitude along the spiral is

        V(t) = sqrt(v0^2 - 2*v0*f*t*cos(b0) + f^2 t^2)

    and the accumulated inclination change follows the yaw-steering law

        dI(t) = (2/pi) * [atan2(f*t - v0*cos(b0), v0*sin(b0)) + pi/2 - b0]

    The radius history is recovered from a(t) = mu / V(t)^2.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 profile samples")
    a1, i1 = o1
    a2, i2 = o2
    v0 = circular_velocity(a1, earth)
    vf = circular_velocity(a2, earth)
    di = i2 - i1
    dv, duration, beta0 = edelbaum_solve(v0, vf, abs(di), f)
    t = np.linspace(0.0, duration, n_samples)
    if duration == 0.0:
        return EdelbaumSolution(0.0, 0.0, beta0, t,
                                np.full(n_samples, a1),
                                np.full(n_samples, i1))
    sb = math.sin(beta0)
    cb = math.cos(beta0)
    v = np.sqrt(v0 * v0 - 2.0 * v0 * f * cb * t + (f * t) ** 2)
    radii = earth.mu / (v * v)
    if di == 0.0 or sb == 0.0:
        incs = np.full(n_samples, i1)
    else:
        acc = (2.0 / math.pi) * (np.arctan2(f * t - v0 * cb, v0 * sb)
                                 + _HALF_PI - beta0)
        incs = i1 + math.copysign(1.0, di) * acc
        # pin endpoints against round-off so profiles close exactly
        incs[0] = i1
        incs[-1] = i2
    radii[0] = a1
    radii[-1] = a2
    return EdelbaumSolution(dv, duration, beta0, t, radii, incs)


def raan_drift_along_profile(profile: EdelbaumSolution,
                             earth: EarthModel = EARTH) -> float:
    """Trapezoidal integral of the J2 precession rate along a spiral (rad)."""
    if profile.duration == 0.0:
        return 0.0
    rates = (-1.5 * earth.j2 * math.sqrt(earth.mu) * earth.r_eq**2
             * profile.radii**-3.5 * np.cos(profile.incs))
    return float(np.trapezoid(rates, profile.times))


@dataclass(frozen=True)
class LowThrustLeg:
    """Two propelled spirals around a drift phase."""

    dv1: float
    dv2: float
    duration1: float
    duration2: float
    draan1: float  # RAAN drift accumulated during spiral 1 (rad)
    draan2: float

    @property
    def total_dv(self) -> float:
        return self.dv1 + self.dv2

    @property
    def propelled_duration(self) -> float:
        return self.duration1 + self.duration2


def lowthrust_leg(orbit1: CircularOrbit, drift: tuple[float, float],
                  orbit2: CircularOrbit, f0: float,
                  mass_model: tuple[float, float, float] | None = None,
                  n_samples: int = 200,
                  max_duration: float | None = None,
                  earth: EarthModel = EARTH) -> LowThrustLeg:
    """Solve both propelled phases of a low-thrust leg.

    ``mass_model`` is an optional (thrust N, start mass kg, exhaust
    velocity m/s) triple.  When given, each spiral is solved twice:
    first at the vehicle's current acceleration, then at the
    acceleration averaged over the propellant burned in the first pass
    (f_avg = thrust / mean mass).  With a bare ``f0`` the second stage
    is a no-op.  ``max_duration`` caps the combined propelled time;
    exceeding it raises ValueError since no drift time would remain in
    the allotted leg.
    """
    phases = []
    start = (orbit1.a, orbit1.inc)
    m_current = mass_model[1] if mass_model is not None else None
    for target in (drift, (orbit2.a, orbit2.inc)):
        if mass_model is None:
            prof = edelbaum_profile(start, target, f0, n_samples, earth)
        else:
            thrust, _, ve = mass_model
            f_start = thrust / m_current
            prof = edelbaum_profile(start, target, f_start, n_samples, earth)
            if prof.duration > 0.0:
                burned = thrust / ve * prof.duration
                m_end = max(m_current - burned, 1e-6)
                f_avg = thrust / (0.5 * (m_current + m_end))
                prof = edelbaum_profile(start, target, f_avg, n_samples, earth)
                m_current = max(m_current - thrust / ve * prof.duration, 1e-6)
        phases.append(prof)
        start = target
    p1, p2 = phases
    if max_duration is not None and p1.duration + p2.duration > max_duration:
        raise ValueError("propelled durations exceed the allotted leg time")
    return LowThrustLeg(
        dv1=p1.dv, dv2=p2.dv,
        duration1=p1.duration, duration2=p2.duration,
        draan1=raan_drift_along_profile(p1, earth),
        draan2=raan_drift_along_profile(p2, earth),
    )
