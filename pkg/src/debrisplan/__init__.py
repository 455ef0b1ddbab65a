"""Mission planner for multi-mission space-debris removal.

Three-stage pipeline: precompute a mesh of minimum delta-V transfer
costs between all debris pairs (J2 drift-orbit strategy, high or low
thrust), anneal the debris ordering and rendezvous dates against the
interpolated cost surface, then re-optimize dates and drift orbits per
mission against the true transfer model.
"""

__version__ = "0.1.0"

from .orbital import (EARTH, CircularOrbit, Debris, EarthModel, angle_diff,
                      circular_velocity, fuel_consumed, propagate_raan,
                      raan_rate)

__all__ = ["EARTH", "CircularOrbit", "Debris", "EarthModel", "angle_diff",
           "circular_velocity", "fuel_consumed", "propagate_raan",
           "raan_rate", "__version__"]
