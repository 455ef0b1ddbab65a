"""Stage-3 continuous refinement of an annealed mission plan.

The debris order and the mission endpoint dates are frozen; the
intermediate rendezvous dates and every leg's drift orbit are
re-optimized against the true transfer model (no response surface).
The RAAN rendezvous constraint is relaxed to an inequality band
(1 degree by default), matching the accuracy actually needed to start
the terminal rendezvous.

Date optimization is coordinate descent: each intermediate date in
turn is minimized by a bounded scalar search over its bracketing
interval, re-solving the two adjacent legs per evaluation; sweeps
repeat until the mission delta-V improves by less than a threshold.
The starting point is the annealed date vector, so the refined cost
never exceeds the true-model cost at the annealed dates.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .drift import (InfeasibleTransferError, TransferProblem,
                    TransferSolution, solve_transfer)
from .mesh import KIT_DEORBIT, VEHICLE_DEORBIT
from .orbital import Debris, fuel_consumed

_BIG = 1.0e12


class InfeasibleMissionError(Exception):
    def __init__(self, mission_index: int, leg_index: int, detail: str = ""):
        self.mission_index = mission_index
        self.leg_index = leg_index
        super().__init__(
            f"mission {mission_index} leg {leg_index} infeasible{detail}")


@dataclass(frozen=True)
class RefineConfig:
    problem_template: TransferProblem   # carries mode/bounds/dwell/accel/tol
    deorbit_option: str = VEHICLE_DEORBIT
    sweep_tol: float = 0.5              # m/s, stop threshold per sweep
    max_sweeps: int = 10
    date_atol: float = 0.25 * 86400.0   # s, scalar-search tolerance
    vehicle_mass: float | None = None   # kg at each mission start
    exhaust_velocity: float | None = None


@dataclass(frozen=True)
class Leg:
    debris_id: int
    date: float                     # rendezvous date at the arrival debris
    dv: float
    transfer: TransferSolution | None   # None for the mission-opening leg


@dataclass(frozen=True)
class Mission:
    legs: tuple
    total_dv: float
    fuel_used: float | None = None
    final_mass: float | None = None
    mass_ok: bool = True


@dataclass(frozen=True)
class MissionPlan:
    missions: tuple
    max_mission_dv: float

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "max_mission_dv": self.max_mission_dv,
            "missions": [
                {
                    "total_dv": mi.total_dv,
                    "fuel_used": mi.fuel_used,
                    "final_mass": mi.final_mass,
                    "mass_ok": mi.mass_ok,
                    "legs": [
                        {
                            "debris_id": leg.debris_id,
                            "date": leg.date,
                            "dv": leg.dv,
                            "drift_a": (leg.transfer.a_d
                                        if leg.transfer else None),
                            "drift_inc": (leg.transfer.i_d
                                          if leg.transfer else None),
                            "t_d1": (leg.transfer.t_d1
                                     if leg.transfer else None),
                            "t_d2": (leg.transfer.t_d2
                                     if leg.transfer else None),
                            "branch": (leg.transfer.branch
                                       if leg.transfer else None),
                            "raan_residual": (leg.transfer.raan_residual
                                              if leg.transfer else None),
                        }
                        for leg in mi.legs
                    ],
                }
                for mi in self.missions
            ],
        }


def _solve_leg(config: RefineConfig, d_from: Debris, d_to: Debris,
               t1: float, t2: float) -> TransferSolution | None:
    if t2 - t1 <= config.problem_template.op_dwell:
        return None
    problem = replace(config.problem_template, debris_from=d_from,
                      debris_to=d_to, t1=t1, t2=t2)
    try:
        return solve_transfer(problem)
    except (InfeasibleTransferError, ValueError):
        return None


def _mission_cost(config: RefineConfig, debris_seq: list[Debris],
                  dates: np.ndarray):
    """Solve every leg at the given dates; returns (total, solutions)."""
    sols = []
    total = 0.0
    for p in range(len(debris_seq) - 1):
        sol = _solve_leg(config, debris_seq[p], debris_seq[p + 1],
                         float(dates[p]), float(dates[p + 1]))
        sols.append(sol)
        total += sol.dv if sol is not None else _BIG
    if config.deorbit_option == VEHICLE_DEORBIT:
        total += sum(d.weight * d.op_cost for d in debris_seq)
    return total, sols


def refine_mission(debris_seq: list[Debris], dates,
                   config: RefineConfig) -> tuple[np.ndarray, float, list]:
    """Re-optimize the intermediate rendezvous dates of one mission.

    ``dates`` is the annealed date vector (one per debris, endpoints
    frozen).  Returns the refined dates, the mission delta-V and the
    per-leg transfer solutions.  The result never costs more than the
    input dates under the true model.
    """
    n = len(debris_seq)
    dates = np.asarray(dates, dtype=float).copy()
    if dates.size != n:
        raise ValueError("one date per debris required")
    best_total, best_sols = _mission_cost(config, debris_seq, dates)
    dwell = config.problem_template.op_dwell
    margin = dwell + 3600.0

    for _ in range(config.max_sweeps):
        start_total = best_total
        for idx in range(1, n - 1):
            lo = float(dates[idx - 1]) + margin
            hi = float(dates[idx + 1]) - margin
            if hi <= lo:
                continue
            d_prev, d_here, d_next = (debris_seq[idx - 1], debris_seq[idx],
                                      debris_seq[idx + 1])

            def two_legs(t: float) -> float:
                s1 = _solve_leg(config, d_prev, d_here,
                                float(dates[idx - 1]), t)
                s2 = _solve_leg(config, d_here, d_next,
                                t, float(dates[idx + 1]))
                a = s1.dv if s1 is not None else _BIG
                b = s2.dv if s2 is not None else _BIG
                return a + b

            res = minimize_scalar(two_legs, bounds=(lo, hi),
                                  method="bounded",
                                  options={"xatol": config.date_atol})
            cand = dates.copy()
            cand[idx] = float(res.x)
            cand_total, cand_sols = _mission_cost(config, debris_seq, cand)
            if cand_total < best_total:
                dates = cand
                best_total, best_sols = cand_total, cand_sols
        if start_total - best_total < config.sweep_tol:
            break

    return dates, best_total, best_sols


def _fuel_ledger(config: RefineConfig, debris_seq: list[Debris],
                 sols: list):
    """Propellant walk of one mission; kit masses are released on arrival."""
    if config.vehicle_mass is None or config.exhaust_velocity is None:
        return None, None, True
    mass = config.vehicle_mass
    ve = config.exhaust_velocity
    fuel = 0.0

    def burn(dv):
        nonlocal mass, fuel
        used = fuel_consumed(mass, dv, ve)
        mass -= used
        fuel += used

    for p, deb in enumerate(debris_seq):
        if p > 0:
            sol = sols[p - 1]
            if sol is not None:
                burn(sol.dv)
        if config.deorbit_option == VEHICLE_DEORBIT:
            burn(deb.op_cost)
        else:
            mass -= deb.op_cost  # kit mass released to the debris
    return fuel, mass, mass > 0.0


def _refine_one(args):
    mission_index, debris_seq, dates, config = args
    ref_dates, total, sols = refine_mission(debris_seq, dates, config)
    for p, sol in enumerate(sols):
        if sol is None:
            raise InfeasibleMissionError(mission_index, p)
    fuel, final_mass, mass_ok = _fuel_ledger(config, debris_seq, sols)
    legs = [Leg(debris_id=debris_seq[0].id, date=float(ref_dates[0]),
                dv=0.0, transfer=None)]
    for p, sol in enumerate(sols):
        legs.append(Leg(debris_id=debris_seq[p + 1].id,
                        date=float(ref_dates[p + 1]),
                        dv=sol.dv, transfer=sol))
    return Mission(legs=tuple(legs), total_dv=total, fuel_used=fuel,
                   final_mass=final_mass, mass_ok=mass_ok)


def refine_program(order, dates, debris: list[Debris], m: int, n: int,
                   config: RefineConfig, workers: int = 1) -> MissionPlan:
    """Refine all m missions of an annealed program.

    ``order`` holds debris indices into ``debris``; only the first m*n
    positions form the program.  Missions are independent and may be
    refined concurrently; the result does not depend on ``workers``.
    """
    order = np.asarray(order)
    dates = np.asarray(dates, dtype=float)
    tasks = []
    for mi in range(m):
        sl = slice(mi * n, (mi + 1) * n)
        seq = [debris[int(i)] for i in order[sl]]
        tasks.append((mi, seq, dates[sl].copy(), config))
    if workers <= 1:
        missions = [_refine_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            missions = list(pool.map(_refine_one, tasks))
    return MissionPlan(missions=tuple(missions),
                       max_mission_dv=max(mi.total_dv for mi in missions))
