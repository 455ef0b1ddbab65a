"""Elementary transfer optimization: pick the drift orbit closing the RAAN gap.

A leg departs debris 1 at t1 and must co-orbit debris 2 at the arrival
instant t2 - op_dwell (the trailing dwell is reserved for the debris
operations).  The free variables are the drift-orbit radius and
inclination; the constraint is that the natural J2 precession
accumulated on the way equals the RAAN gap, modulo full revolutions.

The 2-variable / 1-constraint problem reduces to one dimension: for a
fixed drift inclination and a fixed revolution count k, the required
mean precession rate is known, and the drift radius follows in closed
form from rate = C * a^(-7/2) * cos(I).  The remaining search over the
inclination is a bracketed scalar minimization of the leg delta-V.

Under low thrust the propelled spirals consume part of the window and
contribute their own RAAN drift, so the radius is obtained by a short
fixed-point iteration instead of a single closed-form evaluation.

Degenerate branches are tried as well: waiting on the initial orbit
until the planes align and transferring directly (drift orbit identical
to the debris 1 orbit, early arrival, waiting on the target orbit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.optimize import minimize_scalar

from .orbital import (EARTH, TWO_PI, CircularOrbit, Debris, EarthModel,
                      angle_diff, circular_velocity, propagate_raan, raan_rate)
from .impulsive import impulsive_leg
from .lowthrust import edelbaum_profile, raan_drift_along_profile

HIGH_THRUST = "high"
LOW_THRUST = "low"

_DEFAULT_INC_WINDOW = math.radians(3.0)
_RATE_MARGIN = 1.15      # slack on the achievable-rate band for k filtering
_FIXED_POINT_TOL = 1e-4  # rad, low-thrust constraint convergence
_MAX_FIXED_POINT = 20
_PENALTY = 1.0e12        # finite stand-in for infeasible points in searches


class InfeasibleTransferError(Exception):
    """No drift orbit within bounds meets the RAAN constraint in time."""


@dataclass(frozen=True)
class TransferProblem:
    debris_from: Debris
    debris_to: Debris
    t1: float
    t2: float
    mode: str = HIGH_THRUST
    r_min: float = EARTH.r_eq + 400e3
    r_max: float = EARTH.r_eq + 2000e3
    op_dwell: float = 0.0
    accel: float = 0.0035
    inc_window: float = _DEFAULT_INC_WINDOW
    raan_tol: float = 0.0   # 0 = equality mode; >0 allows |residual| <= tol
    n_samples: int = 200
    earth: EarthModel = field(default=EARTH)

    def __post_init__(self):
        if self.t2 <= self.t1:
            raise ValueError("t2 must exceed t1")
        if self.r_min >= self.r_max:
            raise ValueError("invalid drift radius bounds")
        if self.op_dwell < 0.0 or self.t2 - self.t1 <= self.op_dwell:
            raise ValueError("operation dwell must fit inside the leg")
        if self.mode not in (HIGH_THRUST, LOW_THRUST):
            raise ValueError(f"unknown propulsion mode {self.mode!r}")

    @property
    def t_arr(self) -> float:
        return self.t2 - self.op_dwell


@dataclass(frozen=True)
class TransferSolution:
    a_d: float
    i_d: float
    dv: float
    t_d1: float
    t_d2: float
    raan_residual: float
    branch: str              # 'forwards' | 'backwards' | 'wait'
    k: int                   # revolution count of the closed gap
    dv_parts: tuple          # per propelled phase
    propelled_durations: tuple


def _rate_coeff(earth: EarthModel) -> float:
    return -1.5 * earth.j2 * math.sqrt(earth.mu) * earth.r_eq**2


def _radius_for_rate(rate_req: float, inc: float,
                     earth: EarthModel) -> float | None:
    """Invert rate = C * a^(-7/2) * cos(I) for the radius; None if the
    required rate has the wrong sign for this inclination."""
    num = _rate_coeff(earth) * math.cos(inc)
    if rate_req == 0.0 or num / rate_req <= 0.0:
        return None
    return (num / rate_req) ** (2.0 / 7.0)


def _rate_band(problem: TransferProblem,
               i_lo: float, i_hi: float) -> tuple[float, float]:
    """Achievable precession-rate interval over the drift search box."""
    rates = [raan_rate(a, i, problem.earth)
             for a in (problem.r_min, problem.r_max)
             for i in (i_lo, i_hi)]
    if i_lo < 0.5 * math.pi < i_hi:
        rates.append(0.0)
    return min(rates), max(rates)


def _inc_range(problem: TransferProblem) -> tuple[float, float]:
    i1 = problem.debris_from.orbit.inc
    i2 = problem.debris_to.orbit.inc
    lo = max(min(i1, i2) - problem.inc_window, 0.0)
    hi = min(max(i1, i2) + problem.inc_window, math.pi)
    return lo, hi


def _leg_dv_ht(problem: TransferProblem, a_d: float, i_d: float):
    leg = impulsive_leg(problem.debris_from.orbit, (a_d, i_d),
                        problem.debris_to.orbit, problem.earth)
    return leg.total_dv, (leg.dv1 + leg.dv2, leg.dv3 + leg.dv4), (0.0, 0.0)


def _lt_phases(problem: TransferProblem, a_d: float, i_d: float):
    """Both spirals of a low-thrust leg for a given drift orbit."""
    o1 = problem.debris_from.orbit
    o2 = problem.debris_to.orbit
    p1 = edelbaum_profile((o1.a, o1.inc), (a_d, i_d), problem.accel,
                          problem.n_samples, problem.earth)
    p2 = edelbaum_profile((a_d, i_d), (o2.a, o2.inc), problem.accel,
                          problem.n_samples, problem.earth)
    return p1, p2


def raan_residual(problem: TransferProblem, a_d: float, i_d: float,
                  k: int | None = None) -> float:
    """RAAN constraint violation at the arrival instant (rad).

    With ``k`` unset the residual is wrapped into (-pi, pi]; otherwise
    it is measured against the gap unwrapped by ``k`` revolutions.
    """
    t_win = problem.t_arr - problem.t1
    o1 = problem.debris_from.orbit
    raan_v0 = propagate_raan(o1, problem.t1, problem.earth)
    if problem.mode == HIGH_THRUST:
        acc = raan_rate(a_d, i_d, problem.earth) * t_win
    else:
        p1, p2 = _lt_phases(problem, a_d, i_d)
        t_drift = t_win - p1.duration - p2.duration
        if t_drift < 0.0:
            raise ValueError("propelled spirals exceed the transfer window")
        acc = (raan_drift_along_profile(p1, problem.earth)
               + raan_rate(a_d, i_d, problem.earth) * t_drift
               + raan_drift_along_profile(p2, problem.earth))
    raan_target = propagate_raan(problem.debris_to.orbit, problem.t_arr,
                                 problem.earth)
    if k is None:
        return angle_diff(raan_v0 + acc, raan_target)
    gap = angle_diff(raan_target, raan_v0)
    return acc - (gap + TWO_PI * k)


def _k_candidates(problem: TransferProblem, gap: float,
                  i_lo: float, i_hi: float) -> list[int]:
    t_win = problem.t_arr - problem.t1
    lo, hi = _rate_band(problem, i_lo, i_hi)
    lo, hi = lo * _RATE_MARGIN if lo < 0 else lo / _RATE_MARGIN, \
        hi * _RATE_MARGIN if hi > 0 else hi / _RATE_MARGIN
    k_lo = math.ceil((lo * t_win - gap) / TWO_PI)
    k_hi = math.floor((hi * t_win - gap) / TWO_PI)
    return [k for k in range(k_lo, k_hi + 1) if abs(k) <= 50]


def _branch_label(problem: TransferProblem, rate_req: float) -> str:
    natural = raan_rate(problem.debris_from.orbit.a,
                        problem.debris_from.orbit.inc, problem.earth)
    return "forwards" if abs(rate_req) >= abs(natural) else "backwards"


def _solve_radius_lt(problem: TransferProblem, i_d: float, target: float):
    """Fixed-point solve of the drift radius for a low-thrust leg.

    ``target`` is the unwrapped RAAN change the vehicle must accumulate
    over the transfer window.  Returns (a_d, dv_parts, durations,
    residual) or None when infeasible.
    """
    t_win = problem.t_arr - problem.t1
    a = _radius_for_rate(target / t_win, i_d, problem.earth)
    if a is None:
        return None
    a = min(max(a, problem.r_min), problem.r_max)
    result = None
    for _ in range(_MAX_FIXED_POINT):
        p1, p2 = _lt_phases(problem, a, i_d)
        t_drift = t_win - p1.duration - p2.duration
        if t_drift <= 0.0:
            return None
        d1 = raan_drift_along_profile(p1, problem.earth)
        d2 = raan_drift_along_profile(p2, problem.earth)
        residual = (d1 + raan_rate(a, i_d, problem.earth) * t_drift + d2
                    - target)
        result = (a, (p1.dv, p2.dv), (p1.duration, p2.duration), residual)
        if abs(residual) < _FIXED_POINT_TOL:
            break
        rate_req = (target - d1 - d2) / t_drift
        a_new = _radius_for_rate(rate_req, i_d, problem.earth)
        if a_new is None:
            return None
        a = min(max(a_new, problem.r_min), problem.r_max)
    a, dv_parts, durs, residual = result
    if abs(residual) > max(problem.raan_tol, 1e-3):
        return None  # clamped at a bound, constraint unreachable
    return result


def _candidate_for(problem: TransferProblem, i_d: float, k: int, gap: float):
    """Best feasible drift orbit at a fixed inclination and revolution
    count; returns (dv, solution fields) or None."""
    t_win = problem.t_arr - problem.t1
    target0 = gap + TWO_PI * k

    if problem.mode == HIGH_THRUST:
        def eval_target(target: float):
            a = _radius_for_rate(target / t_win, i_d, problem.earth)
            if a is None or not problem.r_min <= a <= problem.r_max:
                return None
            dv, parts, durs = _leg_dv_ht(problem, a, i_d)
            return dv, a, parts, durs, target - target0
    else:
        def eval_target(target: float):
            sol = _solve_radius_lt(problem, i_d, target)
            if sol is None:
                return None
            a, parts, durs, residual = sol
            return (parts[0] + parts[1], a, parts, durs,
                    residual + (target - target0))

    best = eval_target(target0)
    if problem.raan_tol > 0.0:
        # exploit the tolerance band: the cheapest drift orbit may sit at
        # an offset gap within +/- raan_tol
        for target in (target0 - problem.raan_tol, target0 + problem.raan_tol):
            cand = eval_target(target)
            if cand is not None and (best is None or cand[0] < best[0]):
                best = cand
        if best is not None:
            # finite penalty keeps the bounded search numerically clean
            res = minimize_scalar(
                lambda tg: (eval_target(tg) or (_PENALTY,))[0],
                bounds=(target0 - problem.raan_tol,
                        target0 + problem.raan_tol),
                method="bounded", options={"xatol": problem.raan_tol * 1e-2})
            cand = eval_target(float(res.x))
            if cand is not None and cand[0] < best[0]:
                best = cand
    if best is None:
        return None
    dv, a, parts, durs, residual_off = best
    # residual relative to the exact (k-unwrapped) gap, including any
    # deliberate offset taken inside the tolerance band
    return dv, a, parts, durs, residual_off


def _scan_inclination(problem: TransferProblem, k: int, gap: float,
                      n_coarse: int = 21):
    """Coarse scan + bounded refinement of the inclination search."""
    i_lo, i_hi = _inc_range(problem)
    incs = [i_lo + (i_hi - i_lo) * j / (n_coarse - 1)
            for j in range(n_coarse)]
    evals = {}

    def dv_at(i_d: float) -> float:
        if i_d not in evals:
            evals[i_d] = _candidate_for(problem, i_d, k, gap)
        cand = evals[i_d]
        return _PENALTY if cand is None else cand[0]

    coarse = [(dv_at(i), i) for i in incs]
    best_dv, best_i = min(coarse)
    if best_dv >= _PENALTY:
        return None
    j = incs.index(best_i)
    lo = incs[max(j - 1, 0)]
    hi = incs[min(j + 1, n_coarse - 1)]
    if hi > lo:
        res = minimize_scalar(dv_at, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-5})
        if res.fun < min(best_dv, _PENALTY):
            best_dv, best_i = float(res.fun), float(res.x)
    cand = evals.get(best_i) or _candidate_for(problem, best_i, k, gap)
    if cand is None:
        return None
    dv, a, parts, durs, residual = cand
    return dv, a, best_i, parts, durs, residual


def _wait_candidate(problem: TransferProblem) -> TransferSolution | None:
    """Wait on the initial orbit, transfer directly when the planes
    align, then wait on the target orbit until the arrival instant."""
    o1 = problem.debris_from.orbit
    o2 = problem.debris_to.orbit
    earth = problem.earth
    delta = raan_rate(o1.a, o1.inc, earth) - raan_rate(o2.a, o2.inc, earth)

    if problem.mode == HIGH_THRUST:
        dv, parts, durs = _leg_dv_ht(problem, o1.a, o1.inc)
        trans_duration = 0.0
        draan_trans = 0.0
    else:
        prof = edelbaum_profile((o1.a, o1.inc), (o2.a, o2.inc),
                                problem.accel, problem.n_samples, earth)
        dv = prof.dv
        parts = (0.0, prof.dv)
        durs = (0.0, prof.duration)
        trans_duration = prof.duration
        draan_trans = raan_drift_along_profile(prof, earth)

    t_last = problem.t_arr - trans_duration
    if t_last < problem.t1:
        return None
    # alignment condition at the transfer start t_s:
    #   raan1(t_s) + draan_trans = raan2(t_s + trans_duration)  (mod 2*pi)
    g = angle_diff(propagate_raan(o2, problem.t1 + trans_duration, earth),
                   propagate_raan(o1, problem.t1, earth) + draan_trans)
    # residual(t_s) = -g + delta * (t_s - t1)  (mod 2*pi); find a zero
    if delta == 0.0:
        if abs(g) > max(problem.raan_tol, 1e-12):
            return None
        t_s = problem.t1
    else:
        span = delta * (t_last - problem.t1)
        j_lo = math.ceil(min(0.0, span) / TWO_PI - 0.5 - abs(g) / TWO_PI) - 1
        j_hi = math.floor(max(0.0, span) / TWO_PI + 0.5 + abs(g) / TWO_PI) + 1
        t_s = None
        for j in range(j_lo, j_hi + 1):
            cand = problem.t1 + (g + TWO_PI * j) / delta
            if problem.t1 <= cand <= t_last and \
                    (t_s is None or cand < t_s):
                t_s = cand
        if t_s is None:
            return None
    return TransferSolution(
        a_d=o1.a, i_d=o1.inc, dv=dv, t_d1=t_s, t_d2=t_s,
        raan_residual=0.0, branch="wait", k=0,
        dv_parts=parts, propelled_durations=durs)


def choose_branch(problem: TransferProblem) -> tuple[float, float, int]:
    """Initial drift-orbit guess and revolution count (Figure-9 logic).

    The revolution count whose required mean rate is closest to the
    natural precession of the starting orbit closes the gap "the short
    way"; the corresponding closed-form radius is the initial guess.
    """
    o1 = problem.debris_from.orbit
    gap = angle_diff(propagate_raan(problem.debris_to.orbit, problem.t_arr,
                                    problem.earth),
                     propagate_raan(o1, problem.t1, problem.earth))
    t_win = problem.t_arr - problem.t1
    natural = raan_rate(o1.a, o1.inc, problem.earth)
    k = round((natural * t_win - gap) / TWO_PI)
    a = _radius_for_rate((gap + TWO_PI * k) / t_win, o1.inc, problem.earth)
    if a is None:
        a = o1.a
    return min(max(a, problem.r_min), problem.r_max), o1.inc, k


def solve_transfer(problem: TransferProblem) -> TransferSolution:
    """Minimum delta-V drift orbit meeting the RAAN rendezvous constraint.

    All revolution-count branches whose required precession rate is
    achievable within the drift bounds are tried, plus the degenerate
    wait branch; the cheapest feasible solution wins.

    Raises InfeasibleTransferError when no branch is feasible.
    """
    o1 = problem.debris_from.orbit
    gap = angle_diff(propagate_raan(problem.debris_to.orbit, problem.t_arr,
                                    problem.earth),
                     propagate_raan(o1, problem.t1, problem.earth))
    t_win = problem.t_arr - problem.t1
    i_lo, i_hi = _inc_range(problem)

    solutions: list[TransferSolution] = []
    for k in _k_candidates(problem, gap, i_lo, i_hi):
        scan = _scan_inclination(problem, k, gap)
        if scan is None:
            continue
        dv, a_d, i_d, parts, durs, residual = scan
        rate_req = (gap + TWO_PI * k) / t_win
        solutions.append(TransferSolution(
            a_d=a_d, i_d=i_d, dv=dv,
            t_d1=problem.t1 + durs[0],
            t_d2=problem.t_arr - durs[1],
            raan_residual=residual,
            branch=_branch_label(problem, rate_req), k=k,
            dv_parts=parts, propelled_durations=durs))

    wait = _wait_candidate(problem)
    if wait is not None:
        solutions.append(wait)
    if not solutions:
        raise InfeasibleTransferError(
            f"no feasible drift orbit for debris "
            f"{problem.debris_from.id} -> {problem.debris_to.id} "
            f"in [{problem.t1}, {problem.t2}]")
    return min(solutions, key=lambda s: (s.dv, s.branch != "wait"))
