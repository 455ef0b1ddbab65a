"""Simulated annealing over debris order and rendezvous dates.

The state is a single path visiting all N candidate debris plus one
strictly increasing date per node; only the first m*n positions are
costed, split into m sub-paths of n debris.  The program cost is the
cost of the most expensive sub-path, each sub-path summing its edge
costs read off the interpolated cost mesh.

Each try perturbs the path with one random elementary move (insertion,
swap or leg reversal) followed by one random date shift, and accepts
the result with the Metropolis probability.  Cooling is geometric; the
initial temperature is calibrated for a 90 percent acceptance of a
random perturbation of the starting solution.  When the best cost
stalls for a configurable number of temperature levels, an exhaustive
local search is attempted; the run resumes from an improvement or
stops.  The best-ever solution is returned.

The per-level inner loop runs in the kernels backend; one annealing
chain is strictly sequential and reproducible from its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .mesh import VEHICLE_DEORBIT, CostMesh
from .orbital import Debris

_LN09 = -math.log(0.9)
PATH_MOVES = ("insertion", "swap", "reversal")


@dataclass(frozen=True)
class TrialSolution:
    """Permutation of debris indices plus the rendezvous dates."""

    order: np.ndarray  # int64, permutation of 0..N-1
    dates: np.ndarray  # float64, strictly increasing

    def __post_init__(self):
        order = np.ascontiguousarray(self.order, dtype=np.int64)
        dates = np.ascontiguousarray(self.dates, dtype=np.float64)
        if order.shape != dates.shape or order.ndim != 1:
            raise ValueError("order and dates must be equal-length vectors")
        if not np.array_equal(np.sort(order), np.arange(order.size)):
            raise ValueError("order is not a permutation")
        if not np.all(np.diff(dates) > 0.0):
            raise ValueError("dates must be strictly increasing")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "dates", dates)

    def copy(self) -> "TrialSolution":
        return TrialSolution(self.order.copy(), self.dates.copy())


@dataclass(frozen=True)
class Schedule:
    """Cooling schedule and budget of one annealing chain."""

    alpha: float = 0.999
    tries_per_level: int = 1000
    stagnation_levels: int = 50
    max_tries: int = 200_000_000
    seed: int = 0
    t0_temp: float | None = None  # None -> 90%-acceptance calibration
    temp_floor: float = 1e-9

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        if self.tries_per_level < 1:
            raise ValueError("tries_per_level must be >= 1")


@dataclass(frozen=True)
class PlanResult:
    best: TrialSolution
    cost: float                   # max sub-path cost K
    mission_costs: np.ndarray     # K_i per mission
    trace: list                   # (temperature, acceptance rate, best K)
    n_tries: int


@dataclass(frozen=True)
class CostSurface:
    """Mesh arrays plus edge-cost options, ready for the kernels."""

    costs: np.ndarray
    taxis: np.ndarray
    daxis: np.ndarray
    op_add: np.ndarray
    weights: np.ndarray
    sentinel: float
    t_lo: float
    t_hi: float

    @classmethod
    def from_mesh(cls, mesh: CostMesh, debris: list[Debris],
                  deorbit_option: str = VEHICLE_DEORBIT) -> "CostSurface":
        ids = [d.id for d in debris]
        if tuple(ids) != tuple(mesh.debris_ids):
            raise ValueError("debris list does not match mesh ordering")
        n = len(debris)
        diag = mesh.costs[0, 0, np.arange(n), np.arange(n)].copy()
        op_add = diag if deorbit_option == VEHICLE_DEORBIT else np.zeros(n)
        return cls(
            costs=np.ascontiguousarray(mesh.costs),
            taxis=np.ascontiguousarray(mesh.grid.dates),
            daxis=np.ascontiguousarray(mesh.grid.durations),
            op_add=np.ascontiguousarray(op_add),
            weights=np.ascontiguousarray([d.weight for d in debris],
                                         dtype=float),
            sentinel=mesh.sentinel,
            t_lo=mesh.grid.t0,
            t_hi=mesh.grid.t_end,
        )

    @property
    def n_debris(self) -> int:
        return self.weights.size


def evaluate_path(sol: TrialSolution, surface: CostSurface,
                  m: int, n: int) -> tuple[float, np.ndarray]:
    """Program cost K and the per-mission costs K_i."""
    if m * n > sol.order.size:
        raise ValueError("m*n exceeds the number of candidates")
    k_out = np.empty(m)
    cost = kernels.evaluate_path(
        surface.costs, surface.taxis, surface.daxis, surface.op_add,
        surface.weights, sol.order, sol.dates, m, n, surface.sentinel, k_out)
    return cost, k_out


def apply_move(sol: TrialSolution, kind: str,
               rng: np.random.Generator,
               t_lo: float | None = None,
               t_hi: float | None = None) -> TrialSolution:
    """One elementary perturbation; returns a new valid solution.

    Path moves keep the date vector; a date shift keeps the shifted
    date strictly between its neighbours (falling back to ``t_lo`` /
    ``t_hi`` at the path ends).
    """
    order = sol.order.copy()
    dates = sol.dates.copy()
    big = order.size
    if kind == "date_shift":
        p = int(rng.random() * big)
        lo = dates[p - 1] if p > 0 else (t_lo if t_lo is not None
                                         else dates[0] - 1.0)
        hi = dates[p + 1] if p < big - 1 else (t_hi if t_hi is not None
                                               else dates[-1] + 1.0)
        cand = lo + rng.random() * (hi - lo)
        if lo < cand < hi:
            dates[p] = cand
    elif kind in PATH_MOVES:
        from .kernels import _pure
        p = int(rng.random() * big)
        q = int(rng.random() * big)
        _pure._apply_path_move(order, PATH_MOVES.index(kind), p, q)
    else:
        raise ValueError(f"unknown move kind {kind!r}")
    return TrialSolution(order, dates)


def accept(f_new: float, f_old: float, temperature: float,
           rng: np.random.Generator) -> bool:
    """Metropolis acceptance rule."""
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    if f_new <= f_old:
        return True
    return rng.random() < math.exp(-(f_new - f_old) / temperature)


def _random_try(sol: TrialSolution, surface: CostSurface,
                rng: np.random.Generator) -> TrialSolution:
    """The composed per-try perturbation: path move then date shift."""
    kind = PATH_MOVES[int(rng.random() * 3)]
    out = apply_move(sol, kind, rng)
    return apply_move(out, "date_shift", rng, surface.t_lo, surface.t_hi)


def initial_temperature(sol: TrialSolution, surface: CostSurface,
                        m: int, n: int, rng: np.random.Generator,
                        n_samples: int = 100,
                        floor: float = 1.0) -> float:
    """Temperature accepting a random perturbation with 90% probability.

    T0 = (mean positive degradation) / -ln(0.9); the floor applies when
    every sampled move improves.  Degradations caused by stepping onto
    an infeasible (sentinel) edge are excluded: they must stay rejected
    at any temperature, and letting them into the average would scale
    the chain to the sentinel magnitude instead of the delta-V scale.
    """
    f0, _ = evaluate_path(sol, surface, m, n)
    cap = 0.5 * surface.sentinel
    degradations = []
    for _ in range(n_samples):
        f, _ = evaluate_path(_random_try(sol, surface, rng), surface, m, n)
        if 0.0 < f - f0 < cap:
            degradations.append(f - f0)
    if not degradations:
        return floor
    return max(sum(degradations) / len(degradations) / _LN09, floor)


def _linspace_dates(t_lo: float, t_hi: float, count: int) -> np.ndarray:
    return np.linspace(t_lo, t_hi, count)


def _initial_dates(t_lo: float, t_hi: float, count: int,
                   used: int) -> np.ndarray:
    """Strictly increasing start dates giving the program positions
    (the first ``used``) nearly the full window; any unused trailing
    positions are packed into a short tail."""
    if used >= count:
        return _linspace_dates(t_lo, t_hi, count)
    t_cut = t_lo + 0.95 * (t_hi - t_lo)
    head = np.linspace(t_lo, t_cut, used)
    tail = np.linspace(t_cut, t_hi, count - used + 1)[1:]
    return np.concatenate([head, tail])


def _path_sum(surface: CostSurface, order: np.ndarray,
              dates: np.ndarray) -> float:
    """Total cost of a single open path (greedy-construction metric)."""
    k_out = np.empty(1)
    return kernels.evaluate_path(
        surface.costs, surface.taxis, surface.daxis, surface.op_add,
        surface.weights, order, dates, 1, order.size, surface.sentinel,
        k_out)


def _insertion_order(surface: CostSurface) -> np.ndarray:
    """Best-insertion path over all candidates with evenly spread dates."""
    big = surface.n_debris
    path = [0]
    for deb in range(1, big):
        best_pos, best_cost = 0, math.inf
        for pos in range(len(path) + 1):
            cand = np.array(path[:pos] + [deb] + path[pos:], dtype=np.int64)
            # dates spread over the final window so early partial paths
            # see the same time scale as the finished one
            dates = _linspace_dates(surface.t_lo, surface.t_hi, cand.size)
            cost = _path_sum(surface, cand, dates)
            if cost < best_cost:
                best_pos, best_cost = pos, cost
        path.insert(best_pos, deb)
    return np.array(path, dtype=np.int64)


class _DateProgrammer:
    """Optimal grid-date assignment for a fixed debris order.

    Dates are restricted to a uniform lattice spanning the program
    window.  For one mission the minimum cost reaching each lattice
    date is a simple forward recursion over the legs (each leg advances
    between the shortest and the longest mesh duration).  Missions
    chain through a shared deadline: a binary search on the worst
    allowed mission cost, with each mission ending as early as its cap
    permits, yields the minimax date assignment.

    Edge-cost vectors are cached per debris pair, so evaluating many
    candidate orders against the same surface is cheap.  All costs are
    read off the same weighted-corner bilinear interpolation the
    annealer uses.
    """

    _PROBE_CAP = 1.0e8

    def __init__(self, surface: CostSurface, m: int, n: int):
        self.surface = surface
        self.m = m
        self.n = n
        span = surface.t_hi - surface.t_lo
        d_min = float(surface.daxis[0])
        step = min(4.0 * 86400.0, d_min)
        step = max(step, span / 600.0, 1.0)
        self.step = step
        lattice = np.arange(surface.t_lo, surface.t_hi + 0.5 * step, step)
        self.lattice = lattice[lattice <= surface.t_hi + 1e-6]
        self.nl = self.lattice.size
        o_min = max(1, int(round(d_min / step)))
        o_max = max(o_min, int(round(float(surface.daxis[-1]) / step)))
        self.offsets = np.arange(o_min, min(o_max, self.nl - 1) + 1)
        self._edges: dict[tuple[int, int], np.ndarray] = {}

    def _edge(self, i: int, j: int) -> np.ndarray:
        """edge[oi, a]: weighted leg cost from lattice[a], offsets[oi] wide."""
        cached = self._edges.get((i, j))
        if cached is not None:
            return cached
        s = self.surface
        arr = np.full((self.offsets.size, self.nl), np.inf)
        for oi, o in enumerate(self.offsets):
            na = self.nl - o
            if na <= 0:
                continue
            c = _interp_vec(s, i, j, self.lattice[:na],
                            np.full(na, o * self.step))
            arr[oi, :na] = np.where(c >= s.sentinel, np.inf,
                                    s.weights[j] * (c + s.op_add[j]))
        self._edges[(i, j)] = arr
        return arr

    def _mission_curves(self, seq, start_idx: int) -> list[np.ndarray]:
        """cur[pos][b]: min cost of the sub-path up to position pos
        arriving at lattice[b], starting no earlier than start_idx."""
        first = seq[0]
        cur = np.full(self.nl, np.inf)
        cur[start_idx:] = self.surface.weights[first] \
            * self.surface.op_add[first]
        kept = [cur]
        for p in range(len(seq) - 1):
            arr = self._edge(seq[p], seq[p + 1])
            nxt = np.full(self.nl, np.inf)
            for oi, o in enumerate(self.offsets):
                na = self.nl - o
                if na <= 0:
                    continue
                np.minimum(nxt[o:], cur[:na] + arr[oi, :na], out=nxt[o:])
            kept.append(nxt)
            cur = nxt
        return kept

    def _chain(self, blocks, cap: float, memo: dict):
        """Earliest-ending mission chain with every mission cost <= cap.

        ``memo`` caches mission curves per (sub-path, start) across the
        cap bisection; the same curves recur for most cap values.
        """
        start = 0
        out = []
        for seq in blocks:
            key = (id(seq), start)
            kept = memo.get(key)
            if kept is None:
                kept = self._mission_curves(seq, start)
                memo[key] = kept
            ok = np.where(kept[-1] <= cap)[0]
            if ok.size == 0:
                return None
            end = int(ok[0])
            out.append((kept, end))
            start = end + 1
        return out

    def solve(self, order: np.ndarray, want_dates: bool = False,
              iters: int = 16):
        """Minimax grid-date assignment for ``order``.

        Returns (dates, K): the program dates for the first m*n
        positions (or None when infeasible / not requested) and the
        max mission cost over the lattice.
        """
        blocks = [list(order[mi * self.n:(mi + 1) * self.n])
                  for mi in range(self.m)]
        memo: dict = {}
        good = self._chain(blocks, self._PROBE_CAP, memo)
        if good is None:
            return None, math.inf
        hi = max(float(kept[-1][end]) for kept, end in good)
        lo = 0.0
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            trial = self._chain(blocks, mid, memo)
            if trial is None:
                lo = mid
            else:
                hi = mid
                good = trial
        cost = max(float(kept[-1][end]) for kept, end in good)
        if not want_dates:
            return None, cost
        dates = np.empty(self.m * self.n)
        for mi, (kept, end) in enumerate(good):
            seq = blocks[mi]
            idx = self._backtrack(seq, kept, end)
            if idx is None:
                return None, math.inf
            dates[mi * self.n:(mi + 1) * self.n] = self.lattice[idx]
        return dates, cost

    def _backtrack(self, seq, kept, end: int):
        idx = [end]
        for p in range(len(seq) - 2, -1, -1):
            b = idx[0]
            arr = self._edge(seq[p], seq[p + 1])
            prev = kept[p]
            target = kept[p + 1][b]
            for oi, o in enumerate(self.offsets):
                a = b - o
                if a < 0:
                    continue
                if (np.isfinite(prev[a]) and np.isfinite(arr[oi, a])
                        and abs(prev[a] + arr[oi, a] - target) < 1e-6):
                    idx.insert(0, a)
                    break
            else:
                return None
        return np.array(idx)


def _interp_vec(surface: CostSurface, i: int, j: int,
                t: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Vectorized weighted-corner bilinear read of the (i, j) mesh slab."""
    taxis, daxis = surface.taxis, surface.daxis
    sent = surface.sentinel
    ti = np.clip(np.searchsorted(taxis, t, side="right") - 1,
                 0, taxis.size - 2)
    di = np.clip(np.searchsorted(daxis, d, side="right") - 1,
                 0, daxis.size - 2)
    ft = (t - taxis[ti]) / (taxis[ti + 1] - taxis[ti])
    fd = (d - daxis[di]) / (daxis[di + 1] - daxis[di])
    c00 = surface.costs[ti, di, i, j]
    c10 = surface.costs[ti + 1, di, i, j]
    c01 = surface.costs[ti, di + 1, i, j]
    c11 = surface.costs[ti + 1, di + 1, i, j]
    w00 = (1.0 - ft) * (1.0 - fd)
    w10 = ft * (1.0 - fd)
    w01 = (1.0 - ft) * fd
    w11 = ft * fd
    bad = (((w00 > 0) & (c00 >= sent)) | ((w10 > 0) & (c10 >= sent))
           | ((w01 > 0) & (c01 >= sent)) | ((w11 > 0) & (c11 >= sent)))
    val = (w00 * np.where(w00 > 0, c00, 0.0)
           + w10 * np.where(w10 > 0, c10, 0.0)
           + w01 * np.where(w01 > 0, c01, 0.0)
           + w11 * np.where(w11 > 0, c11, 0.0))
    return np.where(bad, sent, val)


def _feasible_walk(surface: CostSurface, used: int,
                   rng: np.random.Generator, top: int = 3):
    """One randomized feasibility-first construction of a program order.

    Starting from a random debris at the window opening, each step
    picks among the ``top`` cheapest mesh-feasible continuations whose
    arrival keeps pace with the program window; when none keeps pace,
    the shortest feasible leg is taken.  Returns a full permutation
    (unvisited debris appended) or None when the walk dies out.
    """
    from .kernels import _pure
    s = surface
    big = s.n_debris
    span = s.t_hi - s.t_lo
    start = int(rng.random() * big)
    order = [start]
    date = s.t_lo
    visited = {start}
    for pos in range(1, used):
        allowed = s.t_lo + span * pos / used
        options = []
        for k in range(big):
            if k in visited:
                continue
            for dt in s.daxis:
                if date + dt > s.t_hi:
                    continue
                c = _pure._interp(s.costs, s.taxis, s.daxis, s.sentinel,
                                  date, dt, order[-1], k)
                if c < s.sentinel:
                    options.append((c, dt, k))
        if not options:
            return None
        paced = sorted(o for o in options if date + o[1] <= allowed)
        if paced:
            c, dt, k = paced[int(rng.random() * min(top, len(paced)))]
        else:
            dt, c, k = min((dt, c, k) for c, dt, k in options)
        order.append(int(k))
        date += dt
        visited.add(int(k))
    order.extend(k for k in range(big) if k not in visited)
    return np.array(order, dtype=np.int64)


def _with_tail_dates(surface: CostSurface, prog_dates: np.ndarray,
                     big: int) -> np.ndarray:
    """Full strictly increasing date vector: program dates plus a
    packed tail for the unused positions."""
    used = prog_dates.size
    dates = np.empty(big)
    dates[:used] = prog_dates
    if used == big:
        return dates
    room = surface.t_hi - prog_dates[-1]
    if room > (big - used) * 1.0:
        dates[used:] = np.linspace(prog_dates[-1], surface.t_hi,
                                   big - used + 1)[1:]
    else:
        dates[used:] = prog_dates[-1] + np.arange(1, big - used + 1)
    return dates


def greedy_init(surface: CostSurface, m: int, n: int,
                walks: int = 100, improve_tries: int = 18000) -> TrialSolution:
    """Deterministic feasibility-first construction of the initial solution.

    Randomized greedy walks over the mesh propose program orders; each
    order is scored by the minimax grid-date assignment of
    ``_DateProgrammer``.  The best walk seeds a short Metropolis chain
    over orders (swap / insertion / reversal moves, geometric cooling)
    under the same date-programmed objective, which crosses the
    infeasible gaps that defeat plain hill climbing on sparse meshes.
    When no walk yields a date-feasible program the method falls back
    to a best-insertion path with evenly spread dates, leaving
    feasibility to the annealer.
    """
    big = surface.n_debris
    used = m * n
    if big < used:
        raise ValueError("not enough candidates for the requested program")
    rng = np.random.default_rng(0)
    programmer = _DateProgrammer(surface, m, n)

    pool = []
    for _ in range(walks):
        order = _feasible_walk(surface, used, rng)
        if order is None:
            continue
        _, cost = programmer.solve(order)
        if math.isfinite(cost):
            pool.append((cost, order))
    pool.sort(key=lambda entry: entry[0])
    if not pool:
        fallback = _insertion_order(surface)
        _, cost = programmer.solve(fallback)
        if math.isfinite(cost):
            pool.append((cost, fallback))
        else:
            return TrialSolution(
                fallback, _initial_dates(surface.t_lo, surface.t_hi,
                                         big, used))

    # independent Metropolis chains from the best walk seeds; several
    # short chains are far more robust than one long one on this
    # rugged landscape
    chains = min(3, len(pool))
    chain_tries = max(improve_tries // chains, 1)
    best_cost, best_order = pool[0]
    for ci in range(chains):
        cost, order = pool[ci]
        order = order.copy()
        temp = max(1.0, 0.05 * cost)
        alpha = (1.0 / 60.0) ** (1.0 / chain_tries)
        for _ in range(chain_tries):
            p = int(rng.random() * big)
            q = int(rng.random() * big)
            if p == q:
                continue
            cand = order.copy()
            move = rng.random()
            if move < 0.4:
                cand[p], cand[q] = cand[q], cand[p]
            elif move < 0.8:
                deb = cand[p]
                cand = np.delete(cand, p)
                cand = np.insert(cand, q, deb)
            else:
                lo, hi = min(p, q), max(p, q)
                cand[lo:hi + 1] = cand[lo:hi + 1][::-1]
            _, cand_cost = programmer.solve(cand)
            if cand_cost <= cost or (
                    math.isfinite(cand_cost)
                    and rng.random() < math.exp(-(cand_cost - cost) / temp)):
                order, cost = cand, cand_cost
                if cand_cost < best_cost:
                    best_order, best_cost = cand.copy(), cand_cost
            temp *= alpha

    prog_dates, cost = programmer.solve(best_order, want_dates=True)
    if prog_dates is None:
        return TrialSolution(best_order,
                             _initial_dates(surface.t_lo, surface.t_hi,
                                            big, used))
    return TrialSolution(best_order, _with_tail_dates(surface, prog_dates,
                                                      big))


def local_search(sol: TrialSolution, surface: CostSurface, m: int, n: int,
                 date_grid: int = 8, max_passes: int = 20) -> TrialSolution:
    """Systematic sweep of all elementary perturbations.

    All (p, q) insertions, swaps and reversals are tried, plus date
    shifts on a fixed sub-grid between each node's neighbours;
    improvements are taken immediately and sweeps repeat until a clean
    pass.  Never returns a worse solution than the input.
    """
    from .kernels import _pure
    order = sol.order.copy()
    dates = sol.dates.copy()
    big = order.size
    cost, _ = evaluate_path(TrialSolution(order, dates), surface, m, n)
    k_out = np.empty(m)

    def eval_arrays(o, d):
        return kernels.evaluate_path(
            surface.costs, surface.taxis, surface.daxis, surface.op_add,
            surface.weights, o, d, m, n, surface.sentinel, k_out)

    for _ in range(max_passes):
        improved = False
        for kind in range(3):
            for p in range(big):
                for q in range(big):
                    if p == q:
                        continue
                    cand = order.copy()
                    _pure._apply_path_move(cand, kind, p, q)
                    c = eval_arrays(cand, dates)
                    if c < cost:
                        order, cost = cand, c
                        improved = True
        for p in range(big):
            lo = dates[p - 1] if p > 0 else surface.t_lo
            hi = dates[p + 1] if p < big - 1 else surface.t_hi
            for g in range(1, date_grid + 1):
                cand_t = lo + (hi - lo) * g / (date_grid + 1)
                if not lo < cand_t < hi:
                    continue
                cand_dates = dates.copy()
                cand_dates[p] = cand_t
                c = eval_arrays(order, cand_dates)
                if c < cost:
                    dates, cost = cand_dates, c
                    improved = True
        if not improved:
            break
    return TrialSolution(order, dates)


def anneal(initial: TrialSolution, surface: CostSurface,
           schedule: Schedule, m: int, n: int) -> PlanResult:
    """Run one annealing chain; returns the best-ever solution."""
    rng = np.random.default_rng(schedule.seed)
    order = initial.order.copy()
    dates = initial.dates.copy()
    cur_cost, _ = evaluate_path(initial, surface, m, n)
    best_order = order.copy()
    best_dates = dates.copy()
    best_cost = cur_cost

    if schedule.t0_temp is not None:
        temperature = schedule.t0_temp
    else:
        temperature = initial_temperature(initial, surface, m, n, rng)

    trace = []
    tries_done = 0
    stagnant = 0
    while tries_done < schedule.max_tries:
        tries = min(schedule.tries_per_level,
                    schedule.max_tries - tries_done)
        rand = rng.random((tries, 6))
        prev_best = best_cost
        cur_cost, best_cost, n_acc = kernels.sdc_level(
            surface.costs, surface.taxis, surface.daxis, surface.op_add,
            surface.weights, m, n, surface.sentinel,
            surface.t_lo, surface.t_hi,
            order, dates, cur_cost, best_order, best_dates, best_cost,
            temperature, rand)
        tries_done += tries
        trace.append((temperature, n_acc / tries, best_cost))
        stagnant = 0 if best_cost < prev_best else stagnant + 1
        temperature = max(temperature * schedule.alpha, schedule.temp_floor)
        if stagnant >= schedule.stagnation_levels:
            improved = local_search(
                TrialSolution(best_order.copy(), best_dates.copy()),
                surface, m, n)
            imp_cost, _ = evaluate_path(improved, surface, m, n)
            if imp_cost < best_cost:
                order = improved.order.copy()
                dates = improved.dates.copy()
                cur_cost = imp_cost
                best_order = improved.order.copy()
                best_dates = improved.dates.copy()
                best_cost = imp_cost
                stagnant = 0
            else:
                break

    best = TrialSolution(best_order, best_dates)
    cost, k_i = evaluate_path(best, surface, m, n)
    return PlanResult(best=best, cost=cost, mission_costs=k_i,
                      trace=trace, n_tries=tries_done)
