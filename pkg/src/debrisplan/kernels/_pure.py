"""Pure-Python reference implementation of the annealing hot loops.

The compiled backend in ``_speedups.pyx`` mirrors this module operation
for operation (same random-number consumption, same expression order),
so both produce bit-identical trajectories from the same random arrays.

Random layout, one row per try:
  TSP rows   (4 cols): move kind, position a, position b, acceptance
  SDC rows   (6 cols): move kind, position a, position b,
                       date-shift node, date fraction, acceptance
All entries are uniform floats in [0, 1); integer draws are obtained as
int(u * n).
"""

from __future__ import annotations

import math

import numpy as np


# ---------------------------------------------------------------------------
# TSP mode (closed tour, integer distance matrix)
# ---------------------------------------------------------------------------

def tour_length(dist: np.ndarray, tour: np.ndarray) -> int:
    n = tour.shape[0]
    total = 0
    for p in range(n):
        total += int(dist[tour[p], tour[(p + 1) % n]])
    return total


def _apply_path_move(arr: np.ndarray, kind: int, p: int, q: int) -> None:
    """In-place insertion / swap / segment reversal on a permutation."""
    if kind == 0:          # insertion: element at p re-inserted at q
        if p == q:
            return
        elem = arr[p]
        if p < q:
            arr[p:q] = arr[p + 1:q + 1]
        else:
            arr[q + 1:p + 1] = arr[q:p]
        arr[q] = elem
    elif kind == 1:        # swap
        arr[p], arr[q] = arr[q], arr[p]
    else:                  # reversal of the leg between p and q
        lo, hi = (p, q) if p <= q else (q, p)
        arr[lo:hi + 1] = arr[lo:hi + 1][::-1]


def tsp_level(dist: np.ndarray, tour: np.ndarray, cur_len: int,
              best_tour: np.ndarray, best_len: int, temperature: float,
              rand: np.ndarray) -> tuple[int, int, int]:
    """Run one temperature level of TSP annealing.

    ``tour`` and ``best_tour`` are mutated in place.  Returns the new
    (current length, best length, number of accepted tries).
    """
    n = tour.shape[0]
    n_accept = 0
    scratch = tour.copy()
    for r in range(rand.shape[0]):
        kind = int(rand[r, 0] * 3.0)
        p = int(rand[r, 1] * n)
        q = int(rand[r, 2] * n)
        scratch[:] = tour
        _apply_path_move(scratch, kind, p, q)
        new_len = tour_length(dist, scratch)
        delta = new_len - cur_len
        if delta <= 0 or rand[r, 3] < math.exp(-delta / temperature):
            tour[:] = scratch
            cur_len = new_len
            n_accept += 1
            if cur_len < best_len:
                best_tour[:] = tour
                best_len = cur_len
    return cur_len, best_len, n_accept


# ---------------------------------------------------------------------------
# Mission-planning mode (permutation + dates against the cost mesh)
# ---------------------------------------------------------------------------

def _interp(costs: np.ndarray, taxis: np.ndarray, daxis: np.ndarray,
            sentinel: float, t: float, dt: float, j: int, k: int) -> float:
    """Bilinear cost-mesh query with clamping; sentinels propagate."""
    nt = taxis.shape[0]
    nd = daxis.shape[0]
    if t <= taxis[0]:
        i, u = 0, 0.0
    elif t >= taxis[nt - 1]:
        i, u = nt - 2, 1.0
    else:
        i = 0
        while taxis[i + 1] <= t:
            i += 1
        u = (t - taxis[i]) / (taxis[i + 1] - taxis[i])
    if dt <= daxis[0]:
        d, v = 0, 0.0
    elif dt >= daxis[nd - 1]:
        d, v = nd - 2, 1.0
    else:
        d = 0
        while daxis[d + 1] <= dt:
            d += 1
        v = (dt - daxis[d]) / (daxis[d + 1] - daxis[d])
    c00 = costs[i, d, j, k]
    c10 = costs[i + 1, d, j, k]
    c01 = costs[i, d + 1, j, k]
    c11 = costs[i + 1, d + 1, j, k]
    w00 = (1.0 - u) * (1.0 - v)
    w10 = u * (1.0 - v)
    w01 = (1.0 - u) * v
    w11 = u * v
    # only corners actually weighted in can poison the query; this
    # keeps node-aligned queries exact next to infeasible cells
    if (w00 > 0.0 and c00 >= sentinel) or (w10 > 0.0 and c10 >= sentinel) \
            or (w01 > 0.0 and c01 >= sentinel) \
            or (w11 > 0.0 and c11 >= sentinel):
        return sentinel
    total = 0.0
    if w00 > 0.0:
        total += w00 * c00
    if w10 > 0.0:
        total += w10 * c10
    if w01 > 0.0:
        total += w01 * c01
    if w11 > 0.0:
        total += w11 * c11
    return total


def evaluate_path(costs: np.ndarray, taxis: np.ndarray, daxis: np.ndarray,
                  op_add: np.ndarray, weights: np.ndarray,
                  order: np.ndarray, dates: np.ndarray,
                  m: int, n: int, sentinel: float,
                  k_out: np.ndarray) -> float:
    """Program cost of a trial solution: max over the m sub-path costs.

    ``op_add[k]`` is the operation delta-V charged on arrival at debris
    k (zero under the kit option); ``k_out`` (length m) receives the
    per-mission costs.  Only the first m*n positions are costed.
    """
    worst = 0.0
    for mi in range(m):
        start = mi * n
        cost = weights[order[start]] * op_add[order[start]]
        for p in range(start, start + n - 1):
            j = order[p]
            k = order[p + 1]
            c = _interp(costs, taxis, daxis, sentinel,
                        dates[p], dates[p + 1] - dates[p], j, k)
            if c >= sentinel:
                cost += sentinel
            else:
                cost += weights[k] * (c + op_add[k])
        k_out[mi] = cost
        if cost > worst:
            worst = cost
    return worst


def sdc_level(costs: np.ndarray, taxis: np.ndarray, daxis: np.ndarray,
              op_add: np.ndarray, weights: np.ndarray,
              m: int, n: int, sentinel: float,
              t_lo: float, t_hi: float,
              order: np.ndarray, dates: np.ndarray, cur_cost: float,
              best_order: np.ndarray, best_dates: np.ndarray,
              best_cost: float, temperature: float,
              rand: np.ndarray) -> tuple[float, float, int]:
    """Run one temperature level of mission-planning annealing.

    Each try applies one random path move followed by one random date
    shift (the shifted date stays strictly between its neighbours),
    then accepts or rejects the combined perturbation.  ``order``,
    ``dates`` and the best-so-far arrays are mutated in place.
    """
    big = order.shape[0]
    n_accept = 0
    s_order = order.copy()
    s_dates = dates.copy()
    k_tmp = np.empty(m)
    for r in range(rand.shape[0]):
        kind = int(rand[r, 0] * 3.0)
        p = int(rand[r, 1] * big)
        q = int(rand[r, 2] * big)
        s_order[:] = order
        s_dates[:] = dates
        _apply_path_move(s_order, kind, p, q)
        pd = int(rand[r, 3] * big)
        lo = s_dates[pd - 1] if pd > 0 else t_lo
        hi = s_dates[pd + 1] if pd < big - 1 else t_hi
        cand = lo + rand[r, 4] * (hi - lo)
        if lo < cand < hi:
            s_dates[pd] = cand
        new_cost = evaluate_path(costs, taxis, daxis, op_add, weights,
                                 s_order, s_dates, m, n, sentinel, k_tmp)
        delta = new_cost - cur_cost
        if delta <= 0.0 or rand[r, 5] < math.exp(-delta / temperature):
            order[:] = s_order
            dates[:] = s_dates
            cur_cost = new_cost
            n_accept += 1
            if cur_cost < best_cost:
                best_order[:] = order
                best_dates[:] = dates
                best_cost = cur_cost
    return cur_cost, best_cost, n_accept
