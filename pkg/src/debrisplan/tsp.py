"""Classical-TSP benchmark mode for validating the annealing engine.

Reads TSPLIB node-coordinate instances (EUC_2D and ATT metrics, with
the standard TSPLIB integer rounding), anneals a closed tour with the
same move set and cooling machinery as the mission planner, and
reports the gap against the best known cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .annealing import Schedule

EUC_2D = "EUC_2D"
ATT = "ATT"
_SUPPORTED_METRICS = (EUC_2D, ATT)


class TsplibParseError(Exception):
    pass


@dataclass(frozen=True)
class TspInstance:
    name: str
    metric: str
    points: np.ndarray  # (n, 2) float64


def parse_tsplib(path) -> TspInstance:
    """Parse a TSPLIB file in node-coordinate format."""
    name = ""
    metric = None
    dimension = None
    coords = {}
    in_coords = False
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line == "EOF":
                in_coords = False
                continue
            if in_coords:
                parts = line.split()
                try:
                    idx = int(parts[0])
                    x, y = float(parts[1]), float(parts[2])
                except (IndexError, ValueError) as exc:
                    raise TsplibParseError(
                        f"{path}:{lineno}: malformed coordinate line "
                        f"{line!r}") from exc
                coords[idx] = (x, y)
                continue
            key, _, value = line.partition(":")
            key = key.strip()
            value = value.strip()
            if key == "NAME":
                name = value
            elif key == "DIMENSION":
                dimension = int(value)
            elif key == "EDGE_WEIGHT_TYPE":
                if value not in _SUPPORTED_METRICS:
                    raise TsplibParseError(
                        f"{path}:{lineno}: unsupported edge weight type "
                        f"{value!r}")
                metric = value
            elif key == "NODE_COORD_SECTION":
                in_coords = True
    if metric is None:
        raise TsplibParseError(f"{path}: no EDGE_WEIGHT_TYPE declared")
    if dimension is None or len(coords) != dimension:
        raise TsplibParseError(
            f"{path}: expected {dimension} coordinates, found {len(coords)}")
    points = np.array([coords[i + 1] for i in range(dimension)])
    return TspInstance(name=name, metric=metric, points=points)


def distance_matrix(points: np.ndarray, metric: str) -> np.ndarray:
    """Integer TSPLIB distances between all point pairs."""
    diff = points[:, None, :] - points[None, :, :]
    sq = (diff ** 2).sum(axis=-1)
    if metric == EUC_2D:
        d = np.rint(np.sqrt(sq)).astype(np.int32)
    elif metric == ATT:
        r = np.sqrt(sq / 10.0)
        t = np.rint(r)
        d = np.where(t < r, t + 1.0, t).astype(np.int32)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return np.ascontiguousarray(d)


def tsp_tour_length(points: np.ndarray, tour, metric: str) -> int:
    """Closed-tour length under the named TSPLIB metric."""
    tour = np.ascontiguousarray(tour, dtype=np.int64)
    n = tour.size
    if not np.array_equal(np.sort(tour), np.arange(n)):
        raise ValueError("tour is not a permutation")
    dist = distance_matrix(np.asarray(points, dtype=float), metric)
    return kernels.tour_length(dist, tour)


def nearest_neighbor_tour(dist: np.ndarray, start: int = 0) -> np.ndarray:
    n = dist.shape[0]
    unvisited = np.ones(n, dtype=bool)
    tour = np.empty(n, dtype=np.int64)
    tour[0] = start
    unvisited[start] = False
    for p in range(1, n):
        prev = tour[p - 1]
        d = np.where(unvisited, dist[prev], np.iinfo(np.int32).max)
        nxt = int(np.argmin(d))
        tour[p] = nxt
        unvisited[nxt] = False
    return tour


def two_opt(dist: np.ndarray, tour: np.ndarray,
            max_passes: int = 60) -> np.ndarray:
    """First-improvement 2-opt sweeps until a clean pass."""
    n = tour.size
    tour = tour.copy()
    for _ in range(max_passes):
        improved = False
        pos = tour
        for i in range(n - 1):
            a, b = pos[i], pos[i + 1]
            # vectorized delta for all reversal end points j > i
            j = np.arange(i + 2, n)
            if j.size == 0:
                continue
            c = pos[j]
            d_next = pos[(j + 1) % n]
            delta = (dist[a, c].astype(np.int64) + dist[b, d_next]
                     - dist[a, b] - dist[c, d_next])
            # exclude the wrap edge case j = n-1 when i = 0 (same edge)
            if i == 0:
                delta[-1] = 0
            best = int(np.argmin(delta))
            if delta[best] < 0:
                jj = i + 2 + best
                pos[i + 1:jj + 1] = pos[i + 1:jj + 1][::-1]
                improved = True
        if not improved:
            break
    return tour


@dataclass(frozen=True)
class TspResult:
    tour: np.ndarray
    length: int
    trace: list
    n_tries: int


def tsp_anneal(dist: np.ndarray, schedule: Schedule) -> TspResult:
    """Anneal a closed tour; same cooling logic as the mission planner."""
    rng = np.random.default_rng(schedule.seed)
    n = dist.shape[0]
    tour = nearest_neighbor_tour(dist)
    cur_len = kernels.tour_length(dist, tour)
    best_tour = tour.copy()
    best_len = cur_len

    if schedule.t0_temp is not None:
        temperature = schedule.t0_temp
    else:
        # 90%-acceptance calibration on random perturbations of the start
        degradations = []
        scratch = np.empty(n, dtype=np.int64)
        from .kernels import _pure
        for _ in range(100):
            scratch[:] = tour
            _pure._apply_path_move(scratch, int(rng.random() * 3),
                                   int(rng.random() * n),
                                   int(rng.random() * n))
            d = kernels.tour_length(dist, scratch) - cur_len
            if d > 0:
                degradations.append(d)
        temperature = max(
            sum(degradations) / len(degradations) / -math.log(0.9), 1.0) \
            if degradations else 1.0

    trace = []
    tries_done = 0
    stagnant = 0
    while tries_done < schedule.max_tries:
        tries = min(schedule.tries_per_level,
                    schedule.max_tries - tries_done)
        rand = rng.random((tries, 4))
        prev_best = best_len
        cur_len, best_len, n_acc = kernels.tsp_level(
            dist, tour, cur_len, best_tour, best_len, temperature, rand)
        tries_done += tries
        trace.append((temperature, n_acc / tries, best_len))
        stagnant = 0 if best_len < prev_best else stagnant + 1
        temperature = max(temperature * schedule.alpha, schedule.temp_floor)
        if stagnant >= schedule.stagnation_levels:
            improved = two_opt(dist, best_tour)
            imp_len = kernels.tour_length(dist, improved)
            if imp_len < best_len:
                tour = improved.copy()
                cur_len = imp_len
                best_tour = improved.copy()
                best_len = imp_len
                stagnant = 0
            else:
                break
    return TspResult(tour=best_tour, length=int(best_len), trace=trace,
                     n_tries=tries_done)
