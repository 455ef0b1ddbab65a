"""Transfer-cost mesh: the response surface behind the planner.

The mesh holds an n_t x n_d grid of N x N delta-V matrices: entry
(i, d, j, k) is the optimal cost of leaving debris j at date tau_i and
reaching debris k after a duration dtau_d.  Infeasible or
out-of-program cells carry a large sentinel so path search avoids
them; diagonals carry the per-debris operation cost.

Cells whose arrival date falls past the program end are not solved,
except that each date row keeps the smallest such duration column so
that interpolation near the program end never extrapolates.

Fill work is embarrassingly parallel: one (date, duration) cell per
work unit, results written into a preallocated array by index, so the
output is bit-identical for any worker count.

Persisted format (SDCMESH1): a magic line, one JSON metadata line
(axes, debris ids, mode, sentinel, payload CRC-32), then the raw
little-endian float64 payload in (i, d, j, k) row-major order.
"""

from __future__ import annotations

import json
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .orbital import Debris
from .drift import InfeasibleTransferError, TransferProblem, solve_transfer

SENTINEL = 1.0e9
_MAGIC = "SDCMESH1"
_FORMAT_VERSION = 1


class MeshFormatError(Exception):
    """Raised by load() on a corrupt or mismatching mesh file."""


@dataclass(frozen=True)
class MeshGrid:
    """Date and duration axes of the cost mesh (seconds)."""

    dates: np.ndarray
    durations: np.ndarray

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype=float)
        durations = np.asarray(self.durations, dtype=float)
        for name, axis in (("dates", dates), ("durations", durations)):
            if axis.size < 2:
                raise ValueError(f"{name} axis needs at least 2 points")
            if not np.all(np.diff(axis) > 0.0):
                raise ValueError(f"{name} axis must be strictly increasing")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "durations", durations)

    @property
    def t0(self) -> float:
        return float(self.dates[0])

    @property
    def t_end(self) -> float:
        return float(self.dates[-1])


def build_grid(t0: float, total_duration: float, n_per_mission: int,
               n_missions: int,
               dates: np.ndarray | None = None,
               durations: np.ndarray | None = None) -> MeshGrid:
    """Default mesh axes, or validated explicit overrides.

    Defaults: one starting date per selected debris (n*m dates spanning
    the program), one duration per sub-path debris ranging from half
    the mean transfer duration up to half the mean mission duration.
    """
    if n_per_mission < 1 or n_missions < 1 or total_duration <= 0.0:
        raise ValueError("invalid program dimensions")
    if dates is None:
        n_t = max(n_per_mission * n_missions, 2)
        dates = np.linspace(t0, t0 + total_duration, n_t)
    if durations is None:
        n_d = max(n_per_mission, 2)
        d_min = total_duration / n_missions / 2.0 / n_per_mission
        d_max = total_duration / n_missions / 2.0
        durations = np.linspace(d_min, d_max, n_d)
    return MeshGrid(np.asarray(dates, float), np.asarray(durations, float))


@dataclass(frozen=True)
class CostMesh:
    grid: MeshGrid
    costs: np.ndarray           # (n_t, n_d, N, N) float64
    debris_ids: tuple
    mode: str
    sentinel: float = SENTINEL

    @property
    def n_debris(self) -> int:
        return len(self.debris_ids)


def _solved_duration_indices(grid: MeshGrid, i: int) -> set:
    """Duration columns solved for date row i: all in-program arrivals
    plus the first column overshooting the program end (bounding)."""
    arrivals = grid.dates[i] + grid.durations
    inside = np.nonzero(arrivals <= grid.t_end)[0]
    solved = set(int(d) for d in inside)
    over = np.nonzero(arrivals > grid.t_end)[0]
    if over.size:
        solved.add(int(over[0]))
    return solved


def _fill_cell(args):
    """Solve the N*(N-1) transfers of one (date, duration) cell."""
    i, d, t_start, duration, debris, template = args
    n = len(debris)
    block = np.full((n, n), SENTINEL)
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            problem = replace(template, debris_from=debris[j],
                              debris_to=debris[k], t1=t_start,
                              t2=t_start + duration)
            try:
                block[j, k] = solve_transfer(problem).dv
            except (InfeasibleTransferError, ValueError):
                pass
    return i, d, block


def fill_mesh(debris: list[Debris], grid: MeshGrid,
              problem_template: TransferProblem,
              workers: int = 1) -> CostMesh:
    """Solve every required cell of the mesh.

    ``problem_template`` supplies the mode, bounds, dwell and solver
    settings; its debris and date fields are overridden per transfer.
    The diagonal of every solved cell carries the debris op_cost.
    """
    n = len(debris)
    if n < 2:
        raise ValueError("need at least 2 debris")
    n_t = grid.dates.size
    n_d = grid.durations.size
    costs = np.full((n_t, n_d, n, n), SENTINEL)

    tasks = []
    for i in range(n_t):
        solved = _solved_duration_indices(grid, i)
        for d in range(n_d):
            if d in solved:
                tasks.append((i, d, float(grid.dates[i]),
                              float(grid.durations[d]), debris,
                              problem_template))
    if workers <= 1:
        results = map(_fill_cell, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        try:
            results = list(pool.map(_fill_cell, tasks, chunksize=1))
        finally:
            pool.shutdown()
    for i, d, block in results:
        costs[i, d] = block
    op = np.array([deb.op_cost for deb in debris])
    costs[:, :, np.arange(n), np.arange(n)] = op
    return CostMesh(grid=grid, costs=costs,
                    debris_ids=tuple(deb.id for deb in debris),
                    mode=problem_template.mode)


def _cell_fraction(axis: np.ndarray, x: float) -> tuple[int, float]:
    """Clamped cell index and fraction along one axis."""
    if x <= axis[0]:
        return 0, 0.0
    if x >= axis[-1]:
        return axis.size - 2, 1.0
    i = int(np.searchsorted(axis, x, side="right")) - 1
    i = min(i, axis.size - 2)
    return i, (x - axis[i]) / (axis[i + 1] - axis[i])


def interpolate(mesh: CostMesh, t: float, dt: float, j: int, k: int) -> float:
    """Bilinear transfer-cost query; sentinel corners propagate."""
    if j == k:
        raise ValueError("diagonal entries are operation costs, not transfers")
    i, u = _cell_fraction(mesh.grid.dates, t)
    d, v = _cell_fraction(mesh.grid.durations, dt)
    c = mesh.costs
    c00 = c[i, d, j, k]
    c10 = c[i + 1, d, j, k]
    c01 = c[i, d + 1, j, k]
    c11 = c[i + 1, d + 1, j, k]
    w00 = (1.0 - u) * (1.0 - v)
    w10 = u * (1.0 - v)
    w01 = (1.0 - u) * v
    w11 = u * v
    # only corners actually weighted in can poison the query; this
    # keeps node-aligned queries exact next to infeasible cells
    if ((w00 > 0.0 and c00 >= mesh.sentinel)
            or (w10 > 0.0 and c10 >= mesh.sentinel)
            or (w01 > 0.0 and c01 >= mesh.sentinel)
            or (w11 > 0.0 and c11 >= mesh.sentinel)):
        return mesh.sentinel
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


VEHICLE_DEORBIT = "vehicle"
KIT_DEORBIT = "kit"


def edge_cost(mesh: CostMesh, t: float, dt: float, j: int, k: int,
              weight: float = 1.0,
              deorbit_option: str = VEHICLE_DEORBIT) -> float:
    """Weighted edge valuation w_k * (C_int + C_oper(k)).

    Under the kit option the operation cost is a released mass handled
    by the fuel ledger, not a delta-V, so only the transfer cost is
    weighted in.  Sentinels pass through un-weighted.
    """
    c = interpolate(mesh, t, dt, j, k)
    if c >= mesh.sentinel:
        return mesh.sentinel
    if deorbit_option == VEHICLE_DEORBIT:
        c = c + mesh.costs[0, 0, k, k]
    return weight * c


def save(mesh: CostMesh, path) -> None:
    payload = np.ascontiguousarray(mesh.costs, dtype="<f8").tobytes()
    header = {
        "version": _FORMAT_VERSION,
        "t0": mesh.grid.t0,
        "total_duration": mesh.grid.t_end - mesh.grid.t0,
        "mode": mesh.mode,
        "n_debris": mesh.n_debris,
        "debris_ids": list(mesh.debris_ids),
        "dates": mesh.grid.dates.tolist(),
        "durations": mesh.grid.durations.tolist(),
        "sentinel": mesh.sentinel,
        "payload_crc32": zlib.crc32(payload),
    }
    with open(path, "wb") as fh:
        fh.write(_MAGIC.encode() + b"\n")
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(payload)


def load(path) -> CostMesh:
    with open(path, "rb") as fh:
        magic = fh.readline().rstrip(b"\n")
        if magic != _MAGIC.encode():
            raise MeshFormatError(f"bad magic {magic!r}")
        try:
            header = json.loads(fh.readline())
        except json.JSONDecodeError as exc:
            raise MeshFormatError(f"unreadable header: {exc}") from exc
        if header.get("version") != _FORMAT_VERSION:
            raise MeshFormatError(
                f"unsupported mesh version {header.get('version')!r}")
        payload = fh.read()
    n = header["n_debris"]
    shape = (len(header["dates"]), len(header["durations"]), n, n)
    expected = math.prod(shape) * 8
    if len(payload) != expected:
        raise MeshFormatError(
            f"payload size {len(payload)} != expected {expected} "
            "(truncated or header/payload mismatch)")
    if zlib.crc32(payload) != header["payload_crc32"]:
        raise MeshFormatError("payload checksum failure")
    costs = np.frombuffer(payload, dtype="<f8").reshape(shape).copy()
    grid = MeshGrid(np.array(header["dates"]), np.array(header["durations"]))
    return CostMesh(grid=grid, costs=costs,
                    debris_ids=tuple(header["debris_ids"]),
                    mode=header["mode"], sentinel=header["sentinel"])
