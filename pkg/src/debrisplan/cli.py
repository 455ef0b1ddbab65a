"""Command-line front end for the mission planner.

Subcommands cover the three pipeline stages plus utilities::

    debrisplan mesh    precompute the transfer-cost mesh
    debrisplan plan    anneal debris order and rendezvous dates
    debrisplan refine  continuous re-optimization of the annealed plan
    debrisplan tsp     benchmark the annealer on a TSPLIB instance
    debrisplan report  render an artifact as a human-readable table

Configuration is a JSON file; command-line flags override it.  All
JSON artifacts are written with sorted keys so repeated runs with the
same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, mesh as meshmod
from .annealing import CostSurface, Schedule, TrialSolution, anneal, greedy_init
from .drift import HIGH_THRUST, LOW_THRUST, TransferProblem
from .ingest import CatalogError, parse_debris_csv, parse_tle
from .mesh import KIT_DEORBIT, VEHICLE_DEORBIT
from .orbital import EARTH, Debris
from .refine import InfeasibleMissionError, RefineConfig, refine_program
from .tsp import (TsplibParseError, distance_matrix, parse_tsplib,
                  tsp_anneal)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_INFEASIBLE = 4
EXIT_DATA = 5

_DAY = 86400.0

_DEFAULT_CONFIG = {
    "missions": 3,
    "debris_per_mission": 5,
    "t0_days": 0.0,
    "total_duration_days": 1370.0,
    "op_dwell_days": 5.0,
    "drift_alt_min_km": 400.0,
    "drift_alt_max_km": 2000.0,
    "mode": HIGH_THRUST,
    "accel": 0.0035,
    "op_cost": 15.0,
    "debris_weight": 1.0,
    "deorbit_option": VEHICLE_DEORBIT,
    "vehicle_mass": None,
    "exhaust_velocity": None,
    "inc_window_deg": 3.0,
    "n_samples": 200,
    "grid": {},
    "sa": {},
    "refine": {},
}


class ConfigError(Exception):
    pass


def load_config(path: str | None) -> dict:
    cfg = json.loads(json.dumps(_DEFAULT_CONFIG))  # deep copy
    if path is not None:
        if not os.path.exists(path):
            raise FileNotFoundError(path)
        with open(path) as fh:
            try:
                user = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(user, dict):
            raise ConfigError(f"{path}: top level must be an object")
        unknown = set(user) - set(_DEFAULT_CONFIG)
        if unknown:
            raise ConfigError(
                f"{path}: unknown key(s) {', '.join(sorted(unknown))}")
        for key, value in user.items():
            if isinstance(_DEFAULT_CONFIG[key], dict):
                if not isinstance(value, dict):
                    raise ConfigError(f"{path}: {key} must be an object")
                cfg[key].update(value)
            else:
                cfg[key] = value
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: dict) -> None:
    if cfg["mode"] not in (HIGH_THRUST, LOW_THRUST):
        raise ConfigError(f"mode must be {HIGH_THRUST!r} or {LOW_THRUST!r}")
    if cfg["deorbit_option"] not in (VEHICLE_DEORBIT, KIT_DEORBIT):
        raise ConfigError("deorbit_option must be 'vehicle' or 'kit'")
    for key in ("missions", "debris_per_mission"):
        if int(cfg[key]) < 1:
            raise ConfigError(f"{key} must be >= 1")
    if cfg["total_duration_days"] <= 0:
        raise ConfigError("total_duration_days must be positive")
    if cfg["drift_alt_min_km"] >= cfg["drift_alt_max_km"]:
        raise ConfigError("drift altitude bounds are inverted")
    if cfg["mode"] == LOW_THRUST and cfg["accel"] <= 0:
        raise ConfigError("low-thrust mode requires positive accel")


def _load_debris(path: str, cfg: dict) -> list[Debris]:
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    if path.endswith((".tle", ".txt")):
        debris, _ = parse_tle(path, default_op_cost=cfg["op_cost"],
                              default_weight=cfg["debris_weight"])
        return debris
    return parse_debris_csv(path, default_op_cost=cfg["op_cost"],
                            default_weight=cfg["debris_weight"])


def _problem_template(cfg: dict, debris: list[Debris],
                      raan_tol: float = 0.0) -> TransferProblem:
    return TransferProblem(
        debris_from=debris[0], debris_to=debris[min(1, len(debris) - 1)],
        t1=0.0, t2=cfg["op_dwell_days"] * _DAY + _DAY,
        mode=cfg["mode"],
        r_min=EARTH.r_eq + cfg["drift_alt_min_km"] * 1.0e3,
        r_max=EARTH.r_eq + cfg["drift_alt_max_km"] * 1.0e3,
        op_dwell=cfg["op_dwell_days"] * _DAY,
        accel=cfg["accel"] if cfg["mode"] == LOW_THRUST else 0.0,
        inc_window=math.radians(cfg["inc_window_deg"]),
        raan_tol=raan_tol,
        n_samples=int(cfg["n_samples"]))


def _build_grid(cfg: dict) -> meshmod.MeshGrid:
    grid_cfg = cfg["grid"]
    dates = grid_cfg.get("dates_days")
    durations = grid_cfg.get("durations_days")
    return meshmod.build_grid(
        t0=cfg["t0_days"] * _DAY,
        total_duration=cfg["total_duration_days"] * _DAY,
        n_per_mission=int(cfg["debris_per_mission"]),
        n_missions=int(cfg["missions"]),
        dates=None if dates is None else np.asarray(dates, float) * _DAY,
        durations=(None if durations is None
                   else np.asarray(durations, float) * _DAY))


def _schedule(cfg: dict, seed_override: int | None) -> Schedule:
    sa = cfg["sa"]
    return Schedule(
        alpha=float(sa.get("alpha", 0.999)),
        tries_per_level=int(sa.get("tries_per_level", 1000)),
        stagnation_levels=int(sa.get("stagnation_levels", 50)),
        max_tries=int(sa.get("max_tries", 200_000_000)),
        seed=int(seed_override if seed_override is not None
                 else sa.get("seed", 0)),
        t0_temp=sa.get("t0_temp"))


def _dump_json(obj: dict, path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2,
                      separators=(",", ": ")) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_mesh(args) -> int:
    cfg = load_config(args.config)
    debris = _load_debris(args.debris, cfg)
    grid = _build_grid(cfg)
    template = _problem_template(cfg, debris)
    mesh = meshmod.fill_mesh(debris, grid, template, workers=args.threads)
    meshmod.save(mesh, args.out)
    n_cells = int(np.count_nonzero(mesh.costs < mesh.sentinel))
    print(f"mesh: {len(debris)} debris, {grid.dates.size} dates x "
          f"{grid.durations.size} durations, {n_cells} finite cells "
          f"-> {args.out}")
    return EXIT_OK


def cmd_plan(args) -> int:
    cfg = load_config(args.config)
    debris = _load_debris(args.debris, cfg)
    if not os.path.exists(args.mesh):
        raise FileNotFoundError(args.mesh)
    mesh = meshmod.load(args.mesh)
    ids = [d.id for d in debris]
    if list(mesh.debris_ids) != ids:
        raise ConfigError("mesh debris ids do not match the catalog")
    m = int(cfg["missions"])
    n = int(cfg["debris_per_mission"])
    if m * n > len(debris):
        raise ConfigError(
            f"program needs {m * n} debris, catalog has {len(debris)}")
    surface = CostSurface.from_mesh(mesh, debris,
                                    deorbit_option=cfg["deorbit_option"])
    schedule = _schedule(cfg, args.seed)
    sa_cfg = cfg["sa"]
    initial = greedy_init(surface, m, n,
                          walks=int(sa_cfg.get("init_walks", 100)),
                          improve_tries=int(sa_cfg.get("init_tries", 18000)))
    result = anneal(initial, surface, schedule, m, n)
    if result.cost >= mesh.sentinel:
        print("error: no feasible program found on the cost surface",
              file=sys.stderr)
        return EXIT_INFEASIBLE
    artifact = {
        "version": 1,
        "mode": mesh.mode,
        "m": m,
        "n": n,
        "seed": schedule.seed,
        "n_tries": result.n_tries,
        "cost": result.cost,
        "mission_costs": list(result.mission_costs),
        "order_index": [int(i) for i in result.best.order],
        "order_ids": [ids[int(i)] for i in result.best.order],
        "dates_days": [float(t) / _DAY for t in result.best.dates],
    }
    _dump_json(artifact, args.out)
    if args.out not in (None, "-"):
        print(f"plan: cost {result.cost:.1f} after {result.n_tries} tries "
              f"-> {args.out}")
    return EXIT_OK


def cmd_refine(args) -> int:
    cfg = load_config(args.config)
    debris = _load_debris(args.debris, cfg)
    if not os.path.exists(args.plan):
        raise FileNotFoundError(args.plan)
    with open(args.plan) as fh:
        plan = json.load(fh)
    for key in ("order_index", "dates_days", "m", "n"):
        if key not in plan:
            raise ConfigError(f"{args.plan}: missing field {key!r}")
    rcfg_json = cfg["refine"]
    template = _problem_template(
        cfg, debris,
        raan_tol=math.radians(float(rcfg_json.get("raan_tol_deg", 1.0))))
    rconfig = RefineConfig(
        problem_template=template,
        deorbit_option=cfg["deorbit_option"],
        sweep_tol=float(rcfg_json.get("sweep_tol", 0.5)),
        max_sweeps=int(rcfg_json.get("max_sweeps", 10)),
        vehicle_mass=cfg["vehicle_mass"],
        exhaust_velocity=cfg["exhaust_velocity"])
    dates = np.asarray(plan["dates_days"], float) * _DAY
    try:
        result = refine_program(plan["order_index"], dates, debris,
                                int(plan["m"]), int(plan["n"]),
                                rconfig, workers=args.threads)
    except InfeasibleMissionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _dump_json(result.to_dict(), args.out)
    if args.out not in (None, "-"):
        print(f"refine: max mission delta-V {result.max_mission_dv:.1f} m/s "
              f"-> {args.out}")
    return EXIT_OK


def cmd_tsp(args) -> int:
    instance = parse_tsplib(args.instance)
    dist = distance_matrix(instance.points, instance.metric)
    schedule = Schedule(seed=args.seed,
                        max_tries=args.max_tries,
                        stagnation_levels=args.stagnation_levels)
    result = tsp_anneal(dist, schedule)
    line = (f"{instance.name or os.path.basename(args.instance)}: "
            f"length {result.length} after {result.n_tries} tries")
    if args.best_known is not None:
        gap = 100.0 * (result.length - args.best_known) / args.best_known
        line += f", gap {gap:+.2f}% vs best known {args.best_known}"
    print(line)
    if args.out:
        _dump_json({
            "version": 1,
            "instance": instance.name,
            "length": result.length,
            "n_tries": result.n_tries,
            "tour": [int(i) for i in result.tour],
        }, args.out)
    return EXIT_OK


def _report_plan(plan: dict) -> None:
    m, n = int(plan["m"]), int(plan["n"])
    print(f"annealed program: mode={plan['mode']} cost={plan['cost']:.1f}"
          f" (seed {plan['seed']}, {plan['n_tries']} tries)")
    for mi in range(m):
        ids = plan["order_ids"][mi * n:(mi + 1) * n]
        dates = plan["dates_days"][mi * n:(mi + 1) * n]
        cost = plan["mission_costs"][mi]
        print(f"  mission {mi + 1}: cost {cost:9.1f}")
        print("    debris: " + "  ".join(f"{i:>5d}" for i in ids))
        print("    day   : " + "  ".join(f"{t:5.0f}" for t in dates))


def _report_missionplan(plan: dict) -> None:
    print(f"refined program: max mission delta-V "
          f"{plan['max_mission_dv']:.1f} m/s")
    for mi, mission in enumerate(plan["missions"], start=1):
        extra = ""
        if mission.get("fuel_used") is not None:
            extra = (f"  fuel {mission['fuel_used']:.1f} kg"
                     f"  final mass {mission['final_mass']:.1f} kg"
                     + ("" if mission["mass_ok"] else "  MASS EXCEEDED"))
        print(f"  mission {mi}: delta-V {mission['total_dv']:.1f} m/s{extra}")
        print(f"    {'debris':>6}  {'day':>7}  {'leg dv':>8}  "
              f"{'drift alt km':>12}  {'drift inc deg':>13}")
        for leg in mission["legs"]:
            alt = ("      -     " if leg["drift_a"] is None
                   else f"{(leg['drift_a'] - EARTH.r_eq) / 1e3:12.1f}")
            inc = ("      -      " if leg["drift_inc"] is None
                   else f"{math.degrees(leg['drift_inc']):13.2f}")
            print(f"    {leg['debris_id']:>6}  {leg['date'] / _DAY:7.1f}  "
                  f"{leg['dv']:8.1f}  {alt}  {inc}")


def cmd_report(args) -> int:
    path = args.input
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head == b"SDCMESH1":
        mesh = meshmod.load(path)
        finite = mesh.costs[mesh.costs < mesh.sentinel]
        print(f"cost mesh: mode={mesh.mode}, {len(mesh.debris_ids)} debris, "
              f"{mesh.grid.dates.size} dates x {mesh.grid.durations.size} "
              f"durations")
        print(f"  finite cells: {finite.size}  "
              f"min {finite.min():.1f}  median {np.median(finite):.1f}  "
              f"max {finite.max():.1f} m/s")
        return EXIT_OK
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"{path}: not a mesh or JSON artifact "
                               f"({exc})") from exc
    if "missions" in data:
        _report_missionplan(data)
    elif "order_ids" in data:
        _report_plan(data)
    else:
        raise CatalogError(f"{path}: unrecognized artifact")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="debrisplan",
        description="multi-mission space-debris collection planner")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mesh", help="precompute the transfer-cost mesh")
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--debris", required=True, help="debris catalog (CSV/TLE)")
    p.add_argument("--out", required=True, help="output mesh file")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("plan", help="anneal order and rendezvous dates")
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--debris", required=True)
    p.add_argument("--mesh", required=True, help="precomputed mesh file")
    p.add_argument("--out", help="plan JSON (default: stdout)")
    p.add_argument("--seed", type=int, help="override the annealing seed")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("refine", help="refine an annealed plan")
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--debris", required=True)
    p.add_argument("--plan", required=True, help="annealed plan JSON")
    p.add_argument("--out", help="mission plan JSON (default: stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("tsp", help="TSPLIB benchmark of the annealer")
    p.add_argument("--instance", required=True, help="TSPLIB .tsp file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-tries", type=int, default=2_000_000)
    p.add_argument("--stagnation-levels", type=int, default=50)
    p.add_argument("--best-known", type=int)
    p.add_argument("--out", help="optional tour JSON")
    p.set_defaults(func=cmd_tsp)

    p = sub.add_parser("report", help="render an artifact as text")
    p.add_argument("--input", required=True,
                   help="mesh, plan JSON or mission-plan JSON")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (CatalogError, TsplibParseError,
            meshmod.MeshFormatError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
