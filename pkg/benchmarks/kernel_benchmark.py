#!/usr/bin/env python3
"""Benchmark the compiled annealing kernels against the pure-Python
fallback.

Runs identical seeded workloads through both backends, checks the
results agree bit for bit, and reports per-level timings.

Usage: python benchmarks/kernel_benchmark.py [--levels N] [--tries N]
"""

import argparse
import time

import numpy as np

from debrisplan.kernels import _pure

try:
    from debrisplan.kernels import _speedups
except ImportError:
    _speedups = None


def _tsp_workload(rng, n=120):
    points = rng.random((n, 2)) * 1000.0
    diff = points[:, None, :] - points[None, :, :]
    dist = np.rint(np.sqrt((diff ** 2).sum(-1))).astype(np.int32)
    return np.ascontiguousarray(dist)


def _sdc_workload(rng, n_debris=21, n_t=16, n_d=6):
    taxis = np.linspace(0.0, 1370.0, n_t) * 86400.0
    daxis = np.linspace(20.0, 200.0, n_d) * 86400.0
    costs = rng.random((n_t, n_d, n_debris, n_debris)) * 500.0 + 50.0
    costs[:, :, np.arange(n_debris), np.arange(n_debris)] = 15.0
    op_add = np.full(n_debris, 15.0)
    weights = np.ones(n_debris)
    return costs, taxis, daxis, op_add, weights


def bench_tsp(backend, dist, levels, tries, seed):
    rng = np.random.default_rng(seed)
    n = dist.shape[0]
    tour = np.arange(n, dtype=np.int64)
    cur = backend.tour_length(dist, tour)
    best_tour = tour.copy()
    best = cur
    temperature = 500.0
    start = time.perf_counter()
    for _ in range(levels):
        rand = rng.random((tries, 4))
        cur, best, _ = backend.tsp_level(dist, tour, cur, best_tour, best,
                                         temperature, rand)
        temperature *= 0.999
    elapsed = time.perf_counter() - start
    return elapsed, (best, tour.copy(), best_tour.copy())


def bench_sdc(backend, workload, levels, tries, seed, m=3, n=7):
    costs, taxis, daxis, op_add, weights = workload
    rng = np.random.default_rng(seed)
    big = costs.shape[2]
    order = np.arange(big, dtype=np.int64)
    dates = np.linspace(taxis[0], taxis[-1], big)
    k_out = np.empty(m)
    cur = backend.evaluate_path(costs, taxis, daxis, op_add, weights,
                                order, dates, m, n, 1e9, k_out)
    best_order = order.copy()
    best_dates = dates.copy()
    best = cur
    temperature = 100.0
    start = time.perf_counter()
    for _ in range(levels):
        rand = rng.random((tries, 6))
        cur, best, _ = backend.sdc_level(
            costs, taxis, daxis, op_add, weights, m, n, 1e9,
            taxis[0], taxis[-1], order, dates, cur,
            best_order, best_dates, best, temperature, rand)
        temperature *= 0.999
    elapsed = time.perf_counter() - start
    return elapsed, (best, order.copy(), dates.copy())


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--levels", type=int, default=50)
    parser.add_argument("--tries", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    dist = _tsp_workload(rng)
    sdc = _sdc_workload(rng)

    backends = [("pure", _pure)]
    if _speedups is not None:
        backends.append(("cython", _speedups))
    else:
        print("compiled backend not available; benchmarking fallback only")

    for label, bench, work in (("tsp_level", bench_tsp, dist),
                               ("sdc_level", bench_sdc, sdc)):
        print(f"\n{label}: {args.levels} levels x {args.tries} tries")
        results = {}
        for name, backend in backends:
            elapsed, state = bench(backend, work, args.levels, args.tries,
                                   args.seed)
            results[name] = (elapsed, state)
            per_level = elapsed / args.levels * 1e3
            print(f"  {name:7s} {elapsed:8.3f} s total, "
                  f"{per_level:8.3f} ms/level")
        if len(results) == 2:
            p_state = results["pure"][1]
            c_state = results["cython"][1]
            same = (p_state[0] == c_state[0]
                    and all(np.array_equal(a, b)
                            for a, b in zip(p_state[1:], c_state[1:])))
            speedup = results["pure"][0] / results["cython"][0]
            print(f"  speedup {speedup:.1f}x, results "
                  f"{'identical' if same else 'DIFFER (bug!)'}")


if __name__ == "__main__":
    main()
