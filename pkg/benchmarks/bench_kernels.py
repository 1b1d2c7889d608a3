#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

Times the thermostat RK4 stepper and the witness-search ascent on
representative workloads and prints a comparison table.  The same code
paths are selected at import time by WEYLCURV_NO_NUMBA; here both
implementations are imported directly so one process covers both.

Usage: python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

import weylcurv as wc
from weylcurv import _kernels_numba, _kernels_numpy
from weylcurv.weyl import _start_frames, pair_table, weyl_form


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def rk4_workload():
    W = wc.WeylStructure(wc.solvable((1.0, -1.0)), np.eye(3)[0], 1.0)
    gam = np.ascontiguousarray(W.space.gamma)
    f = np.ascontiguousarray(W.effective_field)
    v0 = np.array([0.6, 0.8, 0.0])
    return gam, f, v0


def ascent_workload(n=5):
    rng = np.random.default_rng(0)
    mu = np.sort(rng.uniform(0.5, 3.0, size=n - 1))
    S = wc.solvable(tuple(mu))
    E = np.zeros(n)
    E[0] = mu[0] + 0.35  # indefinite form: a genuine search
    Q = np.ascontiguousarray(weyl_form(wc.WeylStructure(S, E, 1.0)).Q)
    pi, pj = pair_table(n)
    starts = np.ascontiguousarray(_start_frames(n, 64, seed=0))
    return Q, pi, pj, starts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    gam, f, v0 = rk4_workload()
    Q, pi, pj, starts = ascent_workload()

    # warm up the jit (compilation is cached on disk afterwards)
    _kernels_numba.rk4_velocity_path(gam, f, v0, 1e-3, 10)
    _kernels_numba.ascend_pairs(Q, pi, pj, starts, 10, 1e-11, np.inf)

    rows = []
    for steps in (10_000, 100_000):
        t_np = best_of(lambda: _kernels_numpy.rk4_velocity_path(gam, f, v0, 1e-3, steps),
                       args.repeats)
        t_nb = best_of(lambda: _kernels_numba.rk4_velocity_path(gam, f, v0, 1e-3, steps),
                       args.repeats)
        rows.append((f"rk4 thermostat, {steps} steps", t_np, t_nb))

    for iters in (200, 500):
        t_np = best_of(lambda: _kernels_numpy.ascend_pairs(Q, pi, pj, starts,
                                                           iters, 1e-11, np.inf),
                       args.repeats)
        t_nb = best_of(lambda: _kernels_numba.ascend_pairs(Q, pi, pj, starts,
                                                           iters, 1e-11, np.inf),
                       args.repeats)
        rows.append((f"witness ascent, 64 starts x {iters} iters", t_np, t_nb))

    # agreement check on the benchmark workloads
    p_np, _ = _kernels_numpy.rk4_velocity_path(gam, f, v0, 1e-3, 1000)
    p_nb, _ = _kernels_numba.rk4_velocity_path(gam, f, v0, 1e-3, 1000)
    v_np, _ = _kernels_numpy.ascend_pairs(Q, pi, pj, starts, 500, 1e-11, np.inf)
    v_nb, _ = _kernels_numba.ascend_pairs(Q, pi, pj, starts, 500, 1e-11, np.inf)

    width = max(len(r[0]) for r in rows)
    print(f"{'workload'.ljust(width)}   numpy      numba      speedup")
    for name, t_np, t_nb in rows:
        print(f"{name.ljust(width)}   {t_np*1e3:8.2f}ms {t_nb*1e3:8.2f}ms "
              f"{t_np/t_nb:8.1f}x")
    print(f"\nbackend agreement: rk4 max|diff| = {np.abs(p_np - p_nb).max():.2e}, "
          f"ascent values {v_np:.12g} / {v_nb:.12g}")


if __name__ == "__main__":
    main()
