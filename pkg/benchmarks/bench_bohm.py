#!/usr/bin/env python3
"""Benchmark the trajectory kernels: numba @njit vs the pure-numpy fallback.

The numpy build vectorizes across the ensemble, so it amortizes well at
large particle counts; the jitted build wins outright for small ensembles
and single trajectories where per-step array overhead dominates.

Run:  python3 benchmarks/bench_bohm.py
Select a backend globally via INTERFEROX_BACKEND=numba|numpy.
"""

import time

import numpy as np

from interferox import bohm
from interferox._backend import HAS_NUMBA

N_STEPS = 600
REPEATS = 3


def time_ensemble(wave, x0s, horizon, backend):
    dt = horizon / N_STEPS
    best = np.inf
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        bohm.integrate_ensemble(wave, x0s, (0.0, horizon), dt, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    wave = bohm.AnalyticTwoSlitWave()
    horizon = 6 * wave.spreading_time
    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    if HAS_NUMBA:
        # trigger compilation outside the timed region
        warm = bohm.sample_initial_positions(wave, 4, seed=0)
        bohm.integrate_ensemble(wave, warm, (0.0, horizon), horizon / 8,
                                backend="numba")

    print(f"{N_STEPS} RK4 steps over {horizon:.3e} s, best of {REPEATS}")
    header = f"{'particles':>10}" + "".join(f"{b:>12}" for b in backends)
    if HAS_NUMBA:
        header += f"{'speedup':>10}"
    print(header)
    for n in (1, 10, 100, 1000, 4000):
        x0s = bohm.sample_initial_positions(wave, n, seed=42)
        times = [time_ensemble(wave, x0s, horizon, b) for b in backends]
        row = f"{n:>10}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times)
        if HAS_NUMBA:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
