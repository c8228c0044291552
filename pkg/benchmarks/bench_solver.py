"""Compare the numba and numpy solver backends on representative workloads.

Times the greedy dominant-support search (and the two-antenna joint variant)
on random complex dictionaries at the sizes the simulator actually uses:
M reserved-tone measurements against an N-bin band. Reports the median solve
time per backend and the numba speedup.

Run:  python benchmarks/bench_solver.py [--reps 200]
"""

import argparse
import time

import numpy as np

from nbisim import SabmpParams, default_t_max, greedy_search, mmv_greedy_search

CASES = [
    # (measurements, band size) as used by the bundled scenarios
    (8, 128),
    (16, 128),
    (32, 256),
    (64, 512),
]
RATE = 1.0 / 32.0


def _instance(rng, m, n):
    psi = (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(
        2.0 * m
    )
    x = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return x, psi


def _median_time(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def bench(reps: int) -> None:
    rng = np.random.default_rng(42)
    print(f"{'case':>14} {'t_max':>5} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for m, n in CASES:
        t_max = default_t_max(RATE, n, m)
        params = SabmpParams(lam=RATE, noise_var=0.05, t_max=t_max)
        x, psi = _instance(rng, m, n)
        for backend in ("numpy", "numba"):  # warm both (JIT + caches)
            greedy_search(x, psi, params, backend=backend)
        t_np = _median_time(lambda: greedy_search(x, psi, params, backend="numpy"), reps)
        t_nb = _median_time(lambda: greedy_search(x, psi, params, backend="numba"), reps)
        label = f"M={m} N={n}"
        print(
            f"{label:>14} {t_max:>5} {t_np * 1e6:>10.1f}us {t_nb * 1e6:>10.1f}us"
            f" {t_np / t_nb:>7.2f}x"
        )

    # two-antenna joint solve, as in the SIMO scenario
    m, n = 8, 128
    t_max = default_t_max(RATE, n, m)
    params = SabmpParams(lam=RATE, noise_var=0.05, t_max=t_max)
    systems = [_instance(rng, m, n) for _ in range(2)]
    for backend in ("numpy", "numba"):
        mmv_greedy_search(systems, params, backend=backend)
    t_np = _median_time(lambda: mmv_greedy_search(systems, params, backend="numpy"), reps)
    t_nb = _median_time(lambda: mmv_greedy_search(systems, params, backend="numba"), reps)
    label = f"MMV 2x M={m}"
    print(
        f"{label:>14} {t_max:>5} {t_np * 1e6:>10.1f}us {t_nb * 1e6:>10.1f}us"
        f" {t_np / t_nb:>7.2f}x"
    )


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=200, help="timed repetitions")
    bench(parser.parse_args().reps)
