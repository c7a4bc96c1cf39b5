"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row reports the best wall time of N runs after one warm-up call
(the warm-up absorbs JIT compilation) and the largest output difference.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from harmap import _kernels as kern
from harmap import beltrami_pde as bp
from harmap import catalog
from harmap._accel import NUMBA_AVAILABLE
from harmap.grid import FieldGrid


def best_time(fn, repeat: int) -> float:
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def sor_case(n: int):
    g = FieldGrid.uniform((0.5, 1.5), (0.0, 1.0), n, n)
    xi, eta = g.mesh()
    R = np.zeros(g.shape)
    edge = eta.copy()
    R[0], R[-1], R[:, 0], R[:, -1] = edge[0], edge[-1], edge[:, 0], edge[:, -1]
    coeffs = bp.stencil_coefficients(g.with_values(catalog.litam_omega(xi)))

    def make(kernel):
        out = {}

        def run():
            work = R.copy()
            kernel(work, *coeffs, 1.9, 1e-10, 200_000, 10)
            out["R"] = work

        return run, out

    return make


def wolf_case(steps: int):
    def make(kernel):
        out = {}

        def run():
            out["R"] = np.concatenate(kernel(1.2, 2.0, steps))

        return run, out

    return make


def lines_case(n: int, width: int):
    rng = np.random.default_rng(0)
    a = rng.uniform(-1, 1, (n, width))
    b = rng.uniform(0, 0.5, (n, width))
    am, bm = a[:-1].copy(), b[:-1].copy()
    w0 = rng.uniform(0.1, 0.5, width)

    def make(kernel):
        out = {}

        def run():
            out["R"] = kernel(w0, a, am, b, bm, 1.0 / n, True)

        return run, out

    return make


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")

    cases = [
        ("sor 65x65", sor_case(65), kern._sor_numba, kern._sor_numpy),
        ("sor 129x129", sor_case(129), kern._sor_numba, kern._sor_numpy),
        ("wolf rk4 20k steps", wolf_case(20_000), kern._wolf_rk4_numba, kern._wolf_rk4_numpy),
        ("rk4 lines 2001x401", lines_case(2001, 401), kern._rk4_lines_numba, kern._rk4_lines_numpy),
    ]
    print(f"{'kernel':<22}{'numba s':>12}{'numpy s':>12}{'speedup':>10}{'max diff':>12}")
    for name, make, fast, slow in cases:
        run_f, out_f = make(fast)
        run_s, out_s = make(slow)
        tf = best_time(run_f, args.repeat)
        ts = best_time(run_s, max(1, args.repeat // 2))
        diff = float(np.max(np.abs(out_f["R"] - out_s["R"])))
        print(f"{name:<22}{tf:>12.4f}{ts:>12.4f}{ts / tf:>10.1f}{diff:>12.1e}")


if __name__ == "__main__":
    main()
