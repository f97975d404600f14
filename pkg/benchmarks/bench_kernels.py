"""Benchmark the gain kernel: numba JIT path vs the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--repeats 5]
The workload mirrors the coverage-map hot loop: every in-region grid point
against all first-iteration beams.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from leobeams import SceneConfig, build_scene
from leobeams.kernels import _HAVE_NUMBA, gain_matrix_numba, gain_matrix_numpy
from leobeams.simulate import roi_grid


def _workload(step: float):
    scene = build_scene(SceneConfig())
    xs, ys = roi_grid(scene.roi, step)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    mask = scene.roi.contains(gx, gy)
    targets = scene.cycle.targets(0)
    g = scene.geometry
    return (gx[mask], gy[mask], targets[:, 0], targets[:, 1], scene.h_sat,
            g.subarray_nx, g.subarray_ny, g.spacing)


def _time(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--step", type=float, default=2000.0,
                        help="grid spacing in meters")
    args = parser.parse_args()

    work = _workload(args.step)
    n_pts, n_beams = work[0].size, work[2].size
    print(f"workload: {n_pts} grid points x {n_beams} beams")

    t_np = _time(gain_matrix_numpy, work, args.repeats)
    print(f"numpy fallback : {t_np * 1e3:9.2f} ms")

    if _HAVE_NUMBA:
        gain_matrix_numba(*work)  # compile before timing
        t_nb = _time(gain_matrix_numba, work, args.repeats)
        print(f"numba JIT      : {t_nb * 1e3:9.2f} ms   ({t_np / t_nb:.1f}x)")
        ref = gain_matrix_numpy(*work)
        jit = gain_matrix_numba(*work)
        err = float(np.max(np.abs(jit - ref) / np.maximum(ref, 1e-300)))
        print(f"max |rel diff| : {err:.3e}")
    else:
        print("numba JIT      : unavailable in this environment")


if __name__ == "__main__":
    main()
