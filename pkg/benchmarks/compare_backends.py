#!/usr/bin/env python3
"""Compare the numba and numpy float64 backends on bulk transforms.

Usage:
    python benchmarks/compare_backends.py [--size 729] [--levels 2] [--repeats 3]

Times a full decompose+reconstruct on a size x size float64 tensor for the
box (p=3) and accuracy-4 banks under each backend, checks the outputs agree
bitwise, and prints a small table. PCSWAVE_THREADS applies to the numba
backend as usual (try PCSWAVE_THREADS=4).
"""

import argparse
import os
import time

import numpy as np

from pcswave.kernels import HAS_NUMBA
from pcswave.presets import box_bank, deg4_bank
from pcswave.tensor import Tensor
from pcswave.transform import decompose_fast, reconstruct_fast


def run_once(bank, data, levels):
    y = Tensor.from_numpy(data)
    t0 = time.perf_counter()
    coeffs = decompose_fast(y, bank, levels)
    t1 = time.perf_counter()
    recon = reconstruct_fast(coeffs, bank)
    t2 = time.perf_counter()
    return t1 - t0, t2 - t1, recon.data


def bench(bank, name, data, levels, repeats):
    rows = []
    outputs = {}
    backends = (["numba"] if HAS_NUMBA else []) + ["numpy"]
    for backend in backends:
        os.environ["PCSWAVE_BACKEND"] = backend
        run_once(bank, data, levels)  # warm-up: jit compile / cache touch
        best = (float("inf"), float("inf"))
        for _ in range(repeats):
            dec, rec, out = run_once(bank, data, levels)
            best = (min(best[0], dec), min(best[1], rec))
            outputs[backend] = out
        rows.append((backend, best))
    print(f"\n{name}: shape={data.shape} levels={levels} "
          f"(best of {repeats}, seconds)")
    print(f"  {'backend':<8} {'decompose':>10} {'reconstruct':>12}")
    for backend, (dec, rec) in rows:
        print(f"  {backend:<8} {dec:>10.4f} {rec:>12.4f}")
    if len(outputs) == 2:
        same = np.array_equal(outputs["numba"], outputs["numpy"])
        print(f"  backends agree bitwise: {same}")
    err = float(np.max(np.abs(outputs[rows[0][0]] - data)))
    print(f"  round-trip max abs error: {err:.3e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=729)
    ap.add_argument("--levels", type=int, default=2)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if not HAS_NUMBA:
        print("numba not importable; timing the numpy fallback only")
    rng = np.random.default_rng(0)
    data = rng.standard_normal((args.size, args.size))
    threads = os.environ.get("PCSWAVE_THREADS", "1 (unset)")
    print(f"PCSWAVE_THREADS={threads}")
    bench(box_bank(3, 2), "box bank p=3 n=2", data, args.levels, args.repeats)
    bench(deg4_bank(2), "accuracy-4 bank p=3 n=2", data, args.levels, args.repeats)


if __name__ == "__main__":
    main()
