#!/usr/bin/env python3
"""Time the numba lane against the pure-numpy lane for both hot kernels.

Run from the repo root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --rows 2000 --cols 80 --epochs 500

The numba lane is warmed up once before timing so compilation cost is
reported separately instead of polluting the steady-state numbers. With
FAIRDESK_NO_NUMBA=1 (or numba missing) only the numpy lane is timed.
"""

import argparse
import json
import time

import numpy as np

from fairdesk import _kernels


def _time(fn, *args, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_logistic(rows, cols, epochs, repeats, rng):
    X = rng.random((rows, cols))
    w_true = rng.standard_normal(cols)
    y = (X @ w_true + 0.3 * rng.standard_normal(rows) > 0).astype(np.float64)
    args = (X, y, 0.1, epochs, 1e-3)

    lanes = {"numpy": _time(_kernels._numpy_logistic_gd, *args, repeats=repeats)}
    if _kernels.HAS_NUMBA:
        compile_start = time.perf_counter()
        _kernels._numba_logistic_gd(X[:8], y[:8], 0.1, 2, 1e-3)  # warm up / compile
        compile_time = time.perf_counter() - compile_start
        lanes["numba"] = _time(_kernels._numba_logistic_gd, *args, repeats=repeats)
        lanes["numba_compile"] = compile_time
        wn, bn = _kernels._numba_logistic_gd(*args)
        wp, bp = _kernels._numpy_logistic_gd(*args)
        assert np.allclose(wn, wp, atol=1e-9) and abs(bn - bp) <= 1e-9
    return lanes


def bench_pairwise(points, cols, repeats, rng):
    X = rng.random((points, cols))
    lanes = {"numpy": _time(_kernels._numpy_pairwise_sq_dists, X, repeats=repeats)}
    if _kernels.HAS_NUMBA:
        compile_start = time.perf_counter()
        _kernels._numba_pairwise_sq_dists(X[:4])
        compile_time = time.perf_counter() - compile_start
        lanes["numba"] = _time(_kernels._numba_pairwise_sq_dists, X, repeats=repeats)
        lanes["numba_compile"] = compile_time
        assert np.allclose(_kernels._numba_pairwise_sq_dists(X),
                           _kernels._numpy_pairwise_sq_dists(X), atol=1e-9)
    return lanes


def report(name, lanes):
    print(f"\n{name}")
    print("-" * len(name))
    print(f"  numpy lane   {lanes['numpy'] * 1e3:10.2f} ms")
    if "numba" in lanes:
        speedup = lanes["numpy"] / lanes["numba"] if lanes["numba"] else float("inf")
        print(f"  numba lane   {lanes['numba'] * 1e3:10.2f} ms   ({speedup:.2f}x)")
        print(f"  numba compile (one-off) {lanes['numba_compile'] * 1e3:7.2f} ms")
    else:
        print("  numba lane   skipped (disabled or unavailable)")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=800,
                        help="training rows for the gradient-descent kernel")
    parser.add_argument("--cols", type=int, default=60)
    parser.add_argument("--epochs", type=int, default=2000)
    parser.add_argument("--points", type=int, default=200,
                        help="instances for the pairwise-distance kernel")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats; best time is reported")
    parser.add_argument("--json", dest="json_out",
                        help="also write raw numbers to this file")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"active lane: {_kernels.ACTIVE_LANE} (HAS_NUMBA={_kernels.HAS_NUMBA})")

    logistic = bench_logistic(args.rows, args.cols, args.epochs, args.repeats, rng)
    report(f"logistic GD  ({args.rows}x{args.cols}, {args.epochs} epochs)", logistic)

    pairwise = bench_pairwise(args.points, args.cols, args.repeats, rng)
    report(f"pairwise squared distances  ({args.points}x{args.cols})", pairwise)

    if args.json_out:
        doc = {"active_lane": _kernels.ACTIVE_LANE,
               "logistic_gd": logistic, "pairwise_sq_dists": pairwise,
               "shape": {"rows": args.rows, "cols": args.cols,
                         "epochs": args.epochs, "points": args.points}}
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
        print(f"\nwrote {args.json_out}")


if __name__ == "__main__":
    main()
