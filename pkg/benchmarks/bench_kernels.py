#!/usr/bin/env python3
"""Benchmark the compiled sweep kernels against the pure-Python fallback.

Times the three hot loops on realistic parameters and prints throughput
plus the speedup ratio.  Run after an editable install:

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

from maskrecon import _kernels_py

try:
    from maskrecon import _kernels
except ImportError:
    _kernels = None

MONT_CODE = 2  # GadgetKind.MONTGOMERY.code


def timed(fn):
    t0 = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - t0


def bench_case(name, evals, make_fn):
    py_result, py_t = timed(make_fn(_kernels_py))
    print(f"\n{name}  ({evals:,} gadget evaluations)")
    print(f"  {'python':>7}: {py_t:8.3f}s  {evals / py_t / 1e6:8.2f} M evals/s")
    if _kernels is None:
        print("  (compiled kernels not built; skipping)")
        return
    c_result, c_t = timed(make_fn(_kernels))
    if c_result != py_result:
        raise SystemExit(f"{name}: backend results disagree")
    print(f"  {'c':>7}: {c_t:8.3f}s  {evals / c_t / 1e6:8.2f} M evals/s")
    print(f"  speedup: {py_t / c_t:.1f}x")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="smaller sweeps for a fast smoke run")
    args = parser.parse_args()

    q, s, w = (257, 5, 14) if args.quick else (3329, 16, 28)
    off = pow(2, w - s, q)
    bench_case(
        f"max-multiplicity sweep, q={q}", q * q,
        lambda mod: lambda: mod.sweep_max_mult(MONT_CODE, q, off, 1, range(q)))

    q_prime = (-pow(q, -1, 1 << s)) % (1 << s)
    bench_case(
        f"algorithm cross-check sweep, q={q}", q * q,
        lambda mod: lambda: mod.cross_check_sweep(q, s, w, q_prime, range(q)))

    pq = 5 if args.quick else 7
    poff = pow(2, 2, pq)
    kinds, offs, ts = [1, 1, 1], [poff] * 3, [1, 1, 1]
    bench_case(
        f"3-stage pipeline enumeration, q={pq}", pq * pq ** 5,
        lambda mod: lambda: [mod.pipeline_histogram(kinds, pq, offs, ts, x)
                             for x in range(pq)])


if __name__ == "__main__":
    main()
