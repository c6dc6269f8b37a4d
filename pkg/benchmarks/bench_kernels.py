#!/usr/bin/env python3
"""Benchmark the jitted kernels against their pure-numpy fallbacks.

Runs every kernel through both code paths on identical inputs and prints a
timing table.  Jit compilation is triggered once before timing.

    python benchmarks/bench_kernels.py [--full]

``--full`` enlarges the enumeration instance (noticeably slower on the
fallback path).
"""

import argparse
import time

import numpy as np

from ktreesub import _kernels as K


def timed(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_rgs(m, k):
    n = K.count_partitions_modk(m, k)
    out_a = np.zeros((n, m), dtype=np.int8)
    out_b = np.zeros((n, m), dtype=np.int8)
    t_numba = None
    if K.HAVE_NUMBA:
        t_numba, _ = timed(K._rgs_filtered_numba, m, k, out_a, repeat=2)
    t_numpy, _ = timed(K._rgs_filtered_python, m, k, out_b, repeat=1)
    if K.HAVE_NUMBA:
        assert np.array_equal(out_a, out_b)
    return f"rgs_filtered(m={m}, k={k}) [{n} rows]", t_numba, t_numpy


def bench_refinement(m, k):
    rgs = K.rgs_filtered(m, k)
    fo = K._first_occurrences(rgs)
    contig = np.ascontiguousarray(rgs)
    t_numba = None
    res_a = None
    if K.HAVE_NUMBA:
        t_numba, res_a = timed(K._refinement_leq_numba, contig, fo)
    t_numpy, res_b = timed(K._refinement_leq_numpy, rgs, fo)
    if res_a is not None:
        assert np.array_equal(res_a, res_b)
    return f"refinement_leq on {rgs.shape[0]}x{rgs.shape[0]}", t_numba, t_numpy


def bench_closure(n, seed=0):
    rng = np.random.default_rng(seed)
    adj = np.triu(rng.random((n, n)) < 2.0 / n, k=1)
    t_numba = None
    res_a = None
    if K.HAVE_NUMBA:
        t_numba, res_a = timed(K._closure_numba, adj)
    t_numpy, res_b = timed(K._closure_numpy, adj)
    if res_a is not None:
        assert np.array_equal(res_a, res_b)
    return f"transitive closure on {n} elements", t_numba, t_numpy


def bench_block_compat(n, seed=1):
    rng = np.random.default_rng(seed)
    masks = rng.integers(1, 2**50, size=n).astype(np.uint64)
    t_numba = None
    res_a = None
    if K.HAVE_NUMBA:
        t_numba, res_a = timed(K._block_compat_numba, masks)
    t_numpy, res_b = timed(K._block_compat_numpy, masks)
    if res_a is not None:
        assert np.array_equal(res_a, res_b)
    return f"block compatibility on {n} masks", t_numba, t_numpy


def bench_snf(rows, cols, seed=2):
    rng = np.random.default_rng(seed)
    mat = np.zeros((rows, cols), dtype=np.int64)
    fill = rng.random((rows, cols)) < 0.03
    mat[fill] = rng.choice([-1, 1], size=int(fill.sum()))
    t_numba = None
    res_a = None
    if K.HAVE_NUMBA:
        t_numba, (da, ok_a) = timed(K._snf_int64_numba, mat.copy(), K._SNF_INT64_BOUND)
        res_a = (list(da), ok_a)
    t_numpy, (db, ok_b) = timed(K._snf_int64_numpy, mat.copy(), K._SNF_INT64_BOUND)
    if res_a is not None and res_a[1] and ok_b:
        assert res_a[0] == list(db)
    return f"int64 smith normal form {rows}x{cols}", t_numba, t_numpy


def fmt(t):
    return "    n/a" if t is None else f"{t * 1000:9.1f}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--full", action="store_true", help="larger instances")
    args = ap.parse_args()

    if K.HAVE_NUMBA:
        K.warmup()
    else:
        print("numba not importable; only the numpy path is timed")
    print(f"active backend: {K.BACKEND}\n")

    rows = [
        bench_rgs(12 if args.full else 11, 1),
        bench_refinement(10, 3),  # the 1907-element restricted poset
        bench_closure(2000 if args.full else 1200),
        bench_block_compat(4000 if args.full else 2500),
        bench_snf(300 if args.full else 150, 500 if args.full else 350),
    ]
    print(f"{'kernel':<48} {'numba ms':>9} {'numpy ms':>9} {'speedup':>8}")
    for name, t_numba, t_numpy in rows:
        speed = "" if t_numba is None else f"{t_numpy / t_numba:7.1f}x"
        print(f"{name:<48} {fmt(t_numba)} {fmt(t_numpy)} {speed:>8}")


if __name__ == "__main__":
    main()
