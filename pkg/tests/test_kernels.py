import numpy as np
import pytest

from ktreesub import _kernels as K
from oracles import brute_modk_partitions, closure_oracle

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba unavailable")


def test_count_matches_bruteforce():
    for m in range(1, 8):
        for k in (1, 2, 3, 4):
            assert K.count_partitions_modk(m, k) == len(brute_modk_partitions(m, k))


def test_rgs_enumeration_matches_bruteforce():
    for m, k in [(5, 2), (6, 1), (7, 3)]:
        rows = K.rgs_filtered(m, k)
        blocks = set()
        for row in rows:
            groups = {}
            for pos, c in enumerate(row):
                groups.setdefault(int(c), []).append(pos + 1)
            blocks.add(tuple(tuple(b) for b in sorted(groups.values(), key=lambda b: b[0])))
        assert blocks == set(brute_modk_partitions(m, k))


def test_rgs_rows_are_valid_growth_strings():
    rows = K.rgs_filtered(6, 2)
    for row in rows:
        assert row[0] == 0
        for j in range(1, len(row)):
            assert row[j] <= max(row[:j]) + 1


def test_refinement_paths_agree():
    rgs = K.rgs_filtered(6, 1)
    fo = K._first_occurrences(rgs)
    a = K._refinement_leq_numpy(rgs, fo)
    if K.HAVE_NUMBA:
        b = K._refinement_leq_numba(np.ascontiguousarray(rgs), fo)
        assert np.array_equal(a, b)


def test_closure_paths_agree_and_match_oracle():
    rng = np.random.default_rng(0)
    for _ in range(10):
        n = int(rng.integers(2, 30))
        adj = np.triu(rng.random((n, n)) < 0.15, k=1)
        a = K._closure_numpy(adj)
        assert a.tolist() == closure_oracle(adj.tolist())
        if K.HAVE_NUMBA:
            b = K._closure_numba(adj)
            assert np.array_equal(a, b)


def test_block_compat_paths_agree():
    rng = np.random.default_rng(1)
    masks = rng.integers(1, 2**20, size=50).astype(np.uint64)
    a = K._block_compat_numpy(masks)
    for i in range(len(masks)):
        for j in range(len(masks)):
            inter = int(masks[i]) & int(masks[j])
            expect = inter == 0 or inter == int(masks[i]) or inter == int(masks[j])
            assert a[i, j] == expect
    if K.HAVE_NUMBA:
        b = K._block_compat_numba(masks)
        assert np.array_equal(a, b)


def test_snf_paths_agree():
    # the int64 passes may bail out on coefficient growth (ok=False); when
    # they complete they must agree with the exact big-integer reference,
    # and the dispatcher must always return the exact answer
    rng = np.random.default_rng(2)
    for _ in range(25):
        r, c = rng.integers(1, 10, size=2)
        mat = rng.integers(-5, 6, size=(int(r), int(c))).astype(np.int64)
        exact = K._snf_exact_python([[int(x) for x in row] for row in mat])
        assert K.snf_diagonal(mat) == exact
        dn, ok_n = K._snf_int64_numpy(mat.copy(), K._SNF_INT64_BOUND)
        if ok_n:
            assert list(dn) == exact
        if K.HAVE_NUMBA:
            db, ok_b = K._snf_int64_numba(mat.copy(), K._SNF_INT64_BOUND)
            if ok_b:
                assert list(db) == exact


def test_snf_divisibility_chain():
    rng = np.random.default_rng(4)
    for _ in range(10):
        mat = rng.integers(-6, 7, size=(6, 8))
        diag = [d for d in K.snf_diagonal(mat) if d != 0]
        for a, b in zip(diag, diag[1:]):
            assert b % a == 0


def test_snf_overflow_guard_falls_back_exact():
    big = np.array([[2**40, 1], [1, 2**40]], dtype=object)
    diag = K.snf_diagonal(big)
    assert diag == [1, 2**80 - 1]


@needs_numba
def test_backend_dispatch_env(monkeypatch):
    monkeypatch.setenv("KTREESUB_BACKEND", "numpy")
    assert K._pick_backend() == "numpy"
    monkeypatch.setenv("KTREESUB_BACKEND", "numba")
    assert K._pick_backend() == "numba"
    monkeypatch.delenv("KTREESUB_BACKEND")
    assert K._pick_backend() in ("numba", "numpy")


def test_warmup_runs():
    K.warmup()
