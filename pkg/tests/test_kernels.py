"""Kernel backends: the pure-Python and compiled triangle kernels must agree
bit for bit on enumeration tables and on Glauber sweeps driven by identical
pre-drawn randomness."""

from itertools import combinations

import numpy as np
import pytest

from ergmphase import _kernels
from ergmphase._kernels import pure

try:
    from ergmphase._kernels import _speedups
except ImportError:
    _speedups = None

needs_compiled = pytest.mark.skipif(
    _speedups is None, reason="compiled kernel module not built"
)


def brute_table(n):
    """Per-mask direct evaluation, no incremental tricks."""
    pairs = list(combinations(range(n), 2))
    m = len(pairs)
    max_t = n * (n - 1) * (n - 2) // 6
    table = np.zeros((m + 1, max_t + 1), dtype=np.int64)
    for mask in range(1 << m):
        rows = [0] * n
        for b, (i, j) in enumerate(pairs):
            if (mask >> b) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        e = sum(r.bit_count() for r in rows) // 2
        t = 0
        for i, j, k in combinations(range(n), 3):
            if (rows[i] >> j) & 1 and (rows[i] >> k) & 1 and (rows[j] >> k) & 1:
                t += 1
        table[e, t] += 1
    return table


def test_backend_label():
    assert _kernels.BACKEND in ("pure", "compiled")
    assert pure.BACKEND == "pure"


def test_pure_table_against_brute_force():
    assert np.array_equal(pure.triangle_table(4), brute_table(4))


def test_table_counts_all_graphs():
    for n in (3, 4, 5, 6):
        tab = pure.triangle_table(n)
        assert int(tab.sum()) == 1 << (n * (n - 1) // 2)


def test_prefix_decomposition_matches_full_table():
    full = pure.triangle_table(5)
    split = sum(pure.triangle_table(5, 3, v) for v in range(8))
    assert np.array_equal(full, split)


def test_prefix_bits_validation():
    with pytest.raises(ValueError):
        pure.triangle_table(4, prefix_bits=7)


def test_state_roundtrip():
    rows = [6, 5, 3, 0]
    state = pure.make_state(rows, 4)
    assert pure.state_rows(state, 4) == rows
    # make_state copies; mutating the state leaves the input alone
    state[0] = 0
    assert rows[0] == 6


@needs_compiled
def test_compiled_tables_match_pure():
    for n in (3, 4, 5, 6):
        assert np.array_equal(pure.triangle_table(n), _speedups.triangle_table(n))


@needs_compiled
def test_compiled_prefix_tables_match_pure():
    for v in (0, 1, 5, 7):
        assert np.array_equal(
            pure.triangle_table(5, 3, v), _speedups.triangle_table(5, 3, v)
        )


@needs_compiled
def test_compiled_state_roundtrip():
    rows = [18, 33, 12, 3, 40, 0]
    state = _speedups.make_state(rows, 6)
    assert _speedups.state_rows(state, 6) == rows


def _run_sweeps(impl, n, seed, sweeps):
    pairs = list(combinations(range(n), 2))
    npairs = len(pairs)
    pi_map = np.array([a for a, _ in pairs], dtype=np.int64)
    pj_map = np.array([b for _, b in pairs], dtype=np.int64)
    rng = np.random.default_rng(seed)
    state = impl.make_state([0] * n, n)
    e, t, acc = 0, 0, 0
    for _ in range(sweeps):
        pids = rng.integers(0, npairs, size=npairs)
        unifs = rng.random(npairs)
        e, t, a = impl.sweep_triangle(
            state, n, 0.4, -6.0 * 0.5 / n, pi_map[pids], pj_map[pids], unifs, e, t
        )
        acc += a
    return impl.state_rows(state, n), e, t, acc


def test_sweep_counters_consistent_with_state():
    rows, e, t, _acc = _run_sweeps(pure, 6, seed=9, sweeps=30)
    direct_e = sum(r.bit_count() for r in rows) // 2
    direct_t = 0
    for i, j, k in combinations(range(6), 3):
        if (rows[i] >> j) & 1 and (rows[i] >> k) & 1 and (rows[j] >> k) & 1:
            direct_t += 1
    assert (e, t) == (direct_e, direct_t)


@needs_compiled
def test_sweeps_bit_identical_across_backends():
    for seed in (0, 1, 42):
        assert _run_sweeps(pure, 6, seed, 25) == _run_sweeps(_speedups, 6, seed, 25)


@needs_compiled
def test_sweep_acceptance_counts_match():
    _, _, _, acc_p = _run_sweeps(pure, 5, seed=3, sweeps=40)
    _, _, _, acc_c = _run_sweeps(_speedups, 5, seed=3, sweeps=40)
    assert acc_p == acc_c
