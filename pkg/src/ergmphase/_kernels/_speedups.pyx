# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Gray-code triangle enumeration tables and the triangle
Glauber sweep. Signatures and numerical behavior mirror ``pure.py`` exactly;
the sweep consumes caller-drawn random arrays so results are bit-identical
across backends."""

import numpy as np

from libc.math cimport exp
from libc.stdint cimport int64_t, uint64_t

BACKEND = "compiled"

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int popcount64(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    #else
    static inline int popcount64(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    }
    static inline int ctz64(unsigned long long x) {
        int c = 0;
        while (!(x & 1ULL)) { x >>= 1; c++; }
        return c;
    }
    #endif
    """
    int popcount64(unsigned long long x) nogil
    int ctz64(unsigned long long x) nogil


def triangle_table(int n, int prefix_bits=0, unsigned long long prefix_value=0):
    """Joint (edge count, triangle count) table over all labeled graphs on n
    nodes with the top ``prefix_bits`` edge bits frozen to ``prefix_value``.
    Edge bits are lexicographic over pairs (i < j)."""
    if n < 1 or n > 63:
        raise ValueError("triangle_table supports 1 <= n <= 63")
    cdef int m = n * (n - 1) // 2
    if prefix_bits < 0 or prefix_bits > m:
        raise ValueError(f"prefix_bits must be in [0, {m}]")
    cdef int low = m - prefix_bits
    cdef int max_t = n * (n - 1) * (n - 2) // 6
    cdef int width = max_t + 1

    pair_i_np = np.empty(m, dtype=np.intc)
    pair_j_np = np.empty(m, dtype=np.intc)
    cdef int[::1] pair_i = pair_i_np
    cdef int[::1] pair_j = pair_j_np
    cdef int i, j, b = 0
    for i in range(n):
        for j in range(i + 1, n):
            pair_i[b] = i
            pair_j[b] = j
            b += 1

    cdef uint64_t rows[63]
    for i in range(n):
        rows[i] = 0

    table_np = np.zeros((m + 1) * width, dtype=np.int64)
    cdef int64_t[::1] table = table_np
    cdef int e_count = 0, t_count = 0, c, t
    for t in range(prefix_bits):
        if (prefix_value >> t) & 1:
            i = pair_i[low + t]
            j = pair_j[low + t]
            t_count += popcount64(rows[i] & rows[j])
            e_count += 1
            rows[i] |= (<uint64_t>1) << j
            rows[j] |= (<uint64_t>1) << i
    table[e_count * width + t_count] += 1

    cdef unsigned long long s
    cdef unsigned long long end = (<unsigned long long>1) << low
    with nogil:
        for s in range(1, end):
            b = ctz64(s)
            i = pair_i[b]
            j = pair_j[b]
            c = popcount64(rows[i] & rows[j])
            if rows[i] & ((<uint64_t>1) << j):
                rows[i] &= ~((<uint64_t>1) << j)
                rows[j] &= ~((<uint64_t>1) << i)
                e_count -= 1
                t_count -= c
            else:
                rows[i] |= (<uint64_t>1) << j
                rows[j] |= (<uint64_t>1) << i
                e_count += 1
                t_count += c
            table[e_count * width + t_count] += 1
    return table_np.reshape(m + 1, width)


def make_state(rows, n):
    """Chain state for this backend: per-node bitsets packed into a
    (n, ceil(n/64)) uint64 array."""
    cdef int W = (n + 63) // 64
    a = np.zeros((n, W), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, r in enumerate(rows):
        for w in range(W):
            a[i, w] = (r >> (64 * w)) & mask
    return a


def state_rows(state, n):
    a = np.asarray(state)
    out = []
    W = a.shape[1]
    for i in range(n):
        r = 0
        for w in range(W):
            r |= int(a[i, w]) << (64 * w)
        out.append(r)
    return out


def sweep_triangle(uint64_t[:, ::1] state, int n, double coef_a, double coef_b,
                   int64_t[:] pi, int64_t[:] pj, double[:] unif,
                   long long e_count, long long tri_count):
    """One batch of heat-bath updates on the triangle model; see the pure
    backend for the contract."""
    cdef int W = state.shape[1]
    cdef Py_ssize_t t, steps = pi.shape[0]
    cdef int i, j, w, c
    cdef double x, p_on, ex
    cdef long long accepted = 0
    cdef uint64_t bit_i, bit_j
    cdef bint want
    with nogil:
        for t in range(steps):
            i = <int>pi[t]
            j = <int>pj[t]
            c = 0
            for w in range(W):
                c += popcount64(state[i, w] & state[j, w])
            x = coef_a + coef_b * c
            if x >= 0.0:
                p_on = 1.0 / (1.0 + exp(-x))
            else:
                ex = exp(x)
                p_on = ex / (1.0 + ex)
            want = unif[t] < p_on
            bit_j = (<uint64_t>1) << (j & 63)
            bit_i = (<uint64_t>1) << (i & 63)
            if state[i, j >> 6] & bit_j:
                if not want:
                    state[i, j >> 6] &= ~bit_j
                    state[j, i >> 6] &= ~bit_i
                    e_count -= 1
                    tri_count -= c
                    accepted += 1
            elif want:
                state[i, j >> 6] |= bit_j
                state[j, i >> 6] |= bit_i
                e_count += 1
                tri_count += c
                accepted += 1
    return e_count, tri_count, accepted
