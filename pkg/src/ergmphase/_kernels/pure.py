"""Pure-Python kernels: exhaustive triangle enumeration tables and the
triangle Glauber sweep. The compiled module mirrors these signatures and must
produce bit-identical results; both consume random numbers pre-drawn by the
caller so that chains agree across backends.

Edge bit order is lexicographic over pairs (i < j), matching
``graphs.node_pairs``.
"""

import math
from itertools import combinations

import numpy as np

BACKEND = "pure"


def triangle_table(n: int, prefix_bits: int = 0, prefix_value: int = 0) -> np.ndarray:
    """Joint counts over all labeled graphs on n nodes with the top
    ``prefix_bits`` edge bits frozen to ``prefix_value``: entry [E, T] is the
    number of graphs with E edges and T triangles. Enumeration walks the low
    bits in Gray-code order so each step is a single edge toggle whose
    triangle change is one bitset intersection."""
    pairs = list(combinations(range(n), 2))
    m = len(pairs)
    if not 0 <= prefix_bits <= m:
        raise ValueError(f"prefix_bits must be in [0, {m}]")
    low = m - prefix_bits
    max_t = n * (n - 1) * (n - 2) // 6
    width = max_t + 1
    rows = [0] * n
    e_count = 0
    t_count = 0
    for t in range(prefix_bits):
        if (prefix_value >> t) & 1:
            i, j = pairs[low + t]
            t_count += (rows[i] & rows[j]).bit_count()
            e_count += 1
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    table = [0] * ((m + 1) * width)
    table[e_count * width + t_count] += 1
    for s in range(1, 1 << low):
        b = (s & -s).bit_length() - 1
        i, j = pairs[b]
        c = (rows[i] & rows[j]).bit_count()
        bit = 1 << j
        if rows[i] & bit:
            rows[i] &= ~bit
            rows[j] &= ~(1 << i)
            e_count -= 1
            t_count -= c
        else:
            rows[i] |= bit
            rows[j] |= 1 << i
            e_count += 1
            t_count += c
        table[e_count * width + t_count] += 1
    return np.array(table, dtype=np.int64).reshape(m + 1, width)


def make_state(rows: list[int], n: int):
    """Chain state for this backend: a plain list of per-node bitsets."""
    return list(rows)


def state_rows(state, n: int) -> list[int]:
    return list(state)


def sweep_triangle(state, n, coef_a, coef_b, pi, pj, unif, e_count, tri_count):
    """One batch of heat-bath updates on the triangle model. For proposal t
    the pair (pi[t], pj[t]) is set present with probability
    logistic(coef_a + coef_b * c), c the common-neighbor count. Returns the
    updated (edge count, triangle count, accepted flips); ``state`` is
    mutated in place."""
    rows = state
    pi = pi.tolist()
    pj = pj.tolist()
    unif = unif.tolist()
    exp = math.exp
    accepted = 0
    for t in range(len(pi)):
        i = pi[t]
        j = pj[t]
        c = (rows[i] & rows[j]).bit_count()
        x = coef_a + coef_b * c
        if x >= 0.0:
            p_on = 1.0 / (1.0 + exp(-x))
        else:
            ex = exp(x)
            p_on = ex / (1.0 + ex)
        want = unif[t] < p_on
        bit = 1 << j
        if rows[i] & bit:
            if not want:
                rows[i] &= ~bit
                rows[j] &= ~(1 << i)
                e_count -= 1
                tri_count -= c
                accepted += 1
        elif want:
            rows[i] |= bit
            rows[j] |= 1 << i
            e_count += 1
            tri_count += c
            accepted += 1
    return e_count, tri_count, accepted
