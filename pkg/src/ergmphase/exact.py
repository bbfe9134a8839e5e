"""Exact ensemble quantities by exhaustive enumeration over all labeled
graphs on n nodes: the normalization psi, moments of the two densities, the
independence gap, and microcanonical class counts.

Enumeration visits edge sets in Gray-code order so each successive graph
differs by one toggle; per (n, motif) the joint distribution of (edge count,
motif homomorphism count) is tabulated once and cached, after which any
parameter point costs one weighted sum over the table.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import DomainError, SizeCapError
from .graphs import Motif, Params, SimpleGraph, as_params, edge_toggle_delta, node_pairs

MAX_EXACT_N = 7
EXPENSIVE_N = 8
_PREFIX_BITS = 6

_TABLE_CACHE: dict = {}


@dataclass(frozen=True)
class ExactMoments:
    """psi plus probability-weighted means and variances of the two densities."""

    psi: float
    mean_t1: float
    mean_t2: float
    var_t1: float
    var_t2: float
    n: int


class ExtrapolationResult(NamedTuple):
    estimate: float
    error_bound: float


def _is_triangle(motif: Motif) -> bool:
    return motif.ell == 3 and motif.edges == ((0, 1), (0, 2), (1, 2))


def _check_n(n: int, motif: Motif, expensive: bool) -> None:
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if n <= MAX_EXACT_N:
        return
    if n == EXPENSIVE_N:
        if not expensive:
            raise SizeCapError(
                f"n={n} enumerates 2^{n*(n-1)//2} graphs; pass expensive=True to allow it"
            )
        if not _is_triangle(motif):
            raise SizeCapError("n=8 enumeration is implemented for the triangle motif only")
        return
    raise SizeCapError(f"exact enumeration is capped at n={EXPENSIVE_N}, got {n}")


def _prefix_table(args):
    n, prefix_bits, value = args
    return _kernels.triangle_table(n, prefix_bits, value)


def _motif_class_dict(n: int, motif: Motif) -> dict:
    """Gray-code walk over all graphs tracking the motif homomorphism count
    through edge_toggle_delta; returns {(E, hom2): count}."""
    pairs = node_pairs(n)
    g = SimpleGraph.empty(n)
    e_count = 0
    hom2 = 0
    classes: dict = {(0, 0): 1}
    for s in range(1, 1 << len(pairs)):
        b = (s & -s).bit_length() - 1
        pair = pairs[b]
        hom2 += edge_toggle_delta(motif, g, pair)
        e_count += -1 if g.has_edge(*pair) else 1
        g.toggle_edge(*pair)
        key = (e_count, hom2)
        classes[key] = classes.get(key, 0) + 1
    return classes


def _class_table(n: int, motif: Motif, expensive: bool = False, workers: int | None = None):
    """Arrays (E, hom2, count) over the joint classes of edge count and motif
    homomorphism count, cached per (n, motif)."""
    _check_n(n, motif, expensive)
    key = (n, motif.edges, motif.ell)
    hit = _TABLE_CACHE.get(key)
    if hit is not None:
        return hit
    if _is_triangle(motif):
        if n == EXPENSIVE_N and workers and workers > 1:
            jobs = [(n, _PREFIX_BITS, v) for v in range(1 << _PREFIX_BITS)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                table = sum(pool.map(_prefix_table, jobs))
        elif n == EXPENSIVE_N:
            table = sum(
                _kernels.triangle_table(n, _PREFIX_BITS, v) for v in range(1 << _PREFIX_BITS)
            )
        else:
            table = _kernels.triangle_table(n)
        e_idx, t_idx = np.nonzero(table)
        counts = table[e_idx, t_idx]
        entry = (e_idx.astype(np.int64), 6 * t_idx.astype(np.int64), counts)
    else:
        classes = _motif_class_dict(n, motif)
        items = sorted(classes.items())
        e_arr = np.array([e for (e, _h), _c in items], dtype=np.int64)
        h_arr = np.array([h for (_e, h), _c in items], dtype=np.int64)
        c_arr = np.array([c for _k, c in items], dtype=np.int64)
        entry = (e_arr, h_arr, c_arr)
    _TABLE_CACHE[key] = entry
    return entry


def _log_terms(n: int, motif: Motif, p: Params, e_arr, h_arr) -> np.ndarray:
    # n^2 * (beta1 * 2E/n^2 + beta2 * hom2/n^ell)
    return 2.0 * p.beta1 * e_arr + p.beta2 * h_arr / float(n) ** (motif.ell - 2)


def psi_exact(
    n: int, motif: Motif, p, expensive: bool = False, workers: int | None = None
) -> float:
    """(1/n^2) log sum over all labeled graphs of the model weight, by
    max-shifted log-sum-exp over the cached class table."""
    p = as_params(p)
    e_arr, h_arr, counts = _class_table(n, motif, expensive, workers)
    terms = _log_terms(n, motif, p, e_arr, h_arr)
    shift = terms.max()
    total = float(np.sum(counts * np.exp(terms - shift)))
    return (shift + math.log(total)) / n**2


def exact_moments(
    n: int, motif: Motif, p, expensive: bool = False, workers: int | None = None
) -> ExactMoments:
    """Probability-weighted means and variances of t(H1, .) and t(H2, .)."""
    p = as_params(p)
    e_arr, h_arr, counts = _class_table(n, motif, expensive, workers)
    terms = _log_terms(n, motif, p, e_arr, h_arr)
    shift = terms.max()
    w = counts * np.exp(terms - shift)
    z = float(w.sum())
    w = w / z
    t1 = 2.0 * e_arr / n**2
    t2 = h_arr / float(n) ** motif.ell
    m1 = float(w @ t1)
    m2 = float(w @ t2)
    v1 = float(w @ (t1 - m1) ** 2)
    v2 = float(w @ (t2 - m2) ** 2)
    psi = (shift + math.log(z)) / n**2
    return ExactMoments(psi=psi, mean_t1=m1, mean_t2=m2, var_t1=v1, var_t2=v2, n=n)


def finite_gap(
    n: int, motif: Motif, p, expensive: bool = False, workers: int | None = None
) -> float:
    """(mean t1)^k - mean t2; tends to 0 with n when edges decorrelate."""
    mom = exact_moments(n, motif, p, expensive, workers)
    return mom.mean_t1**motif.k - mom.mean_t2


def microcanonical(n: int, edge_count: int, triangle_count: int) -> tuple[int, float]:
    """Number of labeled graphs on n nodes with the exact edge and triangle
    counts, and the log of that number (-inf for an empty class)."""
    if n > MAX_EXACT_N:
        raise SizeCapError(f"microcanonical counts are capped at n={MAX_EXACT_N}")
    from .graphs import TRIANGLE

    e_arr, h_arr, counts = _class_table(n, TRIANGLE)
    match = (e_arr == edge_count) & (h_arr == 6 * triangle_count)
    total = int(counts[match].sum()) if match.any() else 0
    return total, (math.log(total) if total > 0 else float("-inf"))


def psi_extrapolate(values: Sequence[tuple[int, float]]) -> ExtrapolationResult:
    """Richardson extrapolation of psi_n in powers of 1/n via a Neville
    tableau evaluated at 1/n = 0. The error bound is the difference between
    the last two extrapolants; it is crude, not rigorous."""
    pts = list(values)
    if len(pts) < 3:
        raise DomainError(f"need at least 3 (n, psi) points, got {len(pts)}")
    ns = [int(n) for n, _v in pts]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("n values must be strictly increasing")
    x = [1.0 / n for n in ns]
    cols = [[float(v) for _n, v in pts]]
    for j in range(1, len(pts)):
        prev = cols[-1]
        cols.append(
            [
                (x[i] * prev[i + 1] - x[i + j] * prev[i]) / (x[i] - x[i + j])
                for i in range(len(pts) - j)
            ]
        )
    # successive extrapolants over the trailing points: order j uses the
    # last j+1 of them
    estimate = cols[-1][0]
    return ExtrapolationResult(estimate=estimate, error_bound=abs(estimate - cols[-2][-1]))
