"""Equal-block step graphons: homomorphism densities, the entropy and energy
functionals, the exact cut norm, a permutation-minimized cut distance, and
projected gradient ascent of T - I over m-block step functions.

The cut norm over a common block refinement is computed exactly: the bilinear
objective in fractional block memberships attains its maximum at a vertex of
the box, so enumerating row subsets and picking the sign-optimal column
subset analytically is exhaustive. The cut distance minimizes over block
permutations only, which upper-bounds the true rearrangement infimum; every
caller-facing doc says so.
"""

from __future__ import annotations

import math
import string
from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import DomainError, SizeCapError
from .graphs import Motif, SimpleGraph, as_params
from .variational import logistic, solve_u_star

MAX_REFINE_BLOCKS = 16
MAX_EXHAUSTIVE_PERM = 8
MAX_ASCENT_BLOCKS = 8
MAX_ASCENT_MOTIF = 6
T_ASSIGNMENT_CAP = 10**7
ASCENT_CLIP = 1e-9
ASCENT_GM_TOL = 1e-9
ASCENT_MAX_ITER = 10_000


class StepGraphon:
    """Symmetric m x m block values on an equal partition of [0,1]."""

    __slots__ = ("values",)

    def __init__(self, values):
        v = np.array(values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 1:
            raise DomainError(f"step graphon needs a square matrix, got shape {v.shape}")
        if np.max(np.abs(v - v.T)) > 1e-9:
            raise DomainError("step graphon values must be symmetric")
        if v.min() < -1e-9 or v.max() > 1.0 + 1e-9:
            raise DomainError("step graphon values must lie in [0, 1]")
        self.values = np.clip((v + v.T) / 2.0, 0.0, 1.0)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @classmethod
    def constant(cls, u: float, m: int = 1) -> "StepGraphon":
        return cls(np.full((m, m), float(u)))

    def refine(self, factor: int) -> "StepGraphon":
        """Split every block into ``factor`` equal blocks; same graphon."""
        if factor < 1:
            raise DomainError(f"refinement factor must be >= 1, got {factor}")
        if factor == 1:
            return StepGraphon(self.values)
        return StepGraphon(np.repeat(np.repeat(self.values, factor, 0), factor, 1))

    def coarsen(self, m_target: int) -> "StepGraphon":
        """Average down to ``m_target`` equal blocks using interval-overlap
        weights; exact when the fine partition refines the coarse one."""
        if m_target < 1:
            raise DomainError(f"target block count must be >= 1, got {m_target}")
        mf, mc = self.m, m_target
        fine = np.arange(mf + 1) / mf
        coarse = np.arange(mc + 1) / mc
        w = np.minimum(coarse[1:, None], fine[None, 1:]) - np.maximum(
            coarse[:-1, None], fine[None, :-1]
        )
        w = np.clip(w, 0.0, None)
        return StepGraphon(mc**2 * (w @ self.values @ w.T))

    def __eq__(self, other) -> bool:
        return isinstance(other, StepGraphon) and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"StepGraphon(m={self.m})"


def empirical_graphon(G: SimpleGraph) -> StepGraphon:
    """n-block step graphon of a graph: block (i, j) is 1 exactly when i-j is
    an edge; homomorphism densities are preserved."""
    return StepGraphon(G.adjacency())


def multipartite_graphon(r: int, p: float, blocks: int | None = None) -> StepGraphon:
    """Complete r-partite indicator with equal parts, scaled by intensity p,
    on ``blocks`` blocks (default r; must be a multiple of r)."""
    if r < 1:
        raise DomainError(f"part count must be >= 1, got {r}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"intensity must lie in [0,1], got {p}")
    m = r if blocks is None else blocks
    if m % r:
        raise DomainError(f"block count {m} is not a multiple of part count {r}")
    part = np.repeat(np.arange(r), m // r)
    return StepGraphon(np.where(part[:, None] != part[None, :], float(p), 0.0))


def _check_t_caps(motif: Motif, m: int) -> None:
    if motif.ell > MAX_ASCENT_MOTIF and float(m) ** motif.ell > T_ASSIGNMENT_CAP:
        raise SizeCapError(
            f"t over {m} blocks and {motif.ell} motif vertices exceeds the "
            f"{T_ASSIGNMENT_CAP} block-assignment cap"
        )


def _t_subscripts(motif: Motif, m: int):
    """einsum operands summing prod over H-edges of V[b_i, b_j] across all
    block assignments; vertices outside every chosen operand get a ones
    vector so each index label appears at least once."""
    letters = string.ascii_lowercase
    subs = [letters[i] + letters[j] for i, j in motif.edges]
    covered = set()
    for i, j in motif.edges:
        covered.add(i)
        covered.add(j)
    extra = [letters[v] for v in range(motif.ell) if v not in covered]
    return subs, extra


def _t_raw(motif: Motif, v: np.ndarray) -> float:
    m = v.shape[0]
    subs, extra = _t_subscripts(motif, m)
    ops = [v] * len(subs)
    for s in extra:
        subs = subs + [s]
        ops = ops + [np.ones(m)]
    return float(np.einsum(",".join(subs) + "->", *ops, optimize=True))


def t_graphon(motif: Motif, h: StepGraphon) -> float:
    """Homomorphism density of the motif in a step graphon: the exact sum
    over block assignments of edge-value products, normalized by m^ell."""
    _check_t_caps(motif, h.m)
    return _t_raw(motif, h.values) / float(h.m) ** motif.ell


def _entropy_array(v: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(v > 0.0, v * np.log(v), 0.0)
        b = np.where(v < 1.0, (1.0 - v) * np.log(1.0 - v), 0.0)
    return 0.5 * (a + b)


def I_graphon(h: StepGraphon) -> float:
    """Block average of the entropy term; nonpositive."""
    return float(np.mean(_entropy_array(h.values)))


def T_graphon(h: StepGraphon, motif: Motif, p) -> float:
    """beta1 * t(edge, h) + beta2 * t(motif, h)."""
    p = as_params(p)
    return p.beta1 * float(np.mean(h.values)) + p.beta2 * t_graphon(motif, h)


@lru_cache(maxsize=None)
def _subset_bits(m: int) -> np.ndarray:
    masks = np.arange(1 << m, dtype=np.int64)
    return ((masks[:, None] >> np.arange(m)[None, :]) & 1).astype(np.float64)


def _cut_norm_exact(d: np.ndarray):
    """Max over block-subset pairs (S, T) of |sum_{S x T} d| / m^2, with an
    attaining pair. For fixed S the best T keeps one sign of the column sums,
    so only row subsets are enumerated."""
    m = d.shape[0]
    rs = _subset_bits(m) @ d
    pos = np.clip(rs, 0.0, None).sum(axis=1)
    neg = np.clip(-rs, 0.0, None).sum(axis=1)
    vals = np.maximum(pos, neg)
    s = int(np.argmax(vals))
    row_subset = tuple(i for i in range(m) if (s >> i) & 1)
    if pos[s] >= neg[s]:
        col_subset = tuple(np.nonzero(rs[s] > 0.0)[0].tolist())
        best = float(pos[s])
    else:
        col_subset = tuple(np.nonzero(rs[s] < 0.0)[0].tolist())
        best = float(neg[s])
    return best / m**2, row_subset, col_subset


def _common_refinement(f: StepGraphon, g: StepGraphon):
    m = math.lcm(f.m, g.m)
    if m > MAX_REFINE_BLOCKS:
        raise SizeCapError(
            f"common refinement needs {m} blocks; capped at {MAX_REFINE_BLOCKS}"
        )
    return f.refine(m // f.m).values, g.refine(m // g.m).values, m


def cut_norm_dist(f: StepGraphon, g: StepGraphon) -> float:
    """Exact cut norm of f - g over the common block refinement."""
    fv, gv, _m = _common_refinement(f, g)
    return _cut_norm_exact(fv - gv)[0]


def cut_norm_witness(f: StepGraphon, g: StepGraphon):
    """(value, S, T): the cut norm with a block-subset pair attaining it,
    indexed in the common refinement."""
    fv, gv, _m = _common_refinement(f, g)
    return _cut_norm_exact(fv - gv)


def _permuted(v: np.ndarray, perm) -> np.ndarray:
    idx = np.asarray(perm)
    return v[np.ix_(idx, idx)]


def delta_cut(f: StepGraphon, g: StepGraphon) -> float:
    """Cut distance minimized over block permutations of f: an upper bound on
    the rearrangement infimum (only measure-preserving maps that permute
    equal blocks are tried). Exhaustive for up to 8 blocks, greedy pairwise
    swap descent above."""
    fv, gv, m = _common_refinement(f, g)
    if m <= MAX_EXHAUSTIVE_PERM:
        return min(
            _cut_norm_exact(_permuted(fv, perm) - gv)[0] for perm in permutations(range(m))
        )
    perm = list(range(m))
    best = _cut_norm_exact(fv - gv)[0]
    improved = True
    while improved:
        improved = False
        for a in range(m):
            for b in range(a + 1, m):
                perm[a], perm[b] = perm[b], perm[a]
                val = _cut_norm_exact(_permuted(fv, perm) - gv)[0]
                if val < best - 1e-15:
                    best = val
                    improved = True
                else:
                    perm[a], perm[b] = perm[b], perm[a]
    return best


def _t_gradient_raw(motif: Motif, v: np.ndarray) -> np.ndarray:
    """Entrywise derivative of the unnormalized assignment sum: for each
    H-edge, the einsum over the remaining edges with that edge's endpoints
    left as output indices."""
    m = v.shape[0]
    letters = string.ascii_lowercase
    grad = np.zeros_like(v)
    ones = np.ones(m)
    for e_i, (eu, ev) in enumerate(motif.edges):
        subs, ops = [], []
        covered = set()
        for f_i, (a, b) in enumerate(motif.edges):
            if f_i == e_i:
                continue
            subs.append(letters[a] + letters[b])
            ops.append(v)
            covered.add(a)
            covered.add(b)
        for w in range(motif.ell):
            if w not in covered:
                subs.append(letters[w])
                ops.append(ones)
        out = letters[eu] + letters[ev]
        grad += np.einsum(",".join(subs) + "->" + out, *ops, optimize=True)
    return grad


def _ascent_objective_raw(motif: Motif, beta1: float, beta2: float, v: np.ndarray) -> float:
    m = v.shape[0]
    t1 = float(np.mean(v))
    t2 = _t_raw(motif, v) / float(m) ** motif.ell
    return beta1 * t1 + beta2 * t2 - float(np.mean(_entropy_array(v)))


def _symmetric_gradient(motif: Motif, beta1: float, beta2: float, v: np.ndarray) -> np.ndarray:
    m = v.shape[0]
    g = (
        beta1 / m**2
        + beta2 * _t_gradient_raw(motif, v) / float(m) ** motif.ell
        - 0.5 * np.log(v / (1.0 - v)) / m**2
    )
    s = g + g.T
    np.fill_diagonal(s, np.diag(g))
    return s


def _ascend_one(motif: Motif, beta1: float, beta2: float, v0: np.ndarray):
    lo, hi = ASCENT_CLIP, 1.0 - ASCENT_CLIP
    v = np.clip(np.array(v0, dtype=np.float64), lo, hi)
    f = _ascent_objective_raw(motif, beta1, beta2, v)
    for _ in range(ASCENT_MAX_ITER):
        s = _symmetric_gradient(motif, beta1, beta2, v)
        gm = v - np.clip(v + s, lo, hi)
        if np.max(np.abs(gm)) < ASCENT_GM_TOL:
            break
        step = 1.0
        moved = False
        while step > 2.0**-60:
            w = np.clip(v + step * s, lo, hi)
            fw = _ascent_objective_raw(motif, beta1, beta2, w)
            if fw > f:
                v, f = w, fw
                moved = True
                break
            step *= 0.5
        if not moved:
            break
    return v, f


def ascend_objective(motif: Motif, p, m: int, restarts: int = 4, seed: int = 0):
    """Projected gradient ascent of T - I over symmetric m-block values in
    [1e-9, 1 - 1e-9], with backtracking halving from step 1.0 and stopping at
    gradient-mapping sup norm < 1e-9 or 10^4 iterations. Runs from two seeded
    starts (the constant scalar optimum; the multipartite optimum when
    chi >= 3) plus ``restarts`` random symmetric starts, and returns the best
    (StepGraphon, objective)."""
    p = as_params(p)
    if m < 1 or m > MAX_ASCENT_BLOCKS:
        raise SizeCapError(f"ascent block count must be in 1..{MAX_ASCENT_BLOCKS}, got {m}")
    if motif.ell > MAX_ASCENT_MOTIF:
        raise SizeCapError(f"ascent motif is capped at {MAX_ASCENT_MOTIF} vertices")
    if restarts < 0:
        raise DomainError(f"restarts must be >= 0, got {restarts}")
    sol = solve_u_star(p, motif.k)
    starts = [np.full((m, m), sol.u_star)]
    if motif.chi >= 3:
        r = motif.chi - 1
        part = (np.arange(m) * r) // m
        p_star = logistic(2.0 * p.beta1)
        starts.append(np.where(part[:, None] != part[None, :], p_star, 0.0))
    for child in np.random.SeedSequence(seed).spawn(restarts):
        a = np.random.default_rng(child).uniform(size=(m, m))
        starts.append((a + a.T) / 2.0)
    best_v, best_f = None, -math.inf
    for v0 in starts:
        v, f = _ascend_one(motif, p.beta1, p.beta2, v0)
        if f > best_f:
            best_v, best_f = v, f
    return StepGraphon(best_v), float(best_f)


def write_graphon(h: StepGraphon, path) -> None:
    """Plain-text format: first line m, then m rows of m decimals."""
    lines = [str(h.m)]
    for row in h.values:
        lines.append(" ".join(f"{x:.17g}" for x in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_graphon(path) -> StepGraphon:
    with open(path, "r", encoding="ascii") as fh:
        raw = [line.strip() for line in fh if line.strip()]
    if not raw:
        raise DomainError(f"{path}: empty graphon file")
    try:
        m = int(raw[0])
    except ValueError:
        raise DomainError(f"{path}: first line must be the block count") from None
    if len(raw) != m + 1:
        raise DomainError(f"{path}: expected {m} value rows, found {len(raw) - 1}")
    rows = []
    for line in raw[1:]:
        parts = line.split()
        if len(parts) != m:
            raise DomainError(f"{path}: expected {m} values per row, got {len(parts)}")
        try:
            rows.append([float(x) for x in parts])
        except ValueError:
            raise DomainError(f"{path}: non-numeric value in row") from None
    return StepGraphon(np.array(rows))
