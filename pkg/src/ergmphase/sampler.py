"""Glauber dynamics for the two-parameter model: single-site heat bath on
edge indicators, annealed chains with batch-means errors, a block-structure
diagnostic against the multipartite reference, and an exhaustive visit
histogram for total-variation checks on tiny node counts.

Chains are reproducible down to the bit across kernel backends: every sweep
pre-draws its pair indices and uniforms from one numpy Generator, and both
backends evaluate the flip probability with the same float expression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, HypothesisError, SizeCapError
from .graphs import (
    TRIANGLE,
    Motif,
    Params,
    SimpleGraph,
    as_params,
    edge_toggle_delta,
    node_pairs,
    parse_motif,
)
from .graphon import StepGraphon, delta_cut, multipartite_graphon
from .variational import logistic

BATCH_COUNT = 20
MAX_HISTOGRAM_N = 5


def _is_triangle(motif: Motif) -> bool:
    return motif.ell == 3 and motif.edges == TRIANGLE.edges


def make_annealing_ladder(beta2_target: float, sweeps_per_stage: int):
    """Geometric stage ladder -1, -2, -4, ... ending exactly at the target.
    A target at or above -1 gets a single stage."""
    if sweeps_per_stage < 1:
        raise DomainError(f"sweeps per stage must be >= 1, got {sweeps_per_stage}")
    stages = []
    s = -1.0
    while s > beta2_target:
        stages.append((s, sweeps_per_stage))
        s *= 2.0
    stages.append((float(beta2_target), sweeps_per_stage))
    return tuple(stages)


@dataclass
class ChainConfig:
    """Glauber chain settings. ``samples`` counts post-burn-in sweeps; one
    record is kept every ``thinning`` sweeps and at least 20 records are
    required so batch-means errors are defined. ``annealing`` is an optional
    schedule of (beta2, sweeps) stages run before burn-in; its last stage
    must sit at the target beta2."""

    n: int
    motif: Motif
    params: Params
    samples: int
    burn_in: int = 100
    thinning: int = 1
    seed: int = 0
    annealing: tuple | None = None

    def __post_init__(self):
        if isinstance(self.motif, str):
            self.motif = parse_motif(self.motif)
        self.params = as_params(self.params)
        if self.n < 2:
            raise DomainError(f"chain needs at least 2 nodes, got {self.n}")
        if self.burn_in < 1:
            raise DomainError(f"burn_in must be >= 1, got {self.burn_in}")
        if self.thinning < 1:
            raise DomainError(f"thinning must be >= 1, got {self.thinning}")
        if self.samples // self.thinning < BATCH_COUNT:
            raise DomainError(
                f"samples={self.samples} at thinning={self.thinning} keeps "
                f"{self.samples // self.thinning} records; need >= {BATCH_COUNT}"
            )
        if self.annealing is not None:
            stages = tuple((float(b), int(s)) for b, s in self.annealing)
            if not stages:
                raise DomainError("annealing schedule must not be empty")
            if any(s < 1 for _, s in stages):
                raise DomainError("annealing stages need >= 1 sweep each")
            if stages[-1][0] != self.params.beta2:
                raise DomainError(
                    f"annealing must end at beta2={self.params.beta2}, "
                    f"got {stages[-1][0]}"
                )
            self.annealing = stages


@dataclass(frozen=True, eq=False)
class ChainStats:
    """Sampling-phase summary. Standard errors come from 20 batch means;
    acceptance_rate is the fraction of proposals that changed the state."""

    mean_t1: float
    mean_t2: float
    se_t1: float
    se_t2: float
    acceptance_rate: float
    final_graph: SimpleGraph
    n_records: int
    trace: np.ndarray | None = field(default=None, repr=False)


def glauber_step(G: SimpleGraph, motif: Motif, params, rng) -> bool:
    """One heat-bath update on a uniformly chosen pair; mutates G and reports
    whether the state changed."""
    p = as_params(params)
    pairs = node_pairs(G.n)
    pid = int(rng.integers(0, len(pairs)))
    i, j = pairs[pid]
    present = G.has_edge(i, j)
    if _is_triangle(motif):
        through = 6 * G.common_neighbors(i, j)
    else:
        delta = edge_toggle_delta(motif, G, (i, j))
        through = -delta if present else delta
    x = 2.0 * p.beta1 + p.beta2 * through / float(G.n) ** (motif.ell - 2)
    want = float(rng.random()) < logistic(x)
    if want != present:
        G.toggle_edge(i, j)
        return True
    return False


def _batch_se(arr: np.ndarray) -> float:
    length = len(arr) // BATCH_COUNT
    means = arr[: BATCH_COUNT * length].reshape(BATCH_COUNT, length).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(BATCH_COUNT))


def run_chain(config: ChainConfig, keep_trace: bool = False) -> ChainStats:
    """Run annealing stages, burn-in, then the sampling phase from the empty
    graph, recording (t1, t2) every ``thinning`` sweeps. One sweep proposes
    as many pair updates as there are pairs."""
    cfg = config
    n, motif, p = cfg.n, cfg.motif, cfg.params
    pairs = node_pairs(n)
    npairs = len(pairs)
    pi_map = np.fromiter((a for a, _ in pairs), dtype=np.int64, count=npairs)
    pj_map = np.fromiter((b for _, b in pairs), dtype=np.int64, count=npairs)
    rng = np.random.default_rng(cfg.seed)
    coef_a = 2.0 * p.beta1
    n_records = cfg.samples // cfg.thinning
    rec1 = np.empty(n_records)
    rec2 = np.empty(n_records)
    trace = [] if keep_trace else None
    schedule = [(b2, sweeps) for b2, sweeps in (cfg.annealing or ())]
    schedule.append((p.beta2, cfg.burn_in))

    if _is_triangle(motif):
        state = _kernels.make_state([0] * n, n)
        e_count, tri_count = 0, 0

        def one_sweep(b2: float) -> int:
            nonlocal e_count, tri_count
            pids = rng.integers(0, npairs, size=npairs)
            unifs = rng.random(npairs)
            e_count, tri_count, acc = _kernels.sweep_triangle(
                state, n, coef_a, 6.0 * b2 / n, pi_map[pids], pj_map[pids],
                unifs, e_count, tri_count,
            )
            return acc

        def densities() -> tuple[float, float]:
            return 2.0 * e_count / n**2, 6.0 * tri_count / n**3

        def final_graph() -> SimpleGraph:
            return SimpleGraph(n, _kernels.state_rows(state, n))

    else:
        G = SimpleGraph.empty(n)
        hom2 = 0
        scale = float(n) ** (motif.ell - 2)

        def one_sweep(b2: float) -> int:
            nonlocal hom2
            pids = rng.integers(0, npairs, size=npairs).tolist()
            unifs = rng.random(npairs).tolist()
            acc = 0
            for t in range(npairs):
                i, j = pairs[pids[t]]
                present = G.has_edge(i, j)
                delta = edge_toggle_delta(motif, G, (i, j))
                through = -delta if present else delta
                x = coef_a + b2 * through / scale
                want = unifs[t] < logistic(x)
                if want != present:
                    G.toggle_edge(i, j)
                    hom2 += through if want else -through
                    acc += 1
            return acc

        def densities() -> tuple[float, float]:
            return 2.0 * G.edge_count() / n**2, hom2 / float(n) ** motif.ell

        def final_graph() -> SimpleGraph:
            return G.copy()

    for b2_stage, sweeps in schedule:
        for _ in range(sweeps):
            one_sweep(b2_stage)
    accepted = 0
    for r in range(n_records):
        for _ in range(cfg.thinning):
            accepted += one_sweep(p.beta2)
        rec1[r], rec2[r] = densities()
        if keep_trace:
            trace.append(((r + 1) * cfg.thinning, rec1[r], rec2[r]))
    return ChainStats(
        mean_t1=float(rec1.mean()),
        mean_t2=float(rec2.mean()),
        se_t1=_batch_se(rec1),
        se_t2=_batch_se(rec2),
        acceptance_rate=accepted / (n_records * cfg.thinning * npairs),
        final_graph=final_graph(),
        n_records=n_records,
        trace=np.array(trace) if keep_trace else None,
    )


def _partition_nodes(G: SimpleGraph, r: int) -> np.ndarray:
    """Deterministic r-part split minimizing within-part edges: spectral sign
    start for r = 2 (round-robin otherwise), greedy single-node moves to
    convergence, then rebalancing to equal part sizes."""
    n = G.n
    if r == 2:
        _, vecs = np.linalg.eigh(G.adjacency())
        part = (vecs[:, 0] >= 0.0).astype(np.int64)
    else:
        part = np.arange(n, dtype=np.int64) % r
    masks = [0] * r
    for node in range(n):
        masks[part[node]] |= 1 << node

    def internal(node: int, q: int) -> int:
        return (G.rows[node] & masks[q]).bit_count()

    changed = True
    while changed:
        changed = False
        for node in range(n):
            cur = int(part[node])
            counts = [internal(node, q) for q in range(r)]
            best = min(range(r), key=lambda q: (counts[q], q))
            if counts[best] < counts[cur]:
                masks[cur] ^= 1 << node
                masks[best] |= 1 << node
                part[node] = best
                changed = True

    base, rem = divmod(n, r)
    targets = [base + (1 if q < rem else 0) for q in range(r)]
    sizes = [int(np.sum(part == q)) for q in range(r)]
    while any(sizes[q] > targets[q] for q in range(r)):
        donor = min(q for q in range(r) if sizes[q] > targets[q])
        takers = [q for q in range(r) if sizes[q] < targets[q]]
        move = None
        for node in range(n):
            if part[node] != donor:
                continue
            for q in takers:
                cost = internal(node, q) - internal(node, donor)
                if move is None or cost < move[0]:
                    move = (cost, node, q)
        _, node, q = move
        masks[donor] ^= 1 << node
        masks[q] |= 1 << node
        part[node] = q
        sizes[donor] -= 1
        sizes[q] += 1
    return part


def structure_diagnostic(G: SimpleGraph, motif: Motif, params, blocks: int | None = None):
    """Fit an equal (chi - 1)-partition to G, coarsen the reordered empirical
    graphon to ``blocks`` blocks (default chi - 1), and return its cut
    distance from the multipartite reference at intensity p* together with
    the coarsened graphon."""
    p = as_params(params)
    chi = motif.chi
    if chi < 3:
        raise HypothesisError(
            f"structure diagnostic needs chromatic number >= 3, got {chi}"
        )
    r = chi - 1
    m = r if blocks is None else blocks
    if m % r:
        raise DomainError(f"block count {m} is not a multiple of {r}")
    part = _partition_nodes(G, r)
    order = np.argsort(part, kind="stable")
    adj = G.adjacency()[np.ix_(order, order)]
    coarse = StepGraphon(adj).coarsen(m)
    ref = multipartite_graphon(r, logistic(2.0 * p.beta1), m)
    return delta_cut(coarse, ref), coarse


def visit_histogram(n: int, motif: Motif, params, steps: int, seed: int) -> np.ndarray:
    """Single-step chain from the empty graph recording, after every update,
    which graph (as an edge mask in node_pairs bit order) the chain sits at.
    Sized for exhaustive comparison, so n is capped at 5."""
    if n < 2:
        raise DomainError(f"need at least 2 nodes, got {n}")
    if n > MAX_HISTOGRAM_N:
        raise SizeCapError(f"visit histogram is capped at n <= {MAX_HISTOGRAM_N}")
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    p = as_params(params)
    pairs = node_pairs(n)
    npairs = len(pairs)
    rng = np.random.default_rng(seed)
    pids = rng.integers(0, npairs, size=steps).tolist()
    unifs = rng.random(steps).tolist()
    G = SimpleGraph.empty(n)
    counts = np.zeros(1 << npairs, dtype=np.int64)
    mask = 0
    triangle = _is_triangle(motif)
    coef_a = 2.0 * p.beta1
    scale = float(n) ** (motif.ell - 2)
    for t in range(steps):
        pid = pids[t]
        i, j = pairs[pid]
        present = G.has_edge(i, j)
        if triangle:
            through = 6 * G.common_neighbors(i, j)
        else:
            delta = edge_toggle_delta(motif, G, (i, j))
            through = -delta if present else delta
        want = unifs[t] < logistic(coef_a + p.beta2 * through / scale)
        if want != present:
            G.toggle_edge(i, j)
            mask ^= 1 << pid
        counts[mask] += 1
    return counts
