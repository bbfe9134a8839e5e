"""Parameter-plane scans, the critical curve, and cross-method checks of a
single parameter point against exact enumeration, sampling, and the
variational branches."""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError, HypothesisError
from .exact import MAX_EXACT_N, exact_moments, finite_gap, psi_exact
from .graphon import StepGraphon, ascend_objective, delta_cut, empirical_graphon
from .graphs import Motif, as_params
from .sampler import ChainConfig, run_chain, structure_diagnostic
from .variational import (
    compare_ansatz,
    er_free_energy,
    implied_multipartite_densities,
    multipartite_free_energy,
    solve_u_star,
)

TRANSITION_BRACKET = (-1e4, -1e-9)
DERIVATIVE_STEP = 1e-3


@dataclass(frozen=True)
class ScanRecord:
    beta1: float
    beta2: float
    u_star: float
    er_value: float
    mp_value: float
    p_star: float
    winner: str
    order_parameter_C: float
    ascent_objective: float | None = None
    finite_n_gap: float | None = None


@dataclass(frozen=True)
class ScanOptions:
    """Optional extras per grid point: exact finite-n gap at ``n_exact``,
    block ascent on ``ascent_blocks`` blocks (needs an explicit seed), and a
    process pool when ``workers`` > 1."""

    n_exact: int | None = None
    ascent_blocks: int | None = None
    ascent_restarts: int = 2
    seed: int | None = None
    workers: int = 1


@dataclass(frozen=True)
class TransitionEstimate:
    beta1: float
    beta2_critical: float
    bracket_width: float
    method: str = "ansatz_crossing"


def _scan_point(args) -> ScanRecord:
    motif, b1, b2, n_exact, blocks, restarts, point_seed = args
    comp = compare_ansatz((b1, b2), motif)
    sol = solve_u_star((b1, b2), motif.k)
    ascent = None
    if blocks is not None:
        _, ascent = ascend_objective(motif, (b1, b2), blocks, restarts=restarts, seed=point_seed)
    gap = None
    if n_exact is not None:
        gap = finite_gap(n_exact, motif, (b1, b2))
    return ScanRecord(
        beta1=b1,
        beta2=b2,
        u_star=sol.u_star,
        er_value=comp.er_value,
        mp_value=comp.mp_value,
        p_star=comp.p_star,
        winner=comp.winner,
        order_parameter_C=comp.order_parameter_C,
        ascent_objective=ascent,
        finite_n_gap=gap,
    )


def scan_grid(motif: Motif, beta1_range, beta2_range, resolution, options: ScanOptions | None = None):
    """Evaluate both variational branches on a linspace grid, row-major in
    (beta1, beta2); returns a list of ScanRecord. Resolution is an int or an
    (n1, n2) pair; a nonpositive resolution yields an empty list."""
    opts = options or ScanOptions()
    if isinstance(resolution, int):
        r1 = r2 = resolution
    else:
        r1, r2 = resolution
    if r1 <= 0 or r2 <= 0:
        return []
    if motif.chi < 3:
        raise HypothesisError(
            f"scan needs a motif of chromatic number >= 3, got {motif.chi}"
        )
    if opts.ascent_blocks is not None and opts.seed is None:
        raise DomainError("scans with block ascent need an explicit seed")
    b1s = np.linspace(beta1_range[0], beta1_range[1], r1)
    b2s = np.linspace(beta2_range[0], beta2_range[1], r2)
    jobs = []
    idx = 0
    for b1 in b1s:
        for b2 in b2s:
            seed = (opts.seed, idx) if opts.ascent_blocks is not None else 0
            jobs.append(
                (motif, float(b1), float(b2), opts.n_exact,
                 opts.ascent_blocks, opts.ascent_restarts, seed)
            )
            idx += 1
    if opts.workers > 1:
        with ProcessPoolExecutor(max_workers=opts.workers) as pool:
            return list(pool.map(_scan_point, jobs))
    return [_scan_point(job) for job in jobs]


def find_transition(motif: Motif, beta1: float, tolerance: float = 1e-6) -> TransitionEstimate:
    """Bisect the sign change of er_value - mp_value in beta2 at fixed beta1.
    The crossing must land in beta2 <= -2/(k(k-1)), outside the strip where
    the disordered phase is provably the only one."""
    if tolerance <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tolerance}")
    mp_value, _ = multipartite_free_energy((beta1, 0.0), motif)
    k = motif.k

    def crossing(b2: float) -> float:
        return er_free_energy((beta1, b2), k) - mp_value

    lo, hi = TRANSITION_BRACKET
    f_lo, f_hi = crossing(lo), crossing(hi)
    if not (f_lo < 0.0 < f_hi):
        raise ConsistencyError(
            f"branch crossing not bracketed on [{lo}, {hi}]: "
            f"endpoint values {f_lo:.6g}, {f_hi:.6g}"
        )
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if crossing(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    strip_edge = -2.0 / (k * (k - 1))
    if hi > strip_edge + 1e-12:
        raise ConsistencyError(
            f"critical bracket [{lo:.9g}, {hi:.9g}] violates the bound "
            f"beta2 <= {strip_edge:.9g}"
        )
    return TransitionEstimate(
        beta1=float(beta1),
        beta2_critical=0.5 * (lo + hi),
        bracket_width=hi - lo,
        method="ansatz_crossing",
    )


def verify_point(
    motif: Motif,
    params,
    n_exact: int | None = None,
    chain: ChainConfig | None = None,
    derivative_tol: float = 0.15,
    structure_tol: float = 0.2,
) -> dict:
    """Cross-check one parameter point. With ``n_exact``: finite-difference
    psi derivatives against the winning branch's predicted densities. With
    ``chain``: sampled means against exact moments (when the chain size
    admits enumeration) and the final graph's coarsened cut distance from the
    winning branch's reference graphon (skipped below 4 nodes per block).
    Returns a report dict; with neither optional input, ``all_passed`` is
    vacuously true."""
    p = as_params(params)
    comp = compare_ansatz(p, motif)
    if comp.winner == "multipartite":
        pred_t1, pred_t2 = implied_multipartite_densities(p, motif)
    else:
        sol = solve_u_star(p, motif.k)
        pred_t1, pred_t2 = sol.u_star, sol.u_star**motif.k
    checks = []

    if n_exact is not None:
        h = DERIVATIVE_STEP
        d1 = (
            psi_exact(n_exact, motif, (p.beta1 + h, p.beta2))
            - psi_exact(n_exact, motif, (p.beta1 - h, p.beta2))
        ) / (2.0 * h)
        d2 = (
            psi_exact(n_exact, motif, (p.beta1, p.beta2 + h))
            - psi_exact(n_exact, motif, (p.beta1, p.beta2 - h))
        ) / (2.0 * h)
        gap1, gap2 = abs(d1 - pred_t1), abs(d2 - pred_t2)
        checks.append({
            "name": "psi_derivative_vs_variational",
            "passed": bool(gap1 <= derivative_tol and gap2 <= derivative_tol),
            "n": n_exact,
            "dpsi_dbeta1": d1,
            "dpsi_dbeta2": d2,
            "gap_t1": gap1,
            "gap_t2": gap2,
            "tol": derivative_tol,
        })

    if chain is not None:
        cfg = dataclasses.replace(chain, motif=motif, params=p)
        stats = run_chain(cfg)
        if cfg.n <= MAX_EXACT_N:
            mom = exact_moments(cfg.n, motif, p)
            dev1 = abs(stats.mean_t1 - mom.mean_t1)
            dev2 = abs(stats.mean_t2 - mom.mean_t2)
            lim1 = 3.0 * stats.se_t1 + 1e-9
            lim2 = 3.0 * stats.se_t2 + 1e-9
            checks.append({
                "name": "mcmc_vs_exact",
                "passed": bool(dev1 <= lim1 and dev2 <= lim2),
                "n": cfg.n,
                "mcmc_t1": stats.mean_t1,
                "exact_t1": mom.mean_t1,
                "mcmc_t2": stats.mean_t2,
                "exact_t2": mom.mean_t2,
                "limit_t1": lim1,
                "limit_t2": lim2,
            })
        blocks = (motif.chi - 1) if comp.winner == "multipartite" else 2
        if cfg.n >= 4 * blocks:
            if comp.winner == "multipartite":
                dist, _ = structure_diagnostic(stats.final_graph, motif, p, blocks)
                reference = "multipartite"
            else:
                coarse = empirical_graphon(stats.final_graph).coarsen(blocks)
                dist = delta_cut(coarse, StepGraphon.constant(pred_t1, blocks))
                reference = "constant"
            checks.append({
                "name": "structure_distance",
                "passed": bool(dist <= structure_tol),
                "reference": reference,
                "distance": dist,
                "tol": structure_tol,
            })

    return {
        "motif": motif.to_string(),
        "beta1": p.beta1,
        "beta2": p.beta2,
        "winner": comp.winner,
        "er_value": comp.er_value,
        "mp_value": comp.mp_value,
        "predicted_t1": pred_t1,
        "predicted_t2": pred_t2,
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }
