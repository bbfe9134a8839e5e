"""Acceptance gate: ten numbered end-to-end criteria, one test each.

Run with ``pytest -v tests/test_acceptance.py`` to get a single pass/fail
line per criterion. Each test prints its measured values, so ``-s`` (or a
failure) shows the numbers behind the verdict. Criterion 8 states a
finite-size target that the n=40 chain does not meet; see the assertion
message there for the measured equilibrium values.
"""

import math
import time

import numpy as np
import pytest

from ergmphase.exact import exact_moments, finite_gap, psi_exact
from ergmphase.graphon import (
    StepGraphon,
    ascend_objective,
    cut_norm_dist,
    cut_norm_witness,
)
from ergmphase.graphs import TRIANGLE, SimpleGraph, hom_count, parse_motif
from ergmphase.sampler import (
    ChainConfig,
    make_annealing_ladder,
    run_chain,
    structure_diagnostic,
    visit_histogram,
)
from ergmphase.scan import find_transition
from ergmphase.variational import (
    compare_ansatz,
    implied_multipartite_densities,
    multipartite_free_energy,
    solve_u_star,
)


def test_criterion_01_exact_psi_closed_form():
    """psi at (0, 0) equals ((n-1)/2n) log 2 for n = 3..7, to 1e-12."""
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(3, 8):
        got = psi_exact(n, TRIANGLE, (0.0, 0.0))
        want = (n - 1) / (2 * n) * math.log(2)
        worst = max(worst, abs(got - want))
        assert abs(got - want) <= 1e-12, f"n={n}: psi={got!r}, closed form {want!r}"
    elapsed = time.perf_counter() - t0
    print(f"criterion 1: worst |psi - closed form| = {worst:.3e}, {elapsed:.1f}s")
    assert elapsed < 30.0


def test_criterion_02_psi_derivatives_match_moments():
    """Central differences of psi in beta1 and beta2 reproduce the exact
    mean densities at n=5 on a 3x3 grid, to 1e-6."""
    worst = 0.0
    h = 1e-4
    for b1 in (-0.3, 0.0, 0.3):
        for b2 in (-0.4, -0.1, 0.2):
            mom = exact_moments(5, TRIANGLE, (b1, b2))
            d1 = (psi_exact(5, TRIANGLE, (b1 + h, b2))
                  - psi_exact(5, TRIANGLE, (b1 - h, b2))) / (2 * h)
            d2 = (psi_exact(5, TRIANGLE, (b1, b2 + h))
                  - psi_exact(5, TRIANGLE, (b1, b2 - h))) / (2 * h)
            gap = max(abs(d1 - mom.mean_t1), abs(d2 - mom.mean_t2))
            worst = max(worst, gap)
            assert gap <= 1e-6, f"({b1}, {b2}): derivative gap {gap:.3e}"
    print(f"criterion 2: worst derivative gap = {worst:.3e}")


def test_criterion_03_finite_size_gap_shrinks():
    """The moment-factorization gap <t1>^k - <t2> decreases strictly in n."""
    gaps = [abs(finite_gap(n, TRIANGLE, (0.0, -0.2))) for n in range(4, 8)]
    print("criterion 3: |gap| n=4..7 =", ", ".join(f"{g:.6f}" for g in gaps))
    assert all(g > 0 for g in gaps)
    for a, b in zip(gaps, gaps[1:]):
        assert b < a, f"gap did not shrink: {gaps}"


def test_criterion_04_scalar_branch_stationarity():
    """On a 5x5 grid the disordered value's beta-gradient equals
    (u*, u*^3) to 1e-6, and the origin reproduces u*=1/2, value=(log 2)/2."""
    worst = 0.0
    h = 1e-5
    for b1 in np.linspace(-0.5, 0.5, 5):
        for b2 in np.linspace(-0.3, 0.3, 5):
            sol = solve_u_star((b1, b2), 3)
            d1 = (solve_u_star((b1 + h, b2), 3).value
                  - solve_u_star((b1 - h, b2), 3).value) / (2 * h)
            d2 = (solve_u_star((b1, b2 + h), 3).value
                  - solve_u_star((b1, b2 - h), 3).value) / (2 * h)
            gap = max(abs(d1 - sol.u_star), abs(d2 - sol.u_star**3))
            worst = max(worst, gap)
            assert gap <= 1e-6, f"({b1:.2f}, {b2:.2f}): envelope gap {gap:.3e}"
    origin = solve_u_star((0.0, 0.0), 3)
    assert abs(origin.u_star - 0.5) <= 1e-8
    assert abs(origin.value - math.log(2) / 2) <= 1e-10
    print(f"criterion 4: worst envelope gap = {worst:.3e}")


def test_criterion_05_multipartite_implied_densities():
    """The ordered branch implies edge density e^{2b1}(chi-2) /
    ((1+e^{2b1})(chi-1)) and motif density exactly zero."""
    worst = 0.0
    for motif in (TRIANGLE, parse_motif("k4")):
        chi = motif.chi
        for b1 in (-1.0, 0.0, 1.0):
            t1, t2 = implied_multipartite_densities((b1, -5.0), motif)
            want = math.exp(2 * b1) * (chi - 2) / ((1 + math.exp(2 * b1)) * (chi - 1))
            worst = max(worst, abs(t1 - want))
            assert abs(t1 - want) <= 1e-8
            assert t2 == 0.0
    print(f"criterion 5: worst implied-density gap = {worst:.3e}")


def test_criterion_06_transition_location_and_derivative_jump():
    """find_transition brackets a sign change at beta2 <= -1/3 to 1e-6, and
    the implied edge density jumps by at least 0.05 across the crossing."""
    t0 = time.perf_counter()
    est = find_transition(TRIANGLE, 0.0, tolerance=1e-6)
    assert est.beta2_critical <= -1 / 3
    assert est.bracket_width <= 1e-6

    def branch_gap(b2):
        comp = compare_ansatz((0.0, b2), TRIANGLE)
        return comp.er_value - comp.mp_value

    left = branch_gap(est.beta2_critical - est.bracket_width)
    right = branch_gap(est.beta2_critical + est.bracket_width)
    assert left < 0 < right, f"no sign change: {left:.3e}, {right:.3e}"

    # implied edge density = beta1-slope of the winning value, evaluated a
    # small offset away from the crossing on each side; eps=0.01 keeps the
    # branch switch well clear of the h=1e-6 stencil
    def edge_density_slope(b2, h=1e-6):
        def value(b1):
            comp = compare_ansatz((b1, b2), TRIANGLE)
            return max(comp.er_value, comp.mp_value)

        return (value(h) - value(-h)) / (2 * h)

    eps = 0.01
    jump = edge_density_slope(est.beta2_critical - eps) - edge_density_slope(
        est.beta2_critical + eps
    )
    elapsed = time.perf_counter() - t0
    print(f"criterion 6: beta2* = {est.beta2_critical:.9f}, "
          f"derivative jump = {jump:.6f}, {elapsed:.1f}s")
    assert jump >= 0.05, f"jump {jump:.6f} below 0.05"
    assert elapsed < 10.0


def test_criterion_07_sampler_matches_exact_distribution():
    """A 10^6-step single-update chain at n=4 lands within 0.02 total
    variation of the exact distribution, and n=6 chain moments sit within
    three standard errors of enumeration at three parameter points."""
    t0 = time.perf_counter()
    counts = visit_histogram(4, TRIANGLE, (0.3, -0.4), 10**6, seed=5)
    logw = np.empty(64)
    for mask in range(64):
        g = SimpleGraph.from_edge_mask(4, mask)
        t1 = 2.0 * g.edge_count() / 16.0
        t2 = hom_count(TRIANGLE, g) / 64.0
        logw[mask] = 16.0 * (0.3 * t1 - 0.4 * t2)
    w = np.exp(logw - logw.max())
    w /= w.sum()
    tv = 0.5 * float(np.abs(counts / counts.sum() - w).sum())
    assert tv < 0.02, f"total variation {tv:.5f} >= 0.02"

    devs = []
    for b1, b2, seed in ((0.2, -0.5, 101), (0.0, -1.0, 102), (0.3, 0.1, 103)):
        cfg = ChainConfig(n=6, motif=TRIANGLE, params=(b1, b2),
                          samples=6000, burn_in=500, seed=seed)
        st = run_chain(cfg)
        mom = exact_moments(6, TRIANGLE, (b1, b2))
        d1, d2 = abs(st.mean_t1 - mom.mean_t1), abs(st.mean_t2 - mom.mean_t2)
        devs.append(max(d1 / (3 * st.se_t1), d2 / (3 * st.se_t2)))
        assert d1 <= 3 * st.se_t1, f"({b1}, {b2}): t1 off by {d1:.5f} > 3se"
        assert d2 <= 3 * st.se_t2, f"({b1}, {b2}): t2 off by {d2:.5f} > 3se"
    elapsed = time.perf_counter() - t0
    print(f"criterion 7: TV = {tv:.5f}, worst 3se ratio = {max(devs):.2f}, "
          f"{elapsed:.1f}s")
    assert elapsed < 120.0


def test_criterion_08_deep_repulsion_reaches_turan_profile():
    """Annealed n=40 chains at (0, -20) should show vanishing triangle
    density, edge density within 0.05 of the bipartite value 1/4, and cut
    distance to the bipartite reference under 0.1, for seeds 1, 2, 3.

    The triangle density and structure targets are met. The edge-density
    target is not: the equilibrium state at n=40 carries a persistent
    population of defect edges (measured mean_t1 near 0.19, a gap of about
    0.06 > 0.05). Exact enumeration at n <= 7, planted-start chains, and
    n=80 runs all locate the equilibrium there, so the assertion below
    reports the sampler's honest answer rather than a tuned one.
    """
    t0 = time.perf_counter()
    rows = []
    ok = True
    for seed in (1, 2, 3):
        cfg = ChainConfig(
            n=40, motif=TRIANGLE, params=(0.0, -20.0), samples=2000,
            burn_in=1000, seed=seed, annealing=make_annealing_ladder(-20.0, 500),
        )
        st = run_chain(cfg)
        dist, _ = structure_diagnostic(st.final_graph, TRIANGLE, (0.0, -20.0))
        t1_gap = abs(st.mean_t1 - 0.25)
        ok = ok and st.mean_t2 < 0.01 and t1_gap < 0.05 and dist < 0.1
        rows.append(
            f"seed {seed}: mean_t1={st.mean_t1:.4f} (|gap to 0.25|={t1_gap:.4f},"
            f" limit 0.05), mean_t2={st.mean_t2:.6f} (limit 0.01),"
            f" structure={dist:.4f} (limit 0.1)"
        )
    elapsed = time.perf_counter() - t0
    detail = "\n".join(rows)
    print(f"criterion 8: {elapsed:.1f}s\n{detail}")
    assert elapsed < 300.0
    assert ok, "n=40 equilibrium misses a stated target:\n" + detail


def test_criterion_09_cut_norm_certificates():
    """The exact cut norm dominates 10^4 random fractional (S, T) probes on
    50 random 4-block pairs, and its witness subsets attain the value."""
    rng = np.random.default_rng(909)
    worst_slack = math.inf
    worst_witness = 0.0
    for _ in range(50):
        a = rng.random((4, 4))
        f = StepGraphon((a + a.T) / 2)
        b = rng.random((4, 4))
        g = StepGraphon((b + b.T) / 2)
        dist = cut_norm_dist(f, g)
        D = f.values - g.values
        s = rng.random((10**4, 4))
        t = rng.random((10**4, 4))
        probes = np.abs(np.einsum("ki,ij,kj->k", s, D, t)) / 16.0
        slack = dist - float(probes.max())
        worst_slack = min(worst_slack, slack)
        assert slack >= -1e-12, f"probe beat the exact cut norm by {-slack:.3e}"

        value, S, T = cut_norm_witness(f, g)
        ind_s = np.zeros(4)
        ind_s[list(S)] = 1.0
        ind_t = np.zeros(4)
        ind_t[list(T)] = 1.0
        attained = abs(ind_s @ D @ ind_t) / 16.0
        worst_witness = max(worst_witness, abs(attained - dist))
        assert abs(attained - dist) <= 1e-12
        assert value == dist
    print(f"criterion 9: min probe slack = {worst_slack:.3e}, "
          f"worst witness gap = {worst_witness:.3e}")


def test_criterion_10_block_ascent_consistency():
    """One-block ascent reproduces the disordered value to 1e-9 at ten
    random parameter points, and two-block ascent at (0, -50) reaches the
    multipartite value to 1e-6."""
    rng = np.random.default_rng(20260817)
    worst = 0.0
    for _ in range(10):
        b1 = float(rng.uniform(-1.0, 1.0))
        b2 = float(rng.uniform(-1.5, 1.5))
        _, obj = ascend_objective(TRIANGLE, (b1, b2), 1, restarts=2, seed=7)
        er = solve_u_star((b1, b2), 3).value
        worst = max(worst, abs(obj - er))
        assert abs(obj - er) <= 1e-9, f"({b1:.3f}, {b2:.3f}): gap {abs(obj - er):.2e}"
    mp_value, _ = multipartite_free_energy((0.0, -50.0), TRIANGLE)
    _, obj2 = ascend_objective(TRIANGLE, (0.0, -50.0), 2, restarts=2, seed=7)
    print(f"criterion 10: worst one-block gap = {worst:.3e}, "
          f"two-block gap = {abs(obj2 - mp_value):.3e}")
    assert abs(obj2 - mp_value) <= 1e-6
