"""Scalar and multipartite mean-field branches: frozen dense-grid pins,
closed forms, the order parameter, and branch selection."""

import math

import pytest

from ergmphase.errors import DomainError, HypothesisError
from ergmphase.graphs import TRIANGLE, parse_motif
from ergmphase.variational import (
    AnsatzComparison,
    ScalarSolution,
    compare_ansatz,
    entropy_I,
    er_free_energy,
    implied_multipartite_densities,
    logistic,
    multipartite_free_energy,
    solve_u_star,
)

LN2 = math.log(2.0)

# frozen from an independent dense-grid (4e6 points) maximization oracle;
# u* locations are grid-limited to ~1e-7, objective values are flat to
# second order at the maximum and pinned tight
ER_PIN = {
    (0.2, -0.5): (0.4489864726545224, 0.38850863707917516),
    (0.0, -10.0): (0.1645556952548027, 0.1790144769025579),
    (0.0, -50.0): (0.08823123629963397, 0.11487025752632966),
}
I_QUARTER_PIN = -0.28116757230940415


class TestEntropy:
    def test_endpoints_use_limit(self):
        assert entropy_I(0.0) == 0.0
        assert entropy_I(1.0) == 0.0

    def test_symmetric_minimum(self):
        assert entropy_I(0.5) == pytest.approx(-LN2 / 2, abs=1e-15)
        assert entropy_I(0.3) == pytest.approx(entropy_I(0.7), abs=1e-15)

    def test_frozen_pin(self):
        assert entropy_I(0.25) == pytest.approx(I_QUARTER_PIN, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            entropy_I(-0.01)
        with pytest.raises(DomainError):
            entropy_I(1.01)


class TestLogistic:
    def test_values(self):
        assert logistic(0.0) == 0.5
        assert logistic(2.0) == pytest.approx(math.exp(2) / (1 + math.exp(2)), abs=1e-15)
        assert logistic(-800.0) == 0.0
        assert logistic(800.0) == 1.0


class TestSolveUStar:
    def test_pure_entropy(self):
        sol = solve_u_star((0.0, 0.0), 3)
        assert sol.u_star == pytest.approx(0.5, abs=1e-12)
        assert sol.value == pytest.approx(LN2 / 2, abs=1e-12)
        assert sol.unique

    def test_beta2_zero_closed_form(self):
        sol = solve_u_star((1.0, 0.0), 3)
        assert sol.u_star == pytest.approx(logistic(2.0), abs=1e-10)

    def test_frozen_pins(self):
        for (b1, b2), (u_pin, v_pin) in ER_PIN.items():
            sol = solve_u_star((b1, b2), 3)
            assert sol.u_star == pytest.approx(u_pin, abs=1e-6)
            assert sol.value == pytest.approx(v_pin, abs=1e-12)
            assert sol.unique

    def test_stationarity_residual(self):
        sol = solve_u_star((0.2, -0.5), 3)
        u = sol.u_star
        residual = 0.2 + 3 * (-0.5) * u**2 - 0.5 * math.log(u / (1 - u))
        assert abs(residual) < 1e-9

    def test_repulsion_lowers_density(self):
        sol = solve_u_star((0.0, -10.0), 3)
        assert 0.0 < sol.u_star < 0.5

    def test_unique_flag_false_with_attraction(self):
        # strong positive beta2 against negative beta1 creates a second local
        # maximum near 1
        sol = solve_u_star((-1.5, 5.0), 3)
        assert not sol.unique

    def test_k_validation(self):
        with pytest.raises(DomainError):
            solve_u_star((0.0, 0.0), 1)

    def test_er_value_is_solution_value(self):
        assert er_free_energy((0.2, -0.5), 3) == solve_u_star((0.2, -0.5), 3).value


class TestMultipartite:
    def test_triangle_closed_form(self):
        value, p_star = multipartite_free_energy((0.0, -3.0), TRIANGLE)
        assert p_star == 0.5
        assert value == pytest.approx(LN2 / 4, abs=1e-15)

    def test_k4_closed_form(self):
        value, p_star = multipartite_free_energy((0.0, 0.0), parse_motif("k4"))
        assert p_star == 0.5
        assert value == pytest.approx(LN2 / 3, abs=1e-15)

    def test_beta2_independent(self):
        a, _ = multipartite_free_energy((0.7, -1.0), TRIANGLE)
        b, _ = multipartite_free_energy((0.7, -99.0), TRIANGLE)
        assert a == b

    def test_implied_densities_formula(self):
        for motif in (TRIANGLE, parse_motif("k4")):
            chi = motif.chi
            for b1 in (-1.0, 0.0, 1.0):
                t1, t2 = implied_multipartite_densities((b1, -1.0), motif)
                e2 = math.exp(2 * b1)
                assert t1 == pytest.approx(
                    e2 * (chi - 2) / ((1 + e2) * (chi - 1)), abs=1e-8
                )
                assert t2 == 0.0

    def test_chi_hypothesis(self):
        with pytest.raises(HypothesisError):
            multipartite_free_energy((0.0, 0.0), parse_motif("edge"))
        with pytest.raises(HypothesisError):
            multipartite_free_energy((0.0, 0.0), parse_motif("0-1,1-2"))


class TestCompareAnsatz:
    def test_disordered_wins_in_shallow_repulsion(self):
        comp = compare_ansatz((0.0, -10.0), TRIANGLE)
        assert comp.winner == "disordered"
        assert comp.order_parameter_C == 0.0
        assert comp.er_value > comp.mp_value

    def test_multipartite_wins_in_deep_repulsion(self):
        comp = compare_ansatz((0.0, -12.0), TRIANGLE)
        assert comp.winner == "multipartite"
        assert comp.mp_value > comp.er_value
        # (p* (r-1)/r)^k at p* = 1/2, r = 2, k = 3
        assert comp.order_parameter_C == pytest.approx(0.015625, abs=1e-15)

    def test_winner_consistent_with_max(self):
        for b1 in (-0.5, 0.0, 0.5):
            for b2 in (-15.0, -5.0, -0.1):
                comp = compare_ansatz((b1, b2), TRIANGLE)
                if comp.winner == "disordered":
                    assert comp.er_value >= comp.mp_value
                    assert comp.order_parameter_C == 0.0
                else:
                    assert comp.mp_value > comp.er_value
                    assert comp.order_parameter_C > 0.0

    def test_values_match_branches(self):
        comp = compare_ansatz((0.2, -0.5), TRIANGLE)
        assert comp.er_value == er_free_energy((0.2, -0.5), 3)
        assert comp.mp_value == multipartite_free_energy((0.2, -0.5), TRIANGLE)[0]
        assert isinstance(comp, AnsatzComparison)

    def test_scalar_solution_type(self):
        assert isinstance(solve_u_star((0.0, 0.0), 3), ScalarSolution)
