import math

import numpy as np
import pytest

from commlab import minimize, numkit
from commlab.numkit import DomainError
from conftest import random_complex


def central_difference_gradients(a, b, target, mu, h=1e-6):
    """Entrywise central differences of the penalty value (the oracle)."""
    def value(aa, bb):
        r = aa @ bb - bb @ aa - target
        return (np.linalg.norm(aa) ** 2 + np.linalg.norm(bb) ** 2
                + mu * np.linalg.norm(r) ** 2)

    def grad_wrt(m, other, first):
        g = np.zeros_like(m)
        for i in range(m.shape[0]):
            for k in range(m.shape[1]):
                for unit in (1.0, 1.0j):
                    e = np.zeros_like(m)
                    e[i, k] = unit * h
                    if first:
                        diff = value(m + e, other) - value(m - e, other)
                    else:
                        diff = value(other, m + e) - value(other, m - e)
                    g[i, k] += unit * diff / (2 * h)
        return g

    return grad_wrt(a, b, True), grad_wrt(b, a, False)


class TestLowerBound:
    def test_recurring_target(self):
        assert minimize.lower_bound_certificate(
            np.diag([-1.0, 1 / 3, 1 / 3, 1 / 3])
        ) == pytest.approx(1.0, abs=1e-13)

    def test_three_dim_target(self):
        assert minimize.lower_bound_certificate(
            np.diag([-1.0, 0.5, 0.5])
        ) == pytest.approx(1.0, abs=1e-13)

    def test_zero(self):
        assert minimize.lower_bound_certificate(np.zeros((3, 3))) == 0.0


class TestPenaltyGradient:
    def test_all_zero(self):
        z = np.zeros((3, 3))
        ga, gb, value = minimize.penalty_gradient(z, z, z, 5.0)
        assert value == 0.0
        assert np.abs(ga).max() == 0.0 and np.abs(gb).max() == 0.0

    def test_finite_difference_oracle(self, rng):
        for _ in range(10):
            d = int(rng.integers(2, 5))
            a, b, t = (random_complex(rng, d) for _ in range(3))
            mu = float(rng.uniform(0.5, 20.0))
            ga, gb, _ = minimize.penalty_gradient(a, b, t, mu)
            na, nb = central_difference_gradients(a, b, t, mu)
            scale = 1.0 + max(np.abs(ga).max(), np.abs(gb).max())
            assert np.abs(ga - na).max() / scale <= 1e-5
            assert np.abs(gb - nb).max() / scale <= 1e-5

    def test_feasible_point_gradient_is_regularizer(self):
        # At the known optimal pair the residual vanishes, so even a huge
        # penalty weight leaves only the norm term.
        ga, _, _ = minimize.penalty_gradient(
            minimize.OPTIMAL_A, minimize.OPTIMAL_B, minimize.OPTIMAL_TARGET, 1e6
        )
        assert np.abs(ga - 2 * minimize.OPTIMAL_A).max() <= 1e-6


class TestVerifyOptimalPair:
    def test_passes(self):
        rep = minimize.verify_optimal_pair()
        assert rep.passed
        names = [row.name for row in rep.checks]
        assert "commutator_max_error" in names
        assert "staircase_zero_pattern" in names


class TestDiagonalEquations:
    def test_optimal_pair(self):
        got = minimize.diagonal_equations(minimize.OPTIMAL_A, minimize.OPTIMAL_B)
        assert np.abs(got - np.array([-1.0, 1 / 3, 1 / 3, 1 / 3])).max() <= 1e-15

    def test_equal_arguments(self, rng):
        a = random_complex(rng, 4)
        assert np.abs(minimize.diagonal_equations(a, a)).max() <= 1e-12

    def test_matches_commutator_diagonal(self, rng):
        a, b = random_complex(rng, 4), random_complex(rng, 4)
        got = minimize.diagonal_equations(a, b)
        want = np.diag(numkit.commutator(a, b))
        assert np.abs(got - want).max() <= 1e-12


class TestMinimizeCommutator:
    def test_zero_target(self):
        cfg = minimize.MinimizeConfig(target=np.zeros((3, 3)), restarts=2, seed=0)
        res = minimize.minimize_commutator(cfg)
        assert res.objective == 0.0
        assert res.feasibility == 0.0
        assert res.certified

    def test_two_dim_target_reaches_known_minimum(self):
        # [E12, E21] = diag(1, -1) with both norms 1, matching the universal
        # lower bound, so the optimum is exactly 1.
        cfg = minimize.MinimizeConfig(
            target=np.diag([1.0, -1.0]), restarts=6, seed=11, max_iters=8000
        )
        res = minimize.minimize_commutator(cfg)
        assert res.certified
        assert res.objective == pytest.approx(1.0, abs=1e-4)
        assert res.objective >= res.lower_bound - 1e-6

    def test_deterministic_and_parallel_merge(self):
        cfg = minimize.MinimizeConfig(target=np.diag([1.0, -1.0]), restarts=4, seed=3)
        r1 = minimize.minimize_commutator(cfg)
        r2 = minimize.minimize_commutator(cfg)
        assert (r1.best_a == r2.best_a).all()
        assert r1.objective == r2.objective
        r3 = minimize.minimize_commutator(cfg, workers=2)
        assert (r1.best_a == r3.best_a).all()
        assert r1.restarts == r3.restarts

    def test_running_best_never_increases(self):
        cfg = minimize.MinimizeConfig(target=np.diag([1.0, -1.0]), restarts=6, seed=5)
        res = minimize.minimize_commutator(cfg)
        feasible = [t.objective for t in res.restarts
                    if t.feasibility <= minimize.FEASIBILITY_TOL]
        running = np.minimum.accumulate(feasible)
        assert (np.diff(running) <= 0).all()
        assert res.objective <= running[-1] + minimize.OBJECTIVE_TIE

    def test_infeasible_budget_flagged_not_raised(self):
        cfg = minimize.MinimizeConfig(
            target=np.diag([1.0, -1.0]), restarts=1, seed=0, max_iters=2
        )
        res = minimize.minimize_commutator(cfg)
        assert not res.certified
        assert res.feasibility > minimize.FEASIBILITY_TOL

    def test_fixed_step_rule_smoke(self):
        cfg = minimize.MinimizeConfig(
            target=np.diag([1.0, -1.0]), restarts=1, seed=0,
            max_iters=200, step_rule="fixed", penalty_weight=1.0,
        )
        res = minimize.minimize_commutator(cfg)
        assert np.isfinite(res.objective)

    def test_config_validation(self):
        with pytest.raises(DomainError):
            minimize.MinimizeConfig(target=np.eye(3))
        with pytest.raises(DomainError):
            minimize.MinimizeConfig(target=np.zeros((2, 2)), step_rule="newton")
        with pytest.raises(DomainError):
            minimize.MinimizeConfig(target=np.zeros((2, 2)), restarts=0)
