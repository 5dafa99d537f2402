import math

import numpy as np
import pytest

from levyhedge.chaos import constant_term, enumerate_compositions, pi_coefficient
from levyhedge.jump_baskets import (
    PathState,
    ScenarioOutcome,
    iterated_integral,
    phi_hedge_basket,
    pja_basket_general,
    pja_basket_order2,
    pja_basket_simple,
    pji_basket,
    replication_report,
)
from levyhedge.models import CompoundPoisson, FixedJumps, LevyModel, NormalJumps, moment_vector
from levyhedge.taylor import HedgeScenario


def make_moments(rng, order=10, scale=0.1):
    lam = rng.uniform(0.5, 5.0)
    law = NormalJumps(mean=rng.uniform(-0.05, 0.05), std=rng.uniform(0.02, scale))
    model = LevyModel(jump_spec=CompoundPoisson(lam, law))
    return moment_vector(model, order), model


def scen(s_t, dt, r):
    return HedgeScenario(s_t=s_t, delta_s=1.0, delta_t=dt, r=r, alpha_tol=0.01)


class TestSimpleBasket:
    def test_no_jump_no_move_consistency(self):
        rng = np.random.default_rng(0)
        moments, _ = make_moments(rng)
        sc = scen(100.0, 0.01, 0.05)
        state = PathState(t=0.3, y={2: 0.004})
        basket = pja_basket_simple(1.2, sc, 2, state, moments)
        outcome = ScenarioOutcome(delta_s=0.0)
        # with no jump the compensator drift and the bank leg cancel exactly
        assert basket.change_of_value(outcome) == pytest.approx(0.0, abs=1e-12)

    def test_single_jump_squared(self):
        rng = np.random.default_rng(1)
        moments, _ = make_moments(rng)
        sc = scen(100.0, 0.002, 0.04)
        state = PathState(t=0.0, y={2: 0.0})
        c2 = 0.8
        basket = pja_basket_simple(c2, sc, 2, state, moments)
        x = 0.1
        outcome = ScenarioOutcome(
            delta_s=100.0 * x, jump_times=np.array([0.001]), jump_sizes=np.array([x])
        )
        assert basket.change_of_value(outcome) == pytest.approx(
            c2 * (100.0 * x) ** 2, rel=1e-10
        )

    @pytest.mark.parametrize("order", [2, 3, 4, 6])
    def test_replication_randomized(self, order):
        rng = np.random.default_rng(50 + order)
        for _ in range(100):
            moments, _ = make_moments(rng)
            s_t = rng.uniform(20, 200)
            dt = rng.uniform(1e-4, 0.05)
            r = rng.uniform(0.02, 0.12)
            t0 = rng.uniform(0.0, 2.0)
            state = PathState(t=t0, y={order: rng.uniform(-0.01, 0.01)})
            c = rng.uniform(0.1, 2.0) * rng.choice([-1, 1])
            basket = pja_basket_simple(c, scen(s_t, dt, r), order, state, moments)
            x = rng.uniform(0.05, 0.4) * rng.choice([-1, 1])
            outcome = ScenarioOutcome(
                delta_s=s_t * x,
                jump_times=np.array([t0 + dt * rng.uniform(0.1, 0.9)]),
                jump_sizes=np.array([x]),
            )
            assert basket.change_of_value(outcome) == pytest.approx(
                c * (s_t * x) ** order, rel=1e-10
            )

    def test_regime_violation_reported(self):
        rng = np.random.default_rng(3)
        moments, _ = make_moments(rng)
        sc = scen(100.0, 0.01, 0.05)
        basket = pja_basket_simple(1.0, sc, 2, PathState(t=0.0), moments)
        two_jumps = ScenarioOutcome(
            delta_s=100.0 * ((1.1) * (1.05) - 1),
            jump_times=np.array([0.002, 0.008]),
            jump_sizes=np.array([0.1, 0.05]),
        )
        report = replication_report(basket, two_jumps)
        assert report["regime_violated"]
        assert abs(report["error"]) > 0


class TestMaterialDtBaskets:
    @pytest.mark.parametrize("order", [2, 3, 4, 5])
    def test_general_replication_randomized(self, order):
        # sigma = 0, one jump, dt material: dS = S(e^{b dt}(1+x) - 1)
        rng = np.random.default_rng(70 + order)
        for _ in range(100):
            moments, _ = make_moments(rng)
            s_t = rng.uniform(20, 200)
            dt = rng.uniform(0.01, 0.5)
            r = rng.uniform(0.02, 0.12)
            b = rng.uniform(-0.1, 0.2)
            t0 = rng.uniform(0.0, 1.0)
            state = PathState(
                t=t0, y={k: rng.uniform(-0.01, 0.01) for k in range(2, order + 1)}
            )
            c = rng.uniform(0.1, 2.0) * rng.choice([-1, 1])
            basket = pja_basket_general(c, scen(s_t, dt, r), order, state, moments, b)
            while True:
                x = rng.uniform(0.05, 0.4) * rng.choice([-1, 1])
                ds = s_t * (math.exp(b * dt) * (1 + x) - 1.0)
                if abs(ds) >= 0.05 * s_t:  # keep the target off zero
                    break
            outcome = ScenarioOutcome(
                delta_s=ds,
                jump_times=np.array([t0 + dt * 0.5]),
                jump_sizes=np.array([x]),
            )
            assert basket.change_of_value(outcome) == pytest.approx(
                c * ds**order, rel=1e-10
            )

    def test_order2_matches_general(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            moments, _ = make_moments(rng)
            s_t = rng.uniform(20, 200)
            dt = rng.uniform(0.01, 0.5)
            r = rng.uniform(0.02, 0.12)
            b = rng.uniform(-0.1, 0.2)
            state = PathState(t=rng.uniform(0, 1), y={2: rng.uniform(-0.01, 0.01)})
            c = rng.uniform(0.1, 2.0)
            direct = pja_basket_order2(c, scen(s_t, dt, r), state, moments, b)
            general = pja_basket_general(c, scen(s_t, dt, r), 2, state, moments, b)
            assert direct.pja_units[2] == pytest.approx(general.pja_units[2], rel=1e-12)
            assert direct.stock_units == pytest.approx(general.stock_units, rel=1e-12)
            assert direct.bank_cash == pytest.approx(general.bank_cash, rel=1e-10)

    def test_dt_limit_reduces_to_simple(self):
        rng = np.random.default_rng(6)
        moments, _ = make_moments(rng)
        s_t, r, b = 100.0, 0.05, 0.1
        state = PathState(t=0.0, y={2: 0.002})
        c = 1.0
        for dt in (1e-3, 1e-5, 1e-7):
            material = pja_basket_order2(c, scen(s_t, dt, r), state, moments, b)
            simple = pja_basket_simple(c, scen(s_t, dt, r), 2, state, moments)
            rel = abs(material.pja_units[2] - simple.pja_units[2]) / simple.pja_units[2]
            assert rel < 3 * b * dt
            assert abs(material.stock_units) < 3 * s_t * b * dt


class TestIteratedIntegral:
    def test_single_level_is_compensated_sum(self):
        rng = np.random.default_rng(7)
        moments, _ = make_moments(rng)
        times = np.array([0.1, 0.5, 0.9])
        sizes = np.array([0.1, -0.05, 0.2])
        val = iterated_integral((2,), times, sizes, moments, 0.0, 1.0)
        assert val == pytest.approx(np.sum(sizes**2) - moments[2] * 1.0, rel=1e-12)

    def test_nested_pure_drift(self):
        rng = np.random.default_rng(8)
        moments, _ = make_moments(rng)
        # no jumps: S'_(1,1) = int (-m1 s) d(-m1 s) = m1^2 T^2 / 2
        m1 = moments[1]
        val = iterated_integral((1, 1), [], [], moments, 0.0, 2.0)
        assert val == pytest.approx(m1**2 * 2.0**2 / 2.0, rel=1e-12)

    def test_single_jump_depth_two_hand_formula(self):
        rng = np.random.default_rng(9)
        moments, _ = make_moments(rng)
        m1 = moments[1]
        tau, x, T = 0.4, 0.15, 1.0
        # S'_(1,1) with one jump at tau: -m1 x T + x^2/0 ... hand integral:
        # inner(s) = x 1{s>=tau} - m1 s; integral against dY gives
        # jump term inner(tau-) x = -m1 tau x, drift term m1^2 T^2/2 - m1 x (T - tau)
        want = -m1 * tau * x + m1**2 * T**2 / 2 - m1 * x * (T - tau)
        got = iterated_integral((1, 1), [tau], [x], moments, 0.0, T)
        assert got == pytest.approx(want, rel=1e-11)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_power_decomposition_pathwise(self, n):
        """(X_{t+dt}-X_t)^n = sum_theta Pi_theta S'_theta + C^(n), exactly,
        on sigma = 0 finite-activity paths."""
        rng = np.random.default_rng(90 + n)
        for _ in range(40):
            moments, _ = make_moments(rng)
            t0 = rng.uniform(0, 1)
            dt = rng.uniform(0.05, 0.8)
            n_jumps = rng.integers(0, 5)
            times = np.sort(rng.uniform(t0, t0 + dt, n_jumps))
            sizes = rng.uniform(-0.3, 0.3, n_jumps)
            dx = sizes.sum() - moments[1] * dt + moments[1] * dt  # jump sum only
            # X increment for sigma=0 pure-jump CP: sum of jumps
            dx = sizes.sum()
            total = constant_term(n, moments, dt)
            for theta in enumerate_compositions(n):
                pi = pi_coefficient(theta, n, moments, dt)
                s_val = iterated_integral(theta, times, sizes, moments, t0, t0 + dt)
                total += pi * s_val
            assert total == pytest.approx(dx**n, rel=1e-9, abs=1e-12)


class TestPJIBasket:
    def test_first_order_structure(self):
        rng = np.random.default_rng(10)
        moments, _ = make_moments(rng)
        sc = scen(100.0, 0.01, 0.05)
        basket = pji_basket(1.0, sc, 1, moments)
        assert set(basket.pji_units) == {(1,)}
        assert basket.pji_units[(1,)] == pytest.approx(
            100.0 * math.exp(-0.05 * 0.01), rel=1e-12
        )
        want_cash = 100.0 * moments[1] * 0.01 / (math.exp(0.05 * 0.01) - 1.0)
        assert basket.bank_cash == pytest.approx(want_cash, rel=1e-12)

    def test_deterministic_leg_shares_constant_term(self):
        rng = np.random.default_rng(11)
        moments, _ = make_moments(rng)
        sc = scen(50.0, 0.02, 0.03)
        i = 3
        basket = pji_basket(2.0, sc, i, moments)
        want = 2.0 * 50.0**i * constant_term(i, moments, 0.02) / (math.exp(0.03 * 0.02) - 1)
        assert basket.bank_cash == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_exact_replication_any_jump_count(self, order):
        """The power decomposition makes the PJI basket exact pathwise under
        sigma = 0 and dS = S dX, with any number of jumps."""
        rng = np.random.default_rng(12 + order)
        for _ in range(30):
            moments, _ = make_moments(rng)
            s_t = rng.uniform(20, 200)
            dt = rng.uniform(0.01, 0.3)
            r = rng.uniform(0.02, 0.12)
            c = rng.uniform(0.1, 2.0) * rng.choice([-1, 1])
            basket = pji_basket(c, scen(s_t, dt, r), order, moments)
            n_jumps = rng.integers(0, 5)
            times = np.sort(rng.uniform(0, dt, n_jumps))
            sizes = rng.uniform(-0.3, 0.3, n_jumps)
            dx = sizes.sum()
            outcome = ScenarioOutcome(
                delta_s=s_t * dx, jump_times=times, jump_sizes=sizes
            )
            assert basket.change_of_value(outcome) == pytest.approx(
                c * (s_t * dx) ** order, rel=1e-9, abs=1e-9
            )

    def test_expected_change_matches_constant_mc(self):
        model = LevyModel(jump_spec=CompoundPoisson(4.0, FixedJumps(0.06)))
        moments = moment_vector(model, 8)
        dt = 0.05
        sc = scen(10.0, dt, 0.05)
        i = 2
        basket = pji_basket(1.0, sc, i, moments)
        rng = np.random.default_rng(13)
        n = 20000
        changes = np.empty(n)
        for idx in range(n):
            n_j = rng.poisson(4.0 * dt)
            times = np.sort(rng.uniform(0, dt, n_j))
            sizes = np.full(n_j, 0.06)
            dx = sizes.sum()
            outcome = ScenarioOutcome(delta_s=10.0 * dx, jump_times=times, jump_sizes=sizes)
            changes[idx] = basket.change_of_value(outcome)
        want = 10.0**i * constant_term(i, moments, dt)
        se = changes.std(ddof=1) / math.sqrt(n)
        assert abs(changes.mean() - want) < 4 * se


class TestPhiHedge:
    def test_error_shrinks_linearly_in_dt(self):
        rng = np.random.default_rng(14)
        moments, _ = make_moments(rng)
        s_t, r = 100.0, 0.05
        errs = []
        for dt in (0.2, 0.02, 0.002):
            basket = phi_hedge_basket(1.0, scen(s_t, dt, r), 2, moments, PathState(t=0.0))
            x = 0.2
            outcome = ScenarioOutcome(
                delta_s=s_t * x, jump_times=np.array([dt / 2]), jump_sizes=np.array([x])
            )
            target = (s_t * x) ** 2
            errs.append(abs(basket.change_of_value(outcome) - target))
        assert errs[0] > errs[1] > errs[2]
        # O(dt): a 10x smaller period shrinks the error ~10x
        assert errs[1] / errs[0] < 0.2
        assert errs[2] / errs[1] < 0.2


class TestSelfFinancing:
    def test_pja_final_value_accounting(self):
        """No cash enters between t and t+dt: initial cost plus change of
        value equals the direct mark of the held positions at maturity."""
        rng = np.random.default_rng(77)
        for _ in range(30):
            moments, _ = make_moments(rng)
            s_t = rng.uniform(20, 200)
            dt = rng.uniform(1e-3, 0.05)
            r = rng.uniform(0.02, 0.12)
            t0 = rng.uniform(0, 1)
            order = int(rng.integers(2, 5))
            state = PathState(t=t0, y={order: rng.uniform(-0.01, 0.01)})
            c = rng.uniform(0.1, 2.0)
            basket = pja_basket_simple(c, scen(s_t, dt, r), order, state, moments)
            x = rng.uniform(-0.3, 0.3)
            outcome = ScenarioOutcome(
                delta_s=s_t * x,
                jump_times=np.array([t0 + dt / 2]),
                jump_sizes=np.array([x]),
            )
            final = basket.initial_cost() + basket.change_of_value(outcome)
            y_new = state.y_value(order) + outcome.delta_y(order, moments, dt)
            direct = (
                basket.pja_units[order] * math.exp(r * (t0 + dt)) * y_new
                + basket.stock_units * (s_t + outcome.delta_s)
                + basket.bank_cash * math.exp(r * dt)
            )
            assert final == pytest.approx(direct, rel=1e-9, abs=1e-9)

    def test_pji_initial_positions_cost_nothing_but_cash(self):
        rng = np.random.default_rng(78)
        moments, _ = make_moments(rng)
        basket = pji_basket(1.5, scen(80.0, 0.01, 0.04), 3, moments)
        # the integral assets start at zero value: only the deposit is funded
        assert basket.initial_cost() == pytest.approx(basket.bank_cash)
