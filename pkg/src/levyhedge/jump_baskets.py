"""Replication baskets built from power-jump and power-jump-integral assets.

The i-th power jump asset T^(i) = e^{rt} Y^(i) marks the compensated
power-jump process to a bank-account numeraire.  Under the one-jump
regimes stated with each constructor, a static position in these assets
plus stock and cash changes value by exactly C_i (Delta S)^i:

* ``pja_basket_simple``   -- dt negligible, at most one jump.
* ``pja_basket_order2``   -- dt material, sigma = 0, one jump, i = 2.
* ``pja_basket_general``  -- dt material, sigma = 0, one jump, any i,
  through the binomial coefficient tables c_k^(i,j).
* ``pji_basket``          -- infinite-activity case: positions in the
  power-jump-integral assets U_theta = e^{r dt} S'_theta indexed by the
  tuples of I_i, valid for negligible dt with any number of jumps.
* ``phi_hedge_basket``    -- the single-integral reduction traded through
  T^(j) assets with left-endpoint predictable weights; an O(dt)
  approximation by construction.

These are imaginary book entries: they are marked to the recorded jump
list of a simulated path, never to market quotes.  Regime violations are
measured by ``replication_report``, not silently ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chaos import constant_term, enumerate_compositions, phi_extract, pi_coefficient
from .errors import UnsupportedOrderError
from .models import MomentVector

__all__ = [
    "PathState",
    "ScenarioOutcome",
    "JumpBasket",
    "pja_basket_simple",
    "pja_basket_order2",
    "pja_basket_general",
    "pji_basket",
    "phi_hedge_basket",
    "iterated_integral",
    "replication_report",
]


@dataclass(frozen=True)
class PathState:
    """Power-jump bookkeeping at the hedge date: current Y_t^(i) values."""

    t: float
    y: dict[int, float] = field(default_factory=dict)

    def y_value(self, i: int) -> float:
        return self.y.get(i, 0.0)

    def t_asset(self, i: int, r: float) -> float:
        return math.exp(r * self.t) * self.y_value(i)


@dataclass(frozen=True)
class ScenarioOutcome:
    """Realized move over the hedging period [t, t + dt].

    ``jump_times``/``jump_sizes`` list the jumps that landed inside the
    period; the power-jump assets are marked from them.  Baskets assuming
    sigma = 0 regimes are evaluated on jump-only outcomes.
    """

    delta_s: float
    jump_times: np.ndarray = field(default_factory=lambda: np.empty(0))
    jump_sizes: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def n_jumps(self) -> int:
        return len(self.jump_sizes)

    def delta_y(self, i: int, moments: MomentVector, delta_t: float) -> float:
        """Realized increment of Y^(i) over the period (jump part only)."""
        return float(np.sum(self.jump_sizes**i)) - moments[i] * delta_t


@dataclass(frozen=True)
class JumpBasket:
    """Positions replicating one Taylor term out of jump assets.

    ``pja_units[i]`` are units of T^(i), ``pji_units[theta]`` units of
    U_theta, plus stock and bank cash.  ``coeff_table`` keeps the
    c_k^(i,j) values when the general construction produced the basket.
    """

    coefficient: float
    order: int
    s_t: float
    r: float
    delta_t: float
    path_state: PathState
    moments: MomentVector
    pja_units: dict[int, float] = field(default_factory=dict)
    pji_units: dict[tuple, float] = field(default_factory=dict)
    stock_units: float = 0.0
    bank_cash: float = 0.0
    coeff_table: dict | None = None

    def initial_cost(self) -> float:
        t_leg = sum(
            units * self.path_state.t_asset(i, self.r) for i, units in self.pja_units.items()
        )
        # power-jump integrals start at zero value at the hedge date
        return t_leg + self.stock_units * self.s_t + self.bank_cash

    def change_of_value(self, outcome: ScenarioOutcome) -> float:
        t0 = self.path_state.t
        t1 = t0 + self.delta_t
        growth = math.exp(self.r * self.delta_t) - 1.0
        # fsum plus regrouped T-legs: e^{rt1}(y+dy) - e^{rt0}y is evaluated
        # as y e^{rt0}(e^{r dt}-1) + e^{rt1} dy so no term dwarfs the total
        terms = [self.bank_cash * growth, self.stock_units * outcome.delta_s]
        for i, units in self.pja_units.items():
            y_t = self.path_state.y_value(i)
            dy = outcome.delta_y(i, self.moments, self.delta_t)
            terms.append(units * y_t * math.exp(self.r * t0) * growth)
            terms.append(units * math.exp(self.r * t1) * dy)
        if self.pji_units:
            growth_full = math.exp(self.r * self.delta_t)
            for theta, units in self.pji_units.items():
                s_val = iterated_integral(
                    theta, outcome.jump_times, outcome.jump_sizes, self.moments, t0, t1
                )
                terms.append(units * growth_full * s_val)
        return math.fsum(terms)


def replication_report(basket: JumpBasket, outcome: ScenarioOutcome) -> dict:
    """Realized replication error of the basket against C_i (Delta S)^i.

    Regime violations (more than one jump in the period for the one-jump
    baskets) are flagged here so the harness can quantify rather than hide
    them.
    """
    target = basket.coefficient * outcome.delta_s**basket.order
    achieved = basket.change_of_value(outcome)
    one_jump_basket = not basket.pji_units
    return {
        "target": target,
        "achieved": achieved,
        "error": achieved - target,
        "regime_violated": one_jump_basket and outcome.n_jumps > 1,
    }


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def pja_basket_simple(
    coefficient: float, scenario, i: int, path_state: PathState, moments: MomentVector
) -> JumpBasket:
    """Negligible-dt basket: S_t^i e^{-r(t+dt)} units of T^(i) plus the cash
    leg that freezes today's asset value and the compensator drift.

    Exact whenever Delta S = S_t * Delta X with at most one jump in the
    period.
    """
    s_t, r, dt = scenario.s_t, scenario.r, scenario.delta_t
    t = path_state.t
    t_now = path_state.t_asset(i, r)
    units = coefficient * s_t**i * math.exp(-r * (t + dt))
    cash = (
        coefficient
        * s_t**i
        * (math.exp(-r * (t + dt)) * t_now - math.exp(-r * t) * t_now + moments[i] * dt)
        / (math.exp(r * dt) - 1.0)
    )
    return JumpBasket(
        coefficient=coefficient,
        order=i,
        s_t=s_t,
        r=r,
        delta_t=dt,
        path_state=path_state,
        moments=moments,
        pja_units={i: units},
        bank_cash=cash,
    )


def _cij_tables(i: int, s_t: float, drift_b: float, dt: float):
    """Coefficient tables of the binomial expansion of (Delta S)^i when
    Delta S = S_t (e^{b dt}(1 + Delta X) - 1):

    c0[j] collects the constant part, c1[j] the Delta-S-linear part and
    ck[(j, k)] the (Delta X)^k parts for 2 <= k <= j.
    """
    ebd = math.exp(drift_b * dt)
    c0, c1, ck = {}, {}, {}
    for j in range(0, i + 1):
        sign = (-1.0) ** (i - j)
        binom = math.comb(i, j)
        c0[j] = s_t**i * binom * sign * ebd**j * (1.0 + j * (1.0 / ebd - 1.0))
        c1[j] = s_t ** (i - 1) * binom * sign * j * ebd ** (j - 1)
        for k in range(2, j + 1):
            ck[(j, k)] = s_t**i * binom * sign * ebd**j * math.comb(j, k)
    return c0, c1, ck


def pja_basket_general(
    coefficient: float,
    scenario,
    i: int,
    path_state: PathState,
    moments: MomentVector,
    drift_b: float,
) -> JumpBasket:
    """Material-dt basket for any order i >= 2 (sigma = 0, one jump).

    Holds sum_j c_k^(i,j) e^{-r(t+dt)} units of T^(k) for k = 2..i, the
    Delta-S-linear coefficients as stock, and cash covering the constant
    legs plus the frozen T^(k) values and compensator drifts.  Cash at the
    hedge date cannot depend on the coming move, so the Delta-S-linear
    piece is carried as its equivalent stock position rather than as a
    deposit.
    """
    if i < 2:
        raise UnsupportedOrderError(f"general PJA basket needs order >= 2, got {i}")
    s_t, r, dt = scenario.s_t, scenario.r, scenario.delta_t
    t = path_state.t
    c0, c1, ck = _cij_tables(i, s_t, drift_b, dt)
    growth = math.exp(r * dt) - 1.0
    disc_mat = math.exp(-r * (t + dt))
    # the j-sums of the coefficient tables telescope through the binomial
    # identities sum_j C(i,j)C(j,k)(-1)^{i-j} x^j = C(i,k) x^k (x-1)^{i-k};
    # evaluating the closed forms avoids the huge alternating cancellations
    ebd = math.exp(drift_b * dt)
    em1 = math.expm1(drift_b * dt)
    units: dict[int, float] = {}
    ck_sums = {k: s_t**i * math.comb(i, k) * ebd**k * em1 ** (i - k) for k in range(2, i + 1)}
    for k in range(2, i + 1):
        units[k] = coefficient * ck_sums[k] * disc_mat
    stock = coefficient * i * s_t ** (i - 1) * em1 ** (i - 1)
    c0_sum = s_t**i * (1 - i) * em1**i
    cash_terms = [c0_sum]
    for k in range(2, i + 1):
        t_now = path_state.t_asset(k, r)
        cash_terms.append(
            ck_sums[k] * (disc_mat * t_now - math.exp(-r * t) * t_now + moments[k] * dt)
        )
    cash = coefficient * math.fsum(cash_terms) / growth
    return JumpBasket(
        coefficient=coefficient,
        order=i,
        s_t=s_t,
        r=r,
        delta_t=dt,
        path_state=path_state,
        moments=moments,
        pja_units=units,
        stock_units=stock,
        bank_cash=cash,
        coeff_table={"c0": c0, "c1": c1, "ck": ck},
    )


def pja_basket_order2(
    coefficient: float,
    scenario,
    path_state: PathState,
    moments: MomentVector,
    drift_b: float,
) -> JumpBasket:
    """Material-dt basket for the squared term, written out directly:
    S_t^2 e^{2 b dt} e^{-r(t+dt)} units of T^(2), 2 S_t (e^{b dt} - 1)
    units of stock, and the cash leg that freezes the remaining terms."""
    s_t, r, dt = scenario.s_t, scenario.r, scenario.delta_t
    t = path_state.t
    ebd = math.exp(drift_b * dt)
    em1 = math.expm1(drift_b * dt)
    growth = math.exp(r * dt) - 1.0
    disc_mat = math.exp(-r * (t + dt))
    t_now = path_state.t_asset(2, r)
    units = coefficient * s_t**2 * ebd**2 * disc_mat
    stock = coefficient * 2.0 * s_t * em1
    cash = (
        coefficient
        * math.fsum(
            [
                s_t**2 * ebd**2 * disc_mat * t_now,
                -(s_t**2) * em1**2,
                s_t**2 * ebd**2 * (-math.exp(-r * t) * t_now + moments[2] * dt),
            ]
        )
        / growth
    )
    return JumpBasket(
        coefficient=coefficient,
        order=2,
        s_t=s_t,
        r=r,
        delta_t=dt,
        path_state=path_state,
        moments=moments,
        pja_units={2: units},
        stock_units=stock,
        bank_cash=cash,
    )


def pji_basket(
    coefficient: float,
    scenario,
    i: int,
    moments: MomentVector,
    path_state: PathState | None = None,
    max_order: int = 12,
) -> JumpBasket:
    """General-case basket: S_t^i Pi_theta e^{-r dt} units of the
    power-jump-integral asset U_theta for every tuple theta in I_i, plus
    S_t^i C^(i) / (e^{r dt} - 1) in cash.  Valid for negligible dt with
    any jump activity."""
    s_t, r, dt = scenario.s_t, scenario.r, scenario.delta_t
    state = path_state if path_state is not None else PathState(t=0.0)
    disc = math.exp(-r * dt)
    units = {
        theta: coefficient * s_t**i * pi_coefficient(theta, i, moments, dt, max_order) * disc
        for theta in enumerate_compositions(i, max_order)
    }
    cash = (
        coefficient
        * s_t**i
        * constant_term(i, moments, dt, max_order)
        / (math.exp(r * dt) - 1.0)
    )
    return JumpBasket(
        coefficient=coefficient,
        order=i,
        s_t=s_t,
        r=r,
        delta_t=dt,
        path_state=state,
        moments=moments,
        pji_units=units,
        bank_cash=cash,
    )


def phi_hedge_basket(
    coefficient: float,
    scenario,
    n: int,
    moments: MomentVector,
    path_state: PathState,
    max_order: int = 12,
) -> JumpBasket:
    """Single-integral reduction traded through T^(j) assets.

    phi_j e^{-r dt} units of T^(j) for j = 1..n plus cash
    sum_j -e^{-2 r dt} T_t^(j) phi_j + S^n C^(n)/(e^{r dt} - 1), with the
    phi_j frozen at their left-endpoint values.  The dropped deeper
    iterated integrals make this exact only in the dt -> 0 limit.
    """
    s_t, r, dt = scenario.s_t, scenario.r, scenario.delta_t
    phis = phi_extract(n, moments, dt, s_t, max_order)
    disc = math.exp(-r * dt)
    units = {j: coefficient * phis[j] * disc for j in phis}
    cash = coefficient * (
        sum(-math.exp(-2 * r * dt) * path_state.t_asset(j, r) * phis[j] for j in phis)
        + s_t**n * constant_term(n, moments, dt, max_order) / (math.exp(r * dt) - 1.0)
    )
    return JumpBasket(
        coefficient=coefficient,
        order=n,
        s_t=s_t,
        r=r,
        delta_t=dt,
        path_state=path_state,
        moments=moments,
        pja_units=units,
        bank_cash=cash,
    )


# ---------------------------------------------------------------------------
# Iterated stochastic integrals on sigma = 0 jump paths
# ---------------------------------------------------------------------------


def iterated_integral(
    theta,
    jump_times,
    jump_sizes,
    moments: MomentVector,
    t0: float,
    t1: float,
) -> float:
    """S'_theta: the iterated integral of dY^(i_1) ... dY^(i_j) over
    t0 < s_j < ... < s_1 <= t1, evaluated exactly on a finite-activity
    jump path with no Brownian part.

    Between jumps every level is a polynomial in time (the compensator
    contributes -m_i ds); each jump adds the left limit of the integrand
    times the jump power.  The recursion keeps exact piecewise-polynomial
    coefficients, so the result is exact up to float rounding.
    """
    jump_times = np.asarray(jump_times, dtype=float)
    jump_sizes = np.asarray(jump_sizes, dtype=float)
    if len(jump_times) and (jump_times.min() <= t0 or jump_times.max() > t1):
        raise ValueError("jumps must lie inside (t0, t1]")
    order = np.argsort(jump_times, kind="stable")
    jump_times = jump_times[order]
    jump_sizes = jump_sizes[order]
    # common partition: boundaries t0 < tau_1 < ... < t1
    inner = [tau for tau in jump_times if tau < t1]
    bounds = [t0] + sorted(set(inner)) + [t1]
    jumps_at = {}
    for tau, x in zip(jump_times, jump_sizes):
        key = t1 if tau == t1 else tau
        jumps_at.setdefault(key, []).append(x)

    # integrand starts as the constant 1 (empty inner integral)
    segs = [np.array([1.0]) for _ in range(len(bounds) - 1)]
    value_at_end = 1.0
    for level in theta:
        m_i = moments[level]
        new_segs = []
        acc = 0.0  # running value at segment start, after jumps at that boundary
        for q in range(len(bounds) - 1):
            width = bounds[q + 1] - bounds[q]
            # -m_i * antiderivative of the integrand polynomial
            poly = segs[q]
            anti = np.concatenate([[acc], -m_i * poly / np.arange(1, len(poly) + 1)])
            new_segs.append(anti)
            left_limit_new = _polyval(anti, width)
            left_limit_old = _polyval(poly, width)
            acc = left_limit_new
            boundary = bounds[q + 1]
            for x in jumps_at.get(boundary, []):
                acc += left_limit_old * x**level
        value_at_end = acc
        segs = new_segs
    return value_at_end


def _polyval(coeffs_ascending: np.ndarray, x: float) -> float:
    out = 0.0
    for c in coeffs_ascending[::-1]:
        out = out * x + c
    return out
