"""Double Taylor decomposition of a price change and the hedge ledger.

The price change over one hedging period splits into a deterministic
time series D1^i F (dt)^i / i! and a spot series D2^i F (dS)^i / i!.
The time series is replicated by one bank deposit; the linear spot term
by stock; each higher term i by C_i = D2^i F / i! units of a basket
P^(i) whose change of value is exactly (dS)^i.  ``find_q`` measures how
many spot terms a tolerance demands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import IncompleteMarketError, NeedsHigherOrderError, ZeroRateError
from .pricing import DerivativeLadder, OptionSpec

__all__ = [
    "HedgeScenario",
    "HedgeLedger",
    "taylor_approx",
    "find_q",
    "bank_term",
    "assemble_ledger",
]


@dataclass(frozen=True)
class HedgeScenario:
    """One hedging experiment: spot, move, period, rate, option, tolerance."""

    s_t: float
    delta_s: float
    delta_t: float
    r: float
    option: OptionSpec | None = None
    alpha_tol: float = 0.01

    def __post_init__(self):
        if self.delta_t <= 0:
            raise ValueError("delta_t must be > 0")
        if self.alpha_tol <= 0:
            raise ValueError("alpha_tol must be > 0")
        if self.s_t <= 0 or self.s_t + self.delta_s <= 0:
            raise ValueError("spot must stay positive over the move")


def taylor_approx(ladder: DerivativeLadder, scenario: HedgeScenario, p: int) -> float:
    """D1^1 F dt + sum_{i<=p} D2^i F (dS)^i / i! (p = 0 keeps only the
    time term)."""
    if p < 0 or p > ladder.order():
        raise ValueError(f"truncation p={p} outside 0..{ladder.order()}")
    total = ladder.d1 * scenario.delta_t
    for i in range(1, p + 1):
        total += ladder.derivative(i) * scenario.delta_s**i / math.factorial(i)
    return total


def find_q(ladder: DerivativeLadder, scenario: HedgeScenario, exact_change: float):
    """Smallest truncation order q >= 1 whose Taylor sum lands within
    alpha_tol of the repriced change; returns (q, achieved_error).

    Raises ``NeedsHigherOrderError`` carrying the best error seen when no
    order within the ladder qualifies.
    """
    tol = scenario.alpha_tol
    best_err = None
    best_p = None
    total = ladder.d1 * scenario.delta_t
    for p in range(1, ladder.order() + 1):
        total += ladder.derivative(p) * scenario.delta_s**p / math.factorial(p)
        err = abs(exact_change - total)
        if best_err is None or err < best_err:
            best_err, best_p = err, p
        if err <= tol:
            return p, err
    raise NeedsHigherOrderError(
        f"tolerance {tol} unreachable within ladder of length {ladder.order()}; "
        f"best error {best_err:.6g} at order {best_p}",
        best_error=best_err,
        best_order=best_p,
    )


def bank_term(d1_terms, scenario: HedgeScenario, allow_zero_rate: bool = False) -> float:
    """Deposit replicating the deterministic time series.

    deposit * (e^{r dt} - 1) = sum_i D1^i F (dt)^i / i!, so the accrued
    interest pays out exactly the time decay.  With r = 0 the compounding
    formula degenerates; ``allow_zero_rate`` instead holds the required
    sum as plain cash (consumed, not accrued).
    """
    try:
        iter(d1_terms)
        terms = tuple(d1_terms)
    except TypeError:
        terms = (d1_terms,)
    required = sum(
        term * scenario.delta_t**i / math.factorial(i)
        for i, term in enumerate(terms, start=1)
    )
    if scenario.r == 0:
        if not allow_zero_rate:
            raise ZeroRateError("bank replication needs r > 0 (or allow_zero_rate)")
        return required
    return required / (math.exp(scenario.r * scenario.delta_t) - 1.0)


@dataclass(frozen=True)
class HedgeLedger:
    """Replicating positions for one hedging period.

    ``term_positions[i]`` pairs the Taylor coefficient C_i with the basket
    fragment whose ``change_of_value`` reproduces (dS)^i per unit.
    """

    bank_cash: float
    stock_units: float
    term_positions: dict[int, tuple[float, object]] = field(default_factory=dict)
    scenario: HedgeScenario | None = None
    zero_rate: bool = False

    def change_of_value(self, delta_s: float, outcome=None) -> float:
        """Mark the ledger against a realized move.

        Swap fragments only need the move; jump baskets need the full
        ``outcome`` (jump records).  Fragments see ``outcome`` when they
        accept one.
        """
        sc = self.scenario
        if self.zero_rate:
            bank = self.bank_cash
        else:
            bank = self.bank_cash * (math.exp(sc.r * sc.delta_t) - 1.0)
        total = bank + self.stock_units * delta_s
        for _, fragment in self.term_positions.values():
            if outcome is not None and _accepts_outcome(fragment):
                total += fragment.change_of_value(outcome)
            else:
                total += fragment.change_of_value(delta_s)
        return total


def _accepts_outcome(fragment) -> bool:
    return hasattr(fragment, "pja_units") or hasattr(fragment, "pji_units")


def assemble_ledger(
    ladder: DerivativeLadder,
    scenario: HedgeScenario,
    q: int,
    basket_provider=None,
    allow_zero_rate: bool = False,
) -> HedgeLedger:
    """Build the full hedge: bank deposit for the time term, D2^1 F units
    of stock, and C_i = D2^i F / i! units of basket i for i = 2..q.

    ``basket_provider(i, c_i)`` must return the unit basket fragment for
    each required order; returning None raises ``IncompleteMarketError``
    naming the missing order.
    """
    if q < 0 or q > ladder.order():
        raise ValueError(f"q={q} outside ladder range 0..{ladder.order()}")
    cash = bank_term((ladder.d1,), scenario, allow_zero_rate=allow_zero_rate)
    stock = ladder.derivative(1) if q >= 1 else 0.0
    positions: dict[int, tuple[float, object]] = {}
    for i in range(2, q + 1):
        c_i = ladder.derivative(i) / math.factorial(i)
        fragment = basket_provider(i, c_i) if basket_provider is not None else None
        if fragment is None:
            raise IncompleteMarketError(
                f"no basket available for Taylor term {i}", order=i
            )
        positions[i] = (c_i, fragment)
    return HedgeLedger(
        bank_cash=cash,
        stock_units=stock,
        term_positions=positions,
        scenario=scenario,
        zero_rate=scenario.r == 0,
    )
