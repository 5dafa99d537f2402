"""Central-difference stencils of arbitrary order and their lookup table.

A derivative of order p is approximated from 2N+1 equally spaced samples
as f^(p) ~ (1/T^p) * sum_k d_k^(p) f_k.  Off-center coefficients come from

    d_k^(p) = (-1)^(k+c1) * p!/k^(1+c2) * C_{N,k} * sum_i 1/X(i)^2

where C_{N,k} = N!^2 / ((N-k)! (N+k)!), c = floor((p-1)/2), c1 = 1 iff c
is even, c2 = 1 iff p is even, and X runs over the products of all
length-c combinations drawn from {1..N} \\ {|k|}.  The center coefficient
is 0 for odd p and -2 * sum_{k>0} d_k^(p) for even p.

Coefficients are accumulated in exact rational arithmetic; the expensive
combination sums are enumerated once per length c and shared across every
offset k, which is what makes precomputing the table worthwhile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import BudgetExceededError, InsufficientNodesError, TableFormatError

__all__ = [
    "StencilTable",
    "stencil_coefficient",
    "build_lookup_table",
    "apply_stencil",
    "save_table",
    "load_table",
]

DEFAULT_BUDGET = 100_000_000
_FILE_VERSION = 1


def _c_params(p: int) -> tuple[int, int, int]:
    c = (p - 1) // 2
    c1 = 1 if c % 2 == 0 else 0
    c2 = 1 if p % 2 == 0 else 0
    return c, c1, c2


def stencil_coefficient(
    p: int, half_width: int, k: int, budget: int = DEFAULT_BUDGET
) -> Fraction:
    """Exact d_k^(p) for a single offset, by direct combination enumeration.

    Requires 2N >= p; at p = 2N the leading error order degenerates but the
    coefficients are still the classic ones (the three-point second
    derivative is the p = 2, N = 1 case).
    """
    n = half_width
    if 2 * n < p:
        raise InsufficientNodesError(f"order p={p} needs 2N >= p, got N={n}")
    if not -n <= k <= n:
        raise ValueError(f"offset k={k} outside [-{n}, {n}]")
    c, c1, c2 = _c_params(p)
    if k == 0:
        if p % 2 == 1:
            return Fraction(0)
        return -2 * sum(
            stencil_coefficient(p, n, kk, budget) for kk in range(1, n + 1)
        )
    pool = [y for y in range(1, n + 1) if y != abs(k)]
    comb_sum = Fraction(0)
    visits = 0
    for combo in combinations(pool, c):
        visits += 1
        if visits > budget:
            raise BudgetExceededError(
                f"enumeration for (p={p}, N={n}, k={k}) exceeded budget {budget}",
                visits=visits,
            )
        prod = math.prod(combo)
        comb_sum += Fraction(1, prod * prod)
    mag = Fraction(math.factorial(p), abs(k) ** (1 + c2)) * _cnk(n, abs(k)) * comb_sum
    d = (-1) ** (abs(k) + c1) * mag
    if k < 0 and p % 2 == 1:
        d = -d
    return d


def _cnk(n: int, k: int) -> Fraction:
    return Fraction(math.factorial(n) ** 2, math.factorial(n - k) * math.factorial(n + k))


@dataclass(frozen=True)
class StencilTable:
    """Precomputed d_k^(p) for p = 1..p_max, k = -N..N, exact rationals."""

    half_width: int
    p_max: int
    entries: dict[tuple[int, int], Fraction]
    work_visits: int = 0

    def coefficient(self, p: int, k: int) -> Fraction:
        if not 1 <= p <= self.p_max:
            raise InsufficientNodesError(
                f"order p={p} outside table range 1..{self.p_max}"
            )
        return self.entries[(p, k)]

    def row(self, p: int) -> np.ndarray:
        """Float coefficients for offsets -N..N."""
        n = self.half_width
        return np.array(
            [float(self.coefficient(p, k)) for k in range(-n, n + 1)], dtype=float
        )

    def row_exact(self, p: int) -> list[Fraction]:
        n = self.half_width
        return [self.coefficient(p, k) for k in range(-n, n + 1)]


def build_lookup_table(
    half_width: int, p_max: int | None = None, budget: int = DEFAULT_BUDGET
) -> StencilTable:
    """Build the full coefficient table for p = 1..p_max.

    The enumeration loops over the combination length c first: each
    length-c combination of {1..N} is generated once and its reciprocal
    squared product is credited to every offset k the combination excludes.
    Work is metered in (combination, offset) visits against ``budget``;
    exceeding it raises ``BudgetExceededError`` reporting which derivative
    orders had already been completed.
    """
    n = half_width
    if n < 1:
        raise ValueError("half_width must be >= 1")
    if p_max is None:
        p_max = 2 * n - 1
    if not 1 <= p_max <= 2 * n - 1:
        raise InsufficientNodesError(
            f"p_max={p_max} outside 1..{2 * n - 1} for half_width {n}"
        )
    c_max = (p_max - 1) // 2
    fact_n = math.factorial(n)
    # acc[c][k] accumulates integer numerators of sum 1/X^2 over the common
    # denominator (N!/k)^2, so the hot loop is pure integer arithmetic.
    acc: list[list[int]] = [[0] * (n + 1) for _ in range(c_max + 1)]
    visits = 0
    completed: list[int] = []
    for c in range(0, c_max + 1):
        for combo in combinations(range(1, n + 1), c):
            prod = math.prod(combo)
            base = fact_n // prod
            members = set(combo)
            for k in range(1, n + 1):
                if k in members:
                    continue
                visits += 1
                term = base // k
                acc[c][k] += term * term
        completed.append(c)
        if visits > budget:
            done_orders = [p for p in range(1, p_max + 1) if (p - 1) // 2 <= c]
            raise BudgetExceededError(
                f"table build for N={n} exceeded budget {budget} after c={c} "
                f"({visits} visits); orders p<={max(done_orders)} were complete",
                completed_orders=done_orders,
                visits=visits,
            )
    entries: dict[tuple[int, int], Fraction] = {}
    for p in range(1, p_max + 1):
        c, c1, c2 = _c_params(p)
        total = Fraction(0)
        for k in range(1, n + 1):
            comb_sum = Fraction(acc[c][k] * k * k, fact_n * fact_n)
            d = (
                (-1) ** (k + c1)
                * Fraction(math.factorial(p), k ** (1 + c2))
                * _cnk(n, k)
                * comb_sum
            )
            entries[(p, k)] = d
            entries[(p, -k)] = -d if p % 2 == 1 else d
            total += d
        entries[(p, 0)] = Fraction(0) if p % 2 == 1 else -2 * total
    return StencilTable(half_width=n, p_max=p_max, entries=entries, work_visits=visits)


def apply_stencil(samples, p: int, period: float, table: StencilTable):
    """(1/T^p) sum_k d_k^(p) f_k over samples f at t0 + k*T, k = -N..N.

    Accepts floats (returns float) or exact ``Fraction`` samples (returns
    ``Fraction``, with ``period`` coerced to an exact rational).
    """
    n = table.half_width
    if len(samples) != 2 * n + 1:
        raise ValueError(f"need {2 * n + 1} samples for half_width {n}, got {len(samples)}")
    if not period > 0:
        raise ValueError("sampling period must be > 0")
    exact = any(isinstance(s, Fraction) for s in samples)
    if exact:
        per = period if isinstance(period, Fraction) else Fraction(period)
        row = table.row_exact(p)
        return sum(d * s for d, s in zip(row, samples)) / per**p
    vals = np.asarray(samples, dtype=float)
    return float(table.row(p) @ vals) / period**p


# ---------------------------------------------------------------------------
# Persistence: plain text, exact rationals
# ---------------------------------------------------------------------------


def save_table(table: StencilTable, path) -> None:
    n = table.half_width
    with open(path, "w") as fh:
        fh.write(f"N={n} PMAX={table.p_max} V={_FILE_VERSION}\n")
        for p in range(1, table.p_max + 1):
            for k in range(-n, n + 1):
                frac = table.entries[(p, k)]
                fh.write(f"{p} {k} {frac.numerator}/{frac.denominator}\n")


def load_table(path) -> StencilTable:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise TableFormatError("empty table file", line=1)
    header = dict(
        item.split("=", 1) for item in lines[0].split() if "=" in item
    )
    if "N" not in header or "PMAX" not in header:
        raise TableFormatError("header must carry N=<n> PMAX=<p>", line=1)
    if int(header.get("V", -1)) != _FILE_VERSION:
        raise TableFormatError(
            f"unsupported table format version {header.get('V')!r}, expected {_FILE_VERSION}",
            line=1,
        )
    n = int(header["N"])
    p_max = int(header["PMAX"])
    entries: dict[tuple[int, int], Fraction] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 3:
            raise TableFormatError(f"expected 'p k num/den', got {raw!r}", line=lineno)
        try:
            p, k = int(parts[0]), int(parts[1])
            num, den = parts[2].split("/")
            frac = Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError) as exc:
            raise TableFormatError(f"cannot parse row {raw!r}: {exc}", line=lineno) from None
        if not 1 <= p <= p_max:
            raise TableFormatError(f"order p={p} outside header PMAX={p_max}", line=lineno)
        if abs(k) > n:
            raise TableFormatError(f"offset k={k} outside header N={n}", line=lineno)
        entries[(p, k)] = frac
    expected = p_max * (2 * n + 1)
    if len(entries) != expected:
        raise TableFormatError(
            f"table has {len(entries)} entries, expected {expected}", line=len(lines)
        )
    return StencilTable(half_width=n, p_max=p_max, entries=entries)
