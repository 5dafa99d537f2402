"""Combinatorics of powers of Levy increments.

The k-th power of an increment X_{t+dt} - X_t splits into iterated
stochastic integrals against the compensated power-jump processes Y^(j)
plus a deterministic constant.  This module enumerates the index sets,
evaluates the constant term C^(k) (a polynomial in dt built from the
moments m'_q), the coefficient Pi attached to each iterated integral, and
the first-order predictable integrands used by the minimal-variance
portfolios.

All arithmetic is generic: feeding ``Fraction`` moments and times yields
exact rational values, floats yield floats.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import UnsupportedOrderError

__all__ = [
    "enumerate_partitions",
    "enumerate_compositions",
    "multinomial",
    "constant_term",
    "constant_term_poly",
    "pi_coefficient",
    "phi_extract",
]

MAX_ORDER = 12


def _check_order(k: int, max_order: int):
    if not 1 <= k <= max_order:
        raise UnsupportedOrderError(
            f"order {k} outside supported range 1..{max_order}"
        )


@lru_cache(maxsize=None)
def enumerate_partitions(k: int, max_order: int = MAX_ORDER) -> tuple[tuple[int, ...], ...]:
    """All integer partitions of k as non-increasing tuples (the set L_k)."""
    _check_order(k, max_order)

    def gen(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    return tuple(gen(k, k))


@lru_cache(maxsize=None)
def enumerate_compositions(k: int, max_order: int = MAX_ORDER) -> tuple[tuple[int, ...], ...]:
    """Ordered tuples of positive integers with component sum <= k (the set I_k)."""
    _check_order(k, max_order)
    out = []

    def gen(prefix, total):
        if prefix:
            out.append(tuple(prefix))
        for nxt in range(1, k - total + 1):
            prefix.append(nxt)
            gen(prefix, total + nxt)
            prefix.pop()

    gen([], 0)
    return tuple(out)


def multinomial(parts) -> int:
    """(i_1, ..., i_l)! = (sum i_j)! / prod i_j!"""
    total = sum(parts)
    out = math.factorial(total)
    for p in parts:
        out //= math.factorial(p)
    return out


def constant_term_poly(k: int, moments, max_order: int = MAX_ORDER) -> dict:
    """C^(k) as a polynomial in the period length: {power of t: coefficient}.

    Each partition of k with l parts contributes to the t^l coefficient, so
    the degree is at most k and C^(1) is linear.
    """
    _check_order(k, max_order)
    poly: dict[int, object] = {}
    for part in enumerate_partitions(k, max_order):
        l = len(part)
        counts: dict[int, int] = {}
        for q in part:
            counts[q] = counts.get(q, 0) + 1
        coeff = math.factorial(k)
        for q, c in counts.items():
            coeff //= math.factorial(q) ** c * math.factorial(c)
        prod = 1
        for q in part:
            prod = prod * moments.prime(q)
        poly[l] = poly.get(l, 0) + coeff * prod
    return poly


def constant_term(k: int, moments, t, max_order: int = MAX_ORDER):
    """Deterministic part C^(k) of (X_{t+dt} - X_t)^k.

    Sums over the partitions of k: each partition (i_1 >= ... >= i_l) with
    multiplicities p_r contributes
    (1/l!) (i_1..i_l)! (p_1..p_k)! prod m'_{i_q} t^l, which collapses to
    k! / (prod i_q! prod p_r!) prod m'_{i_q} t^l.  Equivalently C^(k) is
    the k-th raw moment of the increment.

    ``moments`` must expose ``prime(i)`` (see ``MomentVector``); exact
    inputs give exact output.
    """
    if k == 0:
        return 1
    total = 0
    for power, coeff in constant_term_poly(k, moments, max_order).items():
        total = total + coeff * t**power
    return total


def pi_coefficient(index_tuple, k: int, moments, t, max_order: int = MAX_ORDER):
    """Coefficient Pi of the iterated integral indexed by ``index_tuple``
    inside (X_{t+dt} - X_t)^k: (i_1, ..., i_j, n)! C^(n) with
    n = k - sum(i_p) and C^(0) = 1."""
    _check_order(k, max_order)
    s = sum(index_tuple)
    if s > k:
        raise UnsupportedOrderError(
            f"tuple {index_tuple} sums to {s} > order {k}"
        )
    n = k - s
    coeff = multinomial(tuple(index_tuple) + (n,))
    return coeff * constant_term(n, moments, t, max_order)


def phi_extract(n: int, moments, dt, s_t=1.0, max_order: int = MAX_ORDER) -> dict:
    """Left-endpoint predictable integrands phi_j of the single-integral
    reduction of (Delta S)^n = sum_j int phi_j dY^(j) + S^n C^(n).

    At the left endpoint every iterated integral of depth >= 2 starts from
    zero, so only the single-integral tuples (j) survive:
    phi_j = S_t^n Pi_{(j)}^{(n)}.  Valid as the leading approximation for
    negligible dt; deeper tuples feed back path-dependent corrections that
    a one-shot ledger cannot carry.
    """
    _check_order(n, max_order)
    return {
        j: s_t**n * pi_coefficient((j,), n, moments, dt, max_order)
        for j in range(1, n + 1)
    }
