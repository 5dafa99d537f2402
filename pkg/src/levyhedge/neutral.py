"""Moment neutrality through other traded derivatives on the same underlying.

Delta hedging kills the first spot-derivative of a portfolio; adding n
traded derivatives with known ladders lets the book cancel every spot
derivative up to order n: solve
D2^k F + sum_i w_i D2^k F_i = 0 for k = 1..n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnhedgeableSetError

__all__ = ["NeutralitySystem", "solve_neutrality"]

CONDITION_LIMIT = 1e12
RESIDUAL_SCALE = 1e-8


@dataclass(frozen=True)
class NeutralitySystem:
    """Solved k-th moment neutrality: instrument weights and residuals."""

    target: np.ndarray
    instrument_matrix: np.ndarray
    weights: np.ndarray
    residuals: np.ndarray
    condition: float


def solve_neutrality(target, instruments) -> NeutralitySystem:
    """Weights making the combined portfolio k-th moment neutral, k = 1..n.

    ``target`` holds D2^k F for k = 1..n; ``instruments`` is a sequence of
    n ladders, each holding D2^k F_i for k = 1..n.  Raises
    ``UnhedgeableSetError`` when the instrument matrix is singular or its
    condition number exceeds 1e12, naming the order whose equation the
    instruments cannot span.
    """
    target = np.asarray(target, dtype=float)
    n = len(target)
    a = np.column_stack([np.asarray(col, dtype=float)[:n] for col in instruments])
    if a.shape != (n, n):
        raise ValueError(f"need {n} instruments with ladders to order {n}")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        deficient = _deficient_order(a)
        raise UnhedgeableSetError(
            f"instrument matrix condition {cond:.3g} exceeds {CONDITION_LIMIT:.0e}; "
            f"order {deficient} is not spanned",
            order=deficient,
        )
    weights = np.linalg.solve(a, -target)
    residuals = target + a @ weights
    row_norms = np.linalg.norm(a, axis=1) + np.linalg.norm(target)
    bad = np.abs(residuals) > RESIDUAL_SCALE * np.maximum(row_norms, 1.0)
    if bad.any():
        raise UnhedgeableSetError(
            f"residual too large at order {int(np.argmax(bad)) + 1}",
            order=int(np.argmax(bad)) + 1,
        )
    return NeutralitySystem(
        target=target,
        instrument_matrix=a,
        weights=weights,
        residuals=residuals,
        condition=float(cond),
    )


def _deficient_order(a: np.ndarray) -> int:
    """Row whose equation the near-null direction of the matrix fails."""
    _, _, vt = np.linalg.svd(a)
    null_dir = vt[-1]
    impact = np.abs(a @ null_dir)
    return int(np.argmin(impact)) + 1
