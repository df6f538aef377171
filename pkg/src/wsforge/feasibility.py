"""Exact feasibility of small linear inequality systems over the rationals.

Constraints are ``coeffs . x <= bound`` with Fraction entries. Variables are
eliminated by Fourier-Motzkin from the highest index down; a feasible point
is then rebuilt by interval back-substitution. Intended for the handful of
variables a support system needs, where the quadratic blow-up is irrelevant.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

__all__ = ["Constraint", "feasible_point"]

Constraint = tuple[tuple[Fraction, ...], Fraction]

_ZERO = Fraction(0)


def _dedup(rows: list[Constraint]) -> Optional[list[Constraint]]:
    """Drop duplicate hyperplanes (keeping the tightest bound) and constant
    rows; None signals an unsatisfiable constant row."""
    best: dict[tuple[Fraction, ...], Fraction] = {}
    for coeffs, bound in rows:
        pivot = next((c for c in coeffs if c != 0), None)
        if pivot is None:
            if bound < 0:
                return None
            continue
        scale = abs(pivot)
        key = tuple(c / scale for c in coeffs)
        b = bound / scale
        if key not in best or b < best[key]:
            best[key] = b
    return [(k, v) for k, v in best.items()]


def _eliminate(rows: list[Constraint], j: int) -> Optional[list[Constraint]]:
    pos = []
    neg = []
    keep = []
    for coeffs, bound in rows:
        c = coeffs[j]
        if c > 0:
            pos.append((coeffs, bound))
        elif c < 0:
            neg.append((coeffs, bound))
        else:
            keep.append((coeffs, bound))
    for pc, pb in pos:
        for nc, nb in neg:
            wp = -nc[j]
            wn = pc[j]
            coeffs = tuple(wp * a + wn * b for a, b in zip(pc, nc))
            keep.append((coeffs, wp * pb + wn * nb))
    return _dedup(keep)


def _pick_in_interval(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    if lo is None and hi is None:
        return _ZERO
    if lo is None:
        return hi  # type: ignore[return-value]
    if hi is None:
        return lo
    return (lo + hi) / 2


def _bounds_for(
    rows: list[Constraint], j: int, chosen: list[Fraction]
) -> tuple[Optional[Fraction], Optional[Fraction]]:
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for coeffs, bound in rows:
        c = coeffs[j]
        if c == 0:
            continue
        rest = bound - sum(coeffs[i] * chosen[i] for i in range(j))
        if c > 0:
            v = rest / c
            if hi is None or v < hi:
                hi = v
        else:
            v = rest / c
            if lo is None or v > lo:
                lo = v
    return lo, hi


def feasible_point(
    constraints: Sequence[Constraint], num_vars: int
) -> Optional[tuple[Fraction, ...]]:
    """An exact rational point satisfying every constraint, or None.

    Every ``coeffs`` tuple must have length ``num_vars``.
    """
    if num_vars < 1:
        raise ValueError("need at least one variable")
    for coeffs, _ in constraints:
        if len(coeffs) != num_vars:
            raise ValueError(f"constraint arity {len(coeffs)} != {num_vars} variables")
    rows = _dedup(list(constraints))
    if rows is None:
        return None
    stages: list[list[Constraint]] = []
    for j in range(num_vars - 1, 0, -1):
        stages.append(rows)
        rows = _eliminate(rows, j)
        if rows is None:
            return None
    lo, hi = _bounds_for(rows, 0, [])
    if lo is not None and hi is not None and lo > hi:
        return None
    chosen = [_pick_in_interval(lo, hi)]
    for j in range(1, num_vars):
        stage = stages[num_vars - 1 - j]
        lo, hi = _bounds_for(stage, j, chosen)
        if lo is not None and hi is not None and lo > hi:
            raise AssertionError("back-substitution escaped the projected system")
        chosen.append(_pick_in_interval(lo, hi))
    return tuple(chosen)
