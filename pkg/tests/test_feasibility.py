"""Fourier-Motzkin feasibility against an exact vertex-enumeration oracle.

The oracle solves every square subsystem of tight constraints by Gaussian
elimination over Fractions; generated systems carry box bounds, so they are
bounded and nonempty iff some basic point satisfies everything.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest

from wsforge.feasibility import feasible_point

F = Fraction


def _solve_square(rows, rhs):
    n = len(rhs)
    mat = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            return None
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = mat[col][col]
        mat[col] = [x / inv for x in mat[col]]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [x - factor * y for x, y in zip(mat[r], mat[col])]
    return tuple(mat[r][n] for r in range(n))


def brute_feasible(constraints, num_vars) -> bool:
    """A bounded nonempty polyhedron has a vertex: try every square
    subsystem of tight constraints."""
    for subset in combinations(range(len(constraints)), num_vars):
        point = _solve_square(
            [constraints[i][0] for i in subset], [constraints[i][1] for i in subset]
        )
        if point is None:
            continue
        if all(
            sum(c * x for c, x in zip(coeffs, point)) <= bound
            for coeffs, bound in constraints
        ):
            return True
    return False


def _satisfies(constraints, point) -> bool:
    return all(
        sum(c * x for c, x in zip(coeffs, point)) <= bound for coeffs, bound in constraints
    )


def test_box_feasible():
    cons = [((F(1),), F(1)), ((F(-1),), F(0))]
    point = feasible_point(cons, 1)
    assert point is not None and _satisfies(cons, point)


def test_contradiction_infeasible():
    cons = [((F(1),), F(0)), ((F(-1),), F(-1))]  # x <= 0 and x >= 1
    assert feasible_point(cons, 1) is None


def test_equality_via_two_inequalities():
    cons = [
        ((F(1), F(1)), F(1)),
        ((F(-1), F(-1)), F(-1)),
        ((F(-1), F(0)), F(0)),
        ((F(0), F(-1)), F(0)),
        ((F(0), F(1)), F(1, 3)),  # y <= 1/3 forces x >= 2/3
    ]
    point = feasible_point(cons, 2)
    assert point is not None and _satisfies(cons, point)
    assert point[0] + point[1] == 1
    assert point[0] >= F(2, 3)


def test_unconstrained_returns_origin():
    assert feasible_point([], 2) == (F(0), F(0))


def test_arity_mismatch_rejected():
    with pytest.raises(ValueError):
        feasible_point([((F(1),), F(1))], 2)


def test_tight_equality_point():
    # degenerate feasible region: a single point
    cons = [
        ((F(1), F(1), F(1)), F(1)),
        ((F(-1), F(-1), F(-1)), F(-1)),
        ((F(1), F(-1), F(0)), F(0)),
        ((F(-1), F(1), F(0)), F(0)),
        ((F(1), F(0), F(-1)), F(0)),
        ((F(-1), F(0), F(1)), F(0)),
    ]
    point = feasible_point(cons, 3)
    assert point == (F(1, 3), F(1, 3), F(1, 3))


def test_random_systems_match_vertex_enumeration():
    rng = random.Random(41)
    for _ in range(250):
        num_vars = rng.randrange(1, 4)
        cons = []
        for idx in range(num_vars):  # box bounds keep the region bounded
            lo = tuple(F(-1) if i == idx else F(0) for i in range(num_vars))
            hi = tuple(F(1) if i == idx else F(0) for i in range(num_vars))
            cons.append((lo, F(rng.randrange(0, 4))))
            cons.append((hi, F(rng.randrange(0, 4))))
        for _ in range(rng.randrange(0, 6)):
            coeffs = tuple(F(rng.randrange(-3, 4)) for _ in range(num_vars))
            cons.append((coeffs, F(rng.randrange(-4, 5))))
        point = feasible_point(cons, num_vars)
        if point is None:
            assert not brute_feasible(cons, num_vars)
        else:
            assert _satisfies(cons, point)
            assert brute_feasible(cons, num_vars)
