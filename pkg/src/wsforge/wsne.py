"""Exact-rational verification of well-supported equilibria in win-lose
games, uniform strategy constructions from undominated sets and from even
cycles, and an exhaustive support-enumeration oracle.

All arithmetic is exact: payoffs, thresholds, and feasibility systems use
Fraction throughout, so verdicts at the boundary (payoff equal to best
response minus epsilon) are accepted. No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from .digraph import is_dominated
from .feasibility import Constraint, feasible_point
from .game import (
    CycleWitness,
    UndominatedWitness,
    WinLoseGame,
    char_decision,
    out_degree_offenders,
    to_bipartite_digraph,
)

__all__ = [
    "MixedStrategy",
    "Violation",
    "WsneVerdict",
    "SupportPair",
    "NoWitness",
    "CrosscheckPoint",
    "CrosscheckReport",
    "as_exact",
    "payoffs",
    "check_wsne",
    "wsne_from_undominated",
    "wsne_from_cycle",
    "feasible_on_supports",
    "exhaustive_search",
    "crosscheck_characterization",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_exact(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce to an exact rational; floats are rejected, never rounded."""
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}: exact rationals only")
    return Fraction(value)


@dataclass(frozen=True)
class MixedStrategy:
    """Probability vector with exact entries; sums to exactly 1.

    Vectors that fail the simplex invariants are rejected at construction,
    never normalized.
    """

    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.probs:
            raise ValueError("strategy over zero pure strategies")
        total = _ZERO
        for i, p in enumerate(self.probs):
            if not isinstance(p, Fraction):
                raise TypeError(f"entry {i} is {type(p).__name__}, expected Fraction")
            if p < 0:
                raise ValueError(f"entry {i} is negative: {p}")
            total += p
        if total != 1:
            raise ValueError(f"entries sum to {total}, expected exactly 1")

    @classmethod
    def from_probs(cls, values: Iterable[Union[int, str, Fraction]]) -> "MixedStrategy":
        return cls(tuple(as_exact(v) for v in values))

    @classmethod
    def uniform_on(cls, indices: Iterable[int], length: int) -> "MixedStrategy":
        chosen = sorted(set(indices))
        if not chosen:
            raise ValueError("uniform strategy needs a nonempty index set")
        if chosen[0] < 0 or chosen[-1] >= length:
            raise ValueError(f"indices outside [0, {length})")
        share = Fraction(1, len(chosen))
        probs = [_ZERO] * length
        for i in chosen:
            probs[i] = share
        return cls(tuple(probs))

    @classmethod
    def point_mass(cls, index: int, length: int) -> "MixedStrategy":
        return cls.uniform_on([index], length)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.probs) if p > 0)


@dataclass(frozen=True)
class Violation:
    player: str
    index: int
    payoff: Fraction
    shortfall: Fraction


@dataclass(frozen=True)
class WsneVerdict:
    valid: bool
    epsilon: Fraction
    row_best: Fraction
    col_best: Fraction
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class SupportPair:
    """Candidate supports: row indices and column indices, both nonempty."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self) -> None:
        for name, idx in (("rows", self.rows), ("cols", self.cols)):
            if not idx:
                raise ValueError(f"{name} must be nonempty")
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"{name} must be strictly increasing")
            if idx[0] < 0:
                raise ValueError(f"{name} contains a negative index")


@dataclass(frozen=True)
class NoWitness:
    """Exhaustive refutation: every enumerated support pair is infeasible."""

    pairs_refuted: int


@dataclass(frozen=True)
class CrosscheckPoint:
    eps: Fraction
    char_witness: Union[CycleWitness, UndominatedWitness, None]
    search_result: Union[tuple[MixedStrategy, MixedStrategy], NoWitness]
    agree: bool


@dataclass(frozen=True)
class CrosscheckReport:
    k: int
    agree: bool
    points: tuple[CrosscheckPoint, ...]


# ---------------------------------------------------------------------------
# Payoffs and the checker
# ---------------------------------------------------------------------------


def payoffs(
    g: WinLoseGame, p: MixedStrategy, q: MixedStrategy
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Exact (Aq, p^T B): per-row payoffs against q and per-column payoffs
    against p."""
    if len(p.probs) != g.m:
        raise ValueError(f"row strategy has {len(p.probs)} entries, game has {g.m} rows")
    if len(q.probs) != g.n:
        raise ValueError(f"column strategy has {len(q.probs)} entries, game has {g.n} columns")
    row_pay = []
    for i in range(g.m):
        total = _ZERO
        mask = g.a_rows[i]
        while mask:
            j = (mask & -mask).bit_length() - 1
            total += q.probs[j]
            mask &= mask - 1
        row_pay.append(total)
    col_pay = [_ZERO] * g.n
    for i in range(g.m):
        pi = p.probs[i]
        if pi == 0:
            continue
        mask = g.b_rows[i]
        while mask:
            j = (mask & -mask).bit_length() - 1
            col_pay[j] += pi
            mask &= mask - 1
    return tuple(row_pay), tuple(col_pay)


def check_wsne(
    g: WinLoseGame,
    p: MixedStrategy,
    q: MixedStrategy,
    eps: Union[int, str, Fraction],
) -> WsneVerdict:
    """Exact verdict: every supported pure strategy must earn within eps of
    the best pure response. Boundary cases (payoff == best - eps) pass."""
    eps = as_exact(eps)
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    row_pay, col_pay = payoffs(g, p, q)
    row_best = max(row_pay)
    col_best = max(col_pay)
    violations = []
    for i in p.support:
        if row_pay[i] < row_best - eps:
            violations.append(Violation("row", i, row_pay[i], row_best - eps - row_pay[i]))
    for j in q.support:
        if col_pay[j] < col_best - eps:
            violations.append(Violation("col", j, col_pay[j], col_best - eps - col_pay[j]))
    return WsneVerdict(not violations, eps, row_best, col_best, tuple(violations))


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def _require_out_degree(g: WinLoseGame) -> None:
    offenders = out_degree_offenders(g)
    if offenders:
        raise ValueError(
            "bipartite digraph has vertices with out-degree 0: " + ", ".join(offenders)
        )


def wsne_from_undominated(
    g: WinLoseGame, side: str, indices: Iterable[int]
) -> tuple[MixedStrategy, MixedStrategy, Fraction]:
    """Uniform strategies from a one-sided undominated set U: play uniformly
    on U, and uniformly on the least-index out-neighbors of its members.

    Returns (p, q, eps) with eps = 1 - 1/|U|; the output passes
    :func:`check_wsne` at that eps.
    """
    if side not in ("row", "col"):
        raise ValueError(f"side must be 'row' or 'col', got {side!r}")
    chosen = sorted(set(indices))
    if not chosen:
        raise ValueError("undominated set must be nonempty")
    count = g.m if side == "row" else g.n
    if chosen[0] < 0 or chosen[-1] >= count:
        raise ValueError(f"indices outside [0, {count})")
    _require_out_degree(g)
    h = to_bipartite_digraph(g)
    offset = 0 if side == "row" else g.m
    dominator = is_dominated(h, [offset + i for i in chosen])
    if dominator is not None:
        raise ValueError(f"set is dominated (by bipartite vertex {dominator})")
    k = len(chosen)
    eps = _ONE - Fraction(1, k)
    if side == "row":
        # least-index column out-neighbor of each supported row
        image = sorted({(g.a_rows[i] & -g.a_rows[i]).bit_length() - 1 for i in chosen})
        p = MixedStrategy.uniform_on(chosen, g.m)
        q = MixedStrategy.uniform_on(image, g.n)
    else:
        cols = g.b_col_masks()
        image = sorted({(cols[j] & -cols[j]).bit_length() - 1 for j in chosen})
        p = MixedStrategy.uniform_on(image, g.m)
        q = MixedStrategy.uniform_on(chosen, g.n)
    return p, q, eps


def wsne_from_cycle(
    g: WinLoseGame, cycle: Sequence[int]
) -> tuple[MixedStrategy, MixedStrategy, Fraction]:
    """Uniform strategies on the rows and columns of a directed cycle of
    even length 2k in the game's bipartite digraph; eps = 1 - 1/k."""
    verts = list(cycle)
    if len(verts) < 2 or len(verts) % 2 != 0:
        raise ValueError(f"need a cycle of even length >= 2, got length {len(verts)}")
    if len(set(verts)) != len(verts):
        raise ValueError("cycle repeats a vertex")
    h = to_bipartite_digraph(g)
    for t, u in enumerate(verts):
        if not 0 <= u < h.n:
            raise ValueError(f"vertex {u} outside bipartite digraph")
        v = verts[(t + 1) % len(verts)]
        if not h.has_arc(u, v):
            raise ValueError(f"missing arc {u} -> {v}: input is not a directed cycle")
    rows = sorted(u for u in verts if u < g.m)
    cols = sorted(u - g.m for u in verts if u >= g.m)
    k = len(verts) // 2
    if len(rows) != k or len(cols) != k:
        raise AssertionError("bipartite cycle must alternate sides")
    p = MixedStrategy.uniform_on(rows, g.m)
    q = MixedStrategy.uniform_on(cols, g.n)
    return p, q, _ONE - Fraction(1, k)


# ---------------------------------------------------------------------------
# Support feasibility oracle
# ---------------------------------------------------------------------------


def _project(mask: int, positions: Sequence[int]) -> int:
    pat = 0
    for idx, j in enumerate(positions):
        if mask >> j & 1:
            pat |= 1 << idx
    return pat


def _maximal_patterns(patterns: Iterable[int]) -> tuple[int, ...]:
    distinct = set(patterns)
    return tuple(
        p for p in distinct if not any(q != p and p & ~q == 0 for q in distinct)
    )


class _SupportOracle:
    """Feasibility of the decoupled support systems for one (game, eps).

    The well-supported conditions split: supported rows constrain only the
    column strategy and vice versa. Each side is an exact feasibility system
    over the support's simplex, reduced to distinct support patterns against
    pointwise-maximal opponent patterns, then solved by Fourier-Motzkin.
    Results are cached by pattern signature, which collapses most of the
    enumeration in :func:`exhaustive_search`.
    """

    def __init__(self, g: WinLoseGame, eps: Fraction):
        self.g = g
        self.eps = eps
        self.b_cols = g.b_col_masks()
        self._q_tables: dict[tuple[int, ...], tuple[list[int], tuple[int, ...]]] = {}
        self._p_tables: dict[tuple[int, ...], tuple[list[int], tuple[int, ...]]] = {}
        self._q_solved: dict[tuple, Optional[tuple[Fraction, ...]]] = {}
        self._p_solved: dict[tuple, Optional[tuple[Fraction, ...]]] = {}

    def _table(self, side: str, support: tuple[int, ...]):
        tables = self._q_tables if side == "q" else self._p_tables
        hit = tables.get(support)
        if hit is None:
            if side == "q":
                # patterns of every A row over the candidate columns
                pats = [_project(mask, support) for mask in self.g.a_rows]
            else:
                # patterns of every B column over the candidate rows
                pats = [_project(mask, support) for mask in self.b_cols]
            hit = (pats, _maximal_patterns(pats))
            tables[support] = hit
        return hit

    def _solve(
        self,
        side: str,
        var_support: tuple[int, ...],
        opp_support: tuple[int, ...],
    ) -> Optional[tuple[Fraction, ...]]:
        pats, maximal = self._table(side, var_support)
        support_pats = frozenset(pats[i] for i in opp_support)
        cache = self._q_solved if side == "q" else self._p_solved
        key = (var_support, support_pats)
        if key in cache:
            return cache[key]
        point = self._solve_system(len(var_support), support_pats, maximal)
        cache[key] = point
        return point

    def _solve_system(
        self, dim: int, support_pats: frozenset[int], maximal: tuple[int, ...]
    ) -> Optional[tuple[Fraction, ...]]:
        cons: list[Constraint] = []
        ones = tuple(_ONE for _ in range(dim))
        neg_ones = tuple(-_ONE for _ in range(dim))
        cons.append((ones, _ONE))
        cons.append((neg_ones, -_ONE))
        for idx in range(dim):
            coeffs = tuple(-_ONE if i == idx else _ZERO for i in range(dim))
            cons.append((coeffs, _ZERO))
        for sp in support_pats:
            for mp in maximal:
                if mp & ~sp == 0:
                    continue  # opponent payoff never exceeds the supported one
                coeffs = tuple(
                    _ONE if (mp >> i & 1) and not (sp >> i & 1)
                    else (-_ONE if (sp >> i & 1) and not (mp >> i & 1) else _ZERO)
                    for i in range(dim)
                )
                cons.append((coeffs, self.eps))
        return feasible_point(cons, dim)

    def q_feasible(
        self, rows: tuple[int, ...], cols: tuple[int, ...]
    ) -> Optional[tuple[Fraction, ...]]:
        """Column distribution over ``cols`` making every row of ``rows`` an
        eps-best response, as a full-length vector; None if infeasible."""
        point = self._solve("q", cols, rows)
        if point is None:
            return None
        full = [_ZERO] * self.g.n
        for idx, j in enumerate(cols):
            full[j] = point[idx]
        return tuple(full)

    def p_feasible(
        self, rows: tuple[int, ...], cols: tuple[int, ...]
    ) -> Optional[tuple[Fraction, ...]]:
        point = self._solve("p", rows, cols)
        if point is None:
            return None
        full = [_ZERO] * self.g.m
        for idx, i in enumerate(rows):
            full[i] = point[idx]
        return tuple(full)

    def pair_feasible(
        self, rows: tuple[int, ...], cols: tuple[int, ...]
    ) -> Optional[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
        # Singleton subsystems are necessary and cache densely; test them first.
        if len(rows) > 1:
            for i in rows:
                if self._solve("q", cols, (i,)) is None:
                    return None
        if len(cols) > 1:
            for j in cols:
                if self._solve("p", rows, (j,)) is None:
                    return None
        q_point = self.q_feasible(rows, cols)
        if q_point is None:
            return None
        p_point = self.p_feasible(rows, cols)
        if p_point is None:
            return None
        return p_point, q_point


def feasible_on_supports(
    g: WinLoseGame, pair: SupportPair, eps: Union[int, str, Fraction]
) -> Optional[tuple[MixedStrategy, MixedStrategy]]:
    """Exact feasibility of an eps-WSNE with supports inside ``pair``.

    The conditions are imposed on all of P and Q; a feasible point whose
    support is a strict subset is still a valid eps-WSNE, so the extra
    constraints only shrink the feasible region. Returns exact witnesses.
    """
    eps = as_exact(eps)
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    if pair.rows[-1] >= g.m or pair.cols[-1] >= g.n:
        raise ValueError("support pair exceeds game dimensions")
    oracle = _SupportOracle(g, eps)
    found = oracle.pair_feasible(pair.rows, pair.cols)
    if found is None:
        return None
    p_point, q_point = found
    return MixedStrategy(p_point), MixedStrategy(q_point)


def _supports(count: int, k: int) -> list[tuple[int, ...]]:
    """Nonempty index sets of cardinality <= k in lexicographic tuple order."""
    sets: list[tuple[int, ...]] = []
    for size in range(1, min(k, count) + 1):
        sets.extend(combinations(range(count), size))
    sets.sort()
    return sets


def exhaustive_search(
    g: WinLoseGame, k: int, eps: Union[int, str, Fraction]
) -> Union[tuple[MixedStrategy, MixedStrategy], NoWitness]:
    """First feasible eps-WSNE over all support pairs with sizes <= k, in
    lexicographic pair order, or the count of pairs exhaustively refuted."""
    if not 1 <= k <= min(g.m, g.n):
        raise ValueError(f"need 1 <= k <= min(m, n) = {min(g.m, g.n)}, got {k}")
    eps = as_exact(eps)
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    oracle = _SupportOracle(g, eps)
    col_supports = _supports(g.n, k)
    refuted = 0
    for rows in _supports(g.m, k):
        for cols in col_supports:
            found = oracle.pair_feasible(rows, cols)
            if found is not None:
                p_point, q_point = found
                return MixedStrategy(p_point), MixedStrategy(q_point)
            refuted += 1
    return NoWitness(refuted)


def crosscheck_characterization(g: WinLoseGame, k: int) -> CrosscheckReport:
    """Cross-check the graph characterization against the enumeration oracle.

    Runs :func:`char_decision` once and :func:`exhaustive_search` at
    eps = 1 - 1/k and eps = 1 - 1/(2k); agreement means a witness exists
    exactly when the characterization finds a structure, at both points.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    witness = char_decision(g, k)  # raises on out-degree violations
    points = []
    agree = True
    for eps in (_ONE - Fraction(1, k), _ONE - Fraction(1, 2 * k)):
        result = exhaustive_search(g, k, eps)
        ok = isinstance(result, NoWitness) == (witness is None)
        points.append(CrosscheckPoint(eps, witness, result, ok))
        agree = agree and ok
    return CrosscheckReport(k, agree, tuple(points))
