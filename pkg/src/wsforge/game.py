"""Win-lose bimatrix games as bipartite digraphs.

A game (A, B) maps to a digraph on row vertices r_0..r_{m-1} (ids 0..m-1)
followed by column vertices c_0..c_{n-1} (ids m..m+n-1): arc r_i -> c_j iff
A[i][j] = 1, arc c_j -> r_i iff B[i][j] = 1. The reverse direction embeds an
arbitrary digraph into a square game by duplicating its vertex set, doubling
each arc across the bipartition, and adding the diagonal arcs r_i -> c_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence, Union

from .digraph import Digraph, shortest_cycle

__all__ = [
    "WinLoseGame",
    "CycleWitness",
    "UndominatedWitness",
    "to_bipartite_digraph",
    "bipartify",
    "char_decision",
    "out_degree_offenders",
]


@dataclass(eq=True)
class WinLoseGame:
    """0-1 payoff matrices stored as row bitmasks: bit j of ``a_rows[i]`` is
    the row player's payoff A[i][j], likewise ``b_rows`` for the column
    player."""

    m: int
    n: int
    a_rows: tuple[int, ...]
    b_rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.m < 0 or self.n < 0:
            raise ValueError("matrix dimensions must be >= 0")
        if len(self.a_rows) != self.m or len(self.b_rows) != self.m:
            raise ValueError("payoff matrices must have m rows each")
        limit = 1 << self.n
        for name, rows in (("A", self.a_rows), ("B", self.b_rows)):
            for i, mask in enumerate(rows):
                if mask < 0 or mask >= limit:
                    raise ValueError(f"{name} row {i} has entries outside column range")

    @classmethod
    def from_matrices(
        cls, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]
    ) -> "WinLoseGame":
        if len(a) != len(b):
            raise ValueError("A and B must have the same number of rows")
        m = len(a)
        n = len(a[0]) if m else 0
        a_rows = []
        b_rows = []
        for name, src, dst in (("A", a, a_rows), ("B", b, b_rows)):
            for i, row in enumerate(src):
                if len(row) != n:
                    raise ValueError(f"{name} row {i} has length {len(row)}, expected {n}")
                mask = 0
                for j, entry in enumerate(row):
                    if entry not in (0, 1):
                        raise ValueError(f"{name}[{i}][{j}] = {entry!r} is not 0 or 1")
                    if entry:
                        mask |= 1 << j
                dst.append(mask)
        return cls(m, n, tuple(a_rows), tuple(b_rows))

    def a(self, i: int, j: int) -> int:
        return self.a_rows[i] >> j & 1

    def b(self, i: int, j: int) -> int:
        return self.b_rows[i] >> j & 1

    def a_matrix(self) -> list[list[int]]:
        return [[self.a(i, j) for j in range(self.n)] for i in range(self.m)]

    def b_matrix(self) -> list[list[int]]:
        return [[self.b(i, j) for j in range(self.n)] for i in range(self.m)]

    def b_col_masks(self) -> tuple[int, ...]:
        """Bitmask over rows per column: bit i of entry j is B[i][j]."""
        cols = [0] * self.n
        for i, mask in enumerate(self.b_rows):
            m = mask
            while m:
                j = (m & -m).bit_length() - 1
                cols[j] |= 1 << i
                m &= m - 1
        return tuple(cols)


@dataclass(frozen=True)
class CycleWitness:
    """Directed cycle in the bipartite digraph, as vertex ids (rows are
    0..m-1, columns m..m+n-1); consecutive arcs exist and the length is even."""

    vertices: tuple[int, ...]


@dataclass(frozen=True)
class UndominatedWitness:
    """One-sided undominated set: ``side`` is "row" or "col" and ``indices``
    are matrix indices on that side."""

    side: str
    indices: tuple[int, ...]


def to_bipartite_digraph(g: WinLoseGame) -> Digraph:
    """Digraph on m + n vertices, rows first: r_i -> c_j iff A[i][j] = 1 and
    c_j -> r_i iff B[i][j] = 1."""
    rows = [mask << g.m for mask in g.a_rows]
    rows.extend(g.b_col_masks())
    return Digraph(g.m + g.n, tuple(rows))


def bipartify(d: Digraph) -> WinLoseGame:
    """Square game whose bipartite digraph mirrors ``d`` on both sides.

    A[i][j] = 1 iff i = j or (v_i, v_j) is an arc; B[i][j] = 1 iff
    (v_j, v_i) is an arc, i.e. the bipartite arc c_j -> r_i exists.
    """
    a_rows = tuple(d.out[i] | (1 << i) for i in range(d.n))
    b_rows = d.in_masks
    return WinLoseGame(d.n, d.n, a_rows, b_rows)


def out_degree_offenders(g: WinLoseGame) -> list[str]:
    """Labels of bipartite vertices with out-degree zero (empty A rows and
    empty B columns)."""
    offenders = [f"r{i}" for i in range(g.m) if g.a_rows[i] == 0]
    offenders.extend(f"c{j}" for j, mask in enumerate(g.b_col_masks()) if mask == 0)
    return offenders


def char_decision(
    g: WinLoseGame, k: int
) -> Union[CycleWitness, UndominatedWitness, None]:
    """Decide whether the game's bipartite digraph has a cycle of length at
    most 2k or a one-sided undominated set of cardinality k.

    Prefers the cycle witness, returning the shortest cycle with
    deterministic tie-breaking; the undominated search scans row-side index
    sets lexicographically, then column-side. Requires minimum out-degree
    at least one and rejects other games with a diagnostic.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    offenders = out_degree_offenders(g)
    if offenders:
        raise ValueError(
            "bipartite digraph has vertices with out-degree 0: " + ", ".join(offenders)
        )
    h = to_bipartite_digraph(g)
    cyc = shortest_cycle(h)
    if cyc is not None and len(cyc) <= 2 * k:
        return CycleWitness(tuple(cyc))
    in_masks = h.in_masks
    for side, count, offset in (("row", g.m, 0), ("col", g.n, g.m)):
        if k > count:
            continue
        for combo in combinations(range(count), k):
            mask = -1
            for x in combo:
                mask &= in_masks[offset + x]
                if mask == 0:
                    break
            if mask == 0:
                return UndominatedWitness(side, combo)
    return None
