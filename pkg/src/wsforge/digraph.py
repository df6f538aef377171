"""Directed graphs on {0..n-1} with bitset adjacency rows: Cayley
construction from a residue set, girth by shortest return paths,
domination checks, bounded-walk powers, and girth/domination
certification.

Digraph values are immutable by convention; every operation returns a new
value or a plain result.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Union

from .residues import ResidueSet

__all__ = [
    "Digraph",
    "KLCertificate",
    "KLFailure",
    "cayley",
    "girth",
    "shortest_cycle",
    "is_dominated",
    "all_subsets_dominated",
    "find_undominated_set",
    "power",
    "min_out_degree",
    "certify_kl",
]


@dataclass(eq=True)
class Digraph:
    """``out[v]`` is the bitmask of v's out-neighbors; self-loops permitted."""

    n: int
    out: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be >= 0")
        if len(self.out) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.out)}")
        limit = 1 << self.n
        for v, mask in enumerate(self.out):
            if mask < 0 or mask >= limit:
                raise ValueError(f"adjacency row of vertex {v} has out-of-range neighbors")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        rows = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) outside vertex range [0, {n})")
            rows[u] |= 1 << v
        return cls(n, tuple(rows))

    def arcs(self) -> list[tuple[int, int]]:
        """All arcs in lexicographic order."""
        return [
            (u, v)
            for u in range(self.n)
            for v in range(self.n)
            if self.out[u] >> v & 1
        ]

    def arc_count(self) -> int:
        return sum(mask.bit_count() for mask in self.out)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def out_degree(self, v: int) -> int:
        return self.out[v].bit_count()

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for u, mask in enumerate(self.out):
            m = mask
            while m:
                v = (m & -m).bit_length() - 1
                rows[v] |= 1 << u
                m &= m - 1
        return tuple(rows)


@dataclass(frozen=True)
class KLCertificate:
    """Witnessed claim that every cycle has length >= k (``girth_found`` is
    None when the digraph is acyclic) and that every l-subset of vertices
    was exhaustively confirmed dominated."""

    k: int
    l: int
    girth_found: Optional[int]
    domination_exhaustive: bool
    verified: bool


@dataclass(frozen=True)
class KLFailure:
    """Concrete refutation: a directed cycle shorter than k, or an
    undominated vertex set of cardinality l."""

    k: int
    l: int
    short_cycle: Optional[tuple[int, ...]] = None
    undominated: Optional[tuple[int, ...]] = None


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def cayley(q: int, y: ResidueSet) -> Digraph:
    """Digraph on Z_q with an arc z1 -> z2 iff (z1 - z2) mod q is in Y.

    Every vertex has out-degree and in-degree |Y|.
    """
    if y.modulus != q:
        raise ValueError(f"generator set has modulus {y.modulus}, expected {q}")
    neg = 0
    for r in y.members():
        neg |= 1 << ((q - r) % q)
    mask = (1 << q) - 1
    rows = []
    for z in range(q):
        shift = z % q
        rows.append(((neg << shift) | (neg >> (q - shift))) & mask if shift else neg)
    return Digraph(q, tuple(rows))


# ---------------------------------------------------------------------------
# Girth
# ---------------------------------------------------------------------------


def _shortest_return(d: Digraph, v: int, bound: int) -> Optional[int]:
    """Length of the shortest closed walk through v, or None if none has
    length < bound. A shortest closed walk is always a simple cycle."""
    target = 1 << v
    frontier = d.out[v]
    visited = 0
    steps = 1
    while frontier and steps < bound:
        if frontier & target:
            return steps
        visited |= frontier
        nxt = 0
        m = frontier
        while m:
            u = (m & -m).bit_length() - 1
            nxt |= d.out[u]
            m &= m - 1
        frontier = nxt & ~visited
        steps += 1
    return None


def _girth_and_start(d: Digraph) -> Optional[tuple[int, int]]:
    best: Optional[tuple[int, int]] = None
    for v in range(d.n):
        bound = best[0] if best is not None else d.n + 1
        r = _shortest_return(d, v, bound)
        if r is not None:
            best = (r, v)
            if r == 1:
                break
    return best


def girth(d: Digraph) -> Optional[int]:
    """Length of the shortest directed cycle (self-loop = 1), or None if
    the digraph is acyclic. Shortest-return-path search from every vertex."""
    found = _girth_and_start(d)
    return None if found is None else found[0]


def _distances_to(d: Digraph, v: int) -> list[Optional[int]]:
    dist: list[Optional[int]] = [None] * d.n
    dist[v] = 0
    visited = 1 << v
    frontier = d.in_masks[v] & ~visited
    steps = 1
    while frontier:
        m = frontier
        while m:
            u = (m & -m).bit_length() - 1
            dist[u] = steps
            m &= m - 1
        visited |= frontier
        nxt = 0
        m = frontier
        while m:
            u = (m & -m).bit_length() - 1
            nxt |= d.in_masks[u]
            m &= m - 1
        frontier = nxt & ~visited
        steps += 1
    return dist


def shortest_cycle(d: Digraph) -> Optional[list[int]]:
    """A shortest directed cycle as a vertex list, or None if acyclic.

    Deterministic: starts at the smallest vertex achieving the girth and
    greedily takes the smallest next vertex that stays on a shortest route.
    """
    found = _girth_and_start(d)
    if found is None:
        return None
    g, v = found
    dist_to = _distances_to(d, v)
    cycle = [v]
    cur = v
    for t in range(1, g):
        m = d.out[cur]
        nxt = None
        while m:
            u = (m & -m).bit_length() - 1
            if dist_to[u] == g - t:
                nxt = u
                break
            m &= m - 1
        if nxt is None:
            raise AssertionError("shortest-cycle reconstruction lost the trail")
        cycle.append(nxt)
        cur = nxt
    if not d.has_arc(cur, v):
        raise AssertionError("shortest-cycle reconstruction did not close")
    return cycle


# ---------------------------------------------------------------------------
# Domination
# ---------------------------------------------------------------------------


def is_dominated(d: Digraph, s: Iterable[int]) -> Optional[int]:
    """Smallest vertex with an arc to every member of ``s``, else None.

    The dominator may itself belong to ``s``. Empty sets are rejected:
    the vacuous case is meaningless here.
    """
    verts = sorted(set(s))
    if not verts:
        raise ValueError("cannot test domination of the empty set")
    mask = -1
    for x in verts:
        if not 0 <= x < d.n:
            raise ValueError(f"vertex {x} outside [0, {d.n})")
        mask &= d.in_masks[x]
    if mask == 0:
        return None
    return (mask & -mask).bit_length() - 1


def all_subsets_dominated(d: Digraph, l: int) -> bool:
    """True iff every vertex subset of cardinality exactly l is dominated.

    Covers "at most l" as well: a smaller set extends to an l-set whose
    dominator also dominates it (hence the l <= n precondition).
    """
    if not 1 <= l <= d.n:
        raise ValueError(f"need 1 <= l <= {d.n}, got {l}")
    in_masks = d.in_masks
    for combo in combinations(range(d.n), l):
        mask = -1
        for x in combo:
            mask &= in_masks[x]
            if mask == 0:
                break
        if mask == 0:
            return False
    return True


def find_undominated_set(d: Digraph, l: int) -> Optional[tuple[int, ...]]:
    """Lexicographically first undominated set of cardinality l, else None."""
    if not 1 <= l <= d.n:
        raise ValueError(f"need 1 <= l <= {d.n}, got {l}")
    in_masks = d.in_masks
    for combo in combinations(range(d.n), l):
        mask = -1
        for x in combo:
            mask &= in_masks[x]
            if mask == 0:
                break
        if mask == 0:
            return combo
    return None


# ---------------------------------------------------------------------------
# Powers and certification
# ---------------------------------------------------------------------------


def power(d: Digraph, t: int) -> Digraph:
    """Arc v -> w iff v != w and some directed walk of length 1..t joins them.

    Length-0 walks are excluded, so the power of a loop-free digraph stays
    loop-free.
    """
    if t < 1:
        raise ValueError(f"power exponent must be >= 1, got {t}")
    acc = list(d.out)
    for _ in range(t - 1):
        nxt = []
        for v in range(d.n):
            reach = acc[v]
            m = acc[v]
            while m:
                u = (m & -m).bit_length() - 1
                reach |= d.out[u]
                m &= m - 1
            nxt.append(reach)
        acc = nxt
    return Digraph(d.n, tuple(acc[v] & ~(1 << v) for v in range(d.n)))


def min_out_degree(d: Digraph) -> int:
    if d.n == 0:
        return 0
    return min(mask.bit_count() for mask in d.out)


def certify_kl(d: Digraph, k: int, l: int) -> Union[KLCertificate, KLFailure]:
    """Certify girth >= k (acyclic passes vacuously) and every l-subset
    dominated, or return a concrete witness of failure."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 1 <= l <= d.n:
        raise ValueError(f"need 1 <= l <= {d.n}, got {l}")
    cyc = shortest_cycle(d)
    if cyc is not None and len(cyc) < k:
        return KLFailure(k, l, short_cycle=tuple(cyc))
    witness = find_undominated_set(d, l)
    if witness is not None:
        return KLFailure(k, l, undominated=witness)
    return KLCertificate(
        k=k,
        l=l,
        girth_found=None if cyc is None else len(cyc),
        domination_exhaustive=True,
        verified=True,
    )
