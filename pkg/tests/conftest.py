"""Seeded generators shared across the suite."""

from __future__ import annotations

import random

from wsforge import Digraph, WinLoseGame, girth


def random_digraph(
    rng: random.Random, n: int, p: float = 0.3, ensure_min_out: bool = False
) -> Digraph:
    """Loop-free digraph with iid arcs; optionally patch empty out-rows."""
    rows = []
    for v in range(n):
        mask = 0
        for w in range(n):
            if v != w and rng.random() < p:
                mask |= 1 << w
        rows.append(mask)
    if ensure_min_out:
        for v in range(n):
            if rows[v] == 0:
                w = rng.randrange(n - 1)
                if w >= v:
                    w += 1
                rows[v] |= 1 << w
    return Digraph(n, tuple(rows))


def random_digraph_with_cycle(rng: random.Random, n: int, p: float = 0.3) -> Digraph:
    while True:
        d = random_digraph(rng, n, p)
        if girth(d) is not None:
            return d


def random_game(
    rng: random.Random, m: int, n: int, p: float = 0.35, ensure_out_degree: bool = True
) -> WinLoseGame:
    """Random 0-1 game; optionally patch empty A rows and empty B columns so
    the bipartite digraph has minimum out-degree at least one."""
    a_rows = [sum(1 << j for j in range(n) if rng.random() < p) for _ in range(m)]
    b_rows = [sum(1 << j for j in range(n) if rng.random() < p) for _ in range(m)]
    if ensure_out_degree:
        for i in range(m):
            if a_rows[i] == 0:
                a_rows[i] |= 1 << rng.randrange(n)
        for j in range(n):
            if not any(b_rows[i] >> j & 1 for i in range(m)):
                b_rows[rng.randrange(m)] |= 1 << j
    return WinLoseGame(m, n, tuple(a_rows), tuple(b_rows))
