"""Bipartite mapping laws and the cycle/undominated-set decision."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from conftest import random_digraph, random_digraph_with_cycle, random_game
from wsforge import (
    CycleWitness,
    Digraph,
    ResidueSet,
    UndominatedWitness,
    WinLoseGame,
    bipartify,
    cayley,
    char_decision,
    girth,
    is_dominated,
    to_bipartite_digraph,
)

TRIANGLE = Digraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


# ---------------------------------------------------------------------------
# WinLoseGame type
# ---------------------------------------------------------------------------


def test_from_matrices_roundtrip():
    g = WinLoseGame.from_matrices([[1, 0], [0, 1]], [[0, 1], [1, 0]])
    assert g.a_matrix() == [[1, 0], [0, 1]]
    assert g.b_matrix() == [[0, 1], [1, 0]]
    assert g.a(0, 0) == 1 and g.b(0, 0) == 0


def test_from_matrices_rejects_bad_entries():
    with pytest.raises(ValueError):
        WinLoseGame.from_matrices([[2]], [[0]])
    with pytest.raises(ValueError):
        WinLoseGame.from_matrices([[1, 0]], [[1]])
    with pytest.raises(ValueError):
        WinLoseGame.from_matrices([[1]], [[1], [0]])


def test_non_square_games_accepted():
    g = WinLoseGame.from_matrices([[1, 0, 1]], [[0, 1, 0]])
    assert (g.m, g.n) == (1, 3)
    h = to_bipartite_digraph(g)
    assert h.n == 4


# ---------------------------------------------------------------------------
# to_bipartite_digraph
# ---------------------------------------------------------------------------


def test_bipartite_digraph_mutual_ones():
    g = WinLoseGame.from_matrices([[1]], [[1]])
    h = to_bipartite_digraph(g)
    assert h.arcs() == [(0, 1), (1, 0)]
    assert girth(h) == 2


def test_bipartite_digraph_single_arc():
    g = WinLoseGame.from_matrices([[1]], [[0]])
    h = to_bipartite_digraph(g)
    assert h.arcs() == [(0, 1)]


def test_bipartite_digraph_of_bipartified_triangle():
    h = to_bipartite_digraph(bipartify(TRIANGLE))
    assert h.n == 6
    assert h.arc_count() == 9  # 3 doubled arcs + 3 diagonal arcs


def test_bipartite_arc_rule():
    rng = random.Random(31)
    for _ in range(30):
        g = random_game(rng, rng.randrange(1, 6), rng.randrange(1, 6), ensure_out_degree=False)
        h = to_bipartite_digraph(g)
        for i in range(g.m):
            for j in range(g.n):
                assert h.has_arc(i, g.m + j) == (g.a(i, j) == 1)
                assert h.has_arc(g.m + j, i) == (g.b(i, j) == 1)


# ---------------------------------------------------------------------------
# bipartify
# ---------------------------------------------------------------------------


def test_bipartify_triangle_matrices():
    g = bipartify(TRIANGLE)
    assert g.a_matrix() == [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert g.b_matrix() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]


def test_bipartify_single_vertex():
    g = bipartify(Digraph(1, (0,)))
    assert g.a_matrix() == [[1]]
    assert g.b_matrix() == [[0]]


def test_bipartify_cayley_degree_counts():
    g = bipartify(cayley(7, ResidueSet.from_members(7, [1, 2, 4])))
    assert all(g.a_rows[i].bit_count() == 4 for i in range(7))
    assert all(g.b_rows[i].bit_count() == 3 for i in range(7))


def test_bipartify_out_degrees():
    rng = random.Random(32)
    for _ in range(30):
        d = random_digraph(rng, rng.randrange(1, 8))
        g = bipartify(d)
        h = to_bipartite_digraph(g)
        for i in range(d.n):
            assert h.out_degree(i) >= 1  # diagonal arc
            assert h.out_degree(d.n + i) == d.out_degree(i)


def test_bipartify_girth_bracket():
    rng = random.Random(33)
    for _ in range(100):
        d = random_digraph_with_cycle(rng, rng.randrange(2, 9))
        g = girth(d)
        gp = girth(to_bipartite_digraph(bipartify(d)))
        assert gp is not None and gp % 2 == 0
        assert g <= gp <= 2 * ((g + 1) // 2)


def test_bipartify_undominated_transfer():
    rng = random.Random(34)
    for _ in range(60):
        n = rng.randrange(2, 8)
        d = random_digraph(rng, n, p=rng.choice([0.25, 0.5]))
        h = to_bipartite_digraph(bipartify(d))
        for l in range(1, min(3, n) + 1):
            for combo in combinations(range(n), l):
                in_d = is_dominated(d, combo) is None
                row_side = is_dominated(h, combo) is None
                col_side = is_dominated(h, [n + x for x in combo]) is None
                # row side is equivalent; column side only transfers back
                assert row_side == in_d
                if col_side:
                    assert in_d


# ---------------------------------------------------------------------------
# char_decision
# ---------------------------------------------------------------------------


def test_char_triangle_k1_negative():
    assert char_decision(bipartify(TRIANGLE), 1) is None


def test_char_triangle_k2_cycle():
    witness = char_decision(bipartify(TRIANGLE), 2)
    assert isinstance(witness, CycleWitness)
    assert len(witness.vertices) == 4
    h = to_bipartite_digraph(bipartify(TRIANGLE))
    verts = witness.vertices
    for t, u in enumerate(verts):
        assert h.has_arc(u, verts[(t + 1) % len(verts)])


def test_char_mutual_ones_k1():
    witness = char_decision(WinLoseGame.from_matrices([[1]], [[1]]), 1)
    assert isinstance(witness, CycleWitness)
    assert len(witness.vertices) == 2


def test_char_undominated_witness():
    # no entry has A[i][j] = B[i][j] = 1 (so no 2-cycle), and row 0 of B is
    # all zero, leaving r0 an undominated singleton
    g = WinLoseGame.from_matrices(
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 0, 0], [1, 0, 1], [0, 1, 0]],
    )
    witness = char_decision(g, 1)
    assert isinstance(witness, UndominatedWitness)
    assert witness.side == "row"
    assert witness.indices == (0,)
    h = to_bipartite_digraph(g)
    assert is_dominated(h, witness.indices) is None


def test_char_rejects_out_degree_violation():
    g = WinLoseGame.from_matrices([[0, 1], [0, 0]], [[1, 0], [1, 0]])
    with pytest.raises(ValueError, match="r1"):
        char_decision(g, 1)
    g2 = WinLoseGame.from_matrices([[1, 1], [1, 0]], [[1, 0], [1, 0]])
    with pytest.raises(ValueError, match="c1"):
        char_decision(g2, 1)


def test_char_prefers_shortest_cycle():
    rng = random.Random(35)
    for _ in range(40):
        g = random_game(rng, rng.randrange(2, 7), rng.randrange(2, 7))
        for k in (1, 2, 3):
            witness = char_decision(g, k)
            if isinstance(witness, CycleWitness):
                h = to_bipartite_digraph(g)
                assert len(witness.vertices) == girth(h)
                assert len(witness.vertices) <= 2 * k


def test_char_large_k_always_finds_structure():
    # with min out-degree >= 1 a cycle always exists, so k >= (m + n) / 2
    # can never return None
    rng = random.Random(36)
    for _ in range(25):
        m = rng.randrange(2, 6)
        g = random_game(rng, m, m)
        assert char_decision(g, m) is not None
