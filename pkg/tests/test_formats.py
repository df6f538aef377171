"""Round-trips, strictness, byte stability, and re-verification of the
three file formats."""

from __future__ import annotations

import io
import random
from fractions import Fraction

import pytest

from conftest import random_digraph, random_game
from wsforge import Digraph, ResidueSet, bipartify, cayley
from wsforge.formats import (
    CertificateEnvelope,
    CertificateError,
    FormatError,
    game_payload,
    make_envelope,
    parse_rational,
    read_certificate,
    read_digraph,
    read_game,
    reverify,
    write_certificate,
    write_digraph,
    write_game,
)

TRIANGLE = Digraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
PALEY7 = cayley(7, ResidueSet.from_members(7, [1, 2, 4]))


def roundtrip_digraph(d):
    buf = io.StringIO()
    write_digraph(d, buf)
    return read_digraph(io.StringIO(buf.getvalue()))


def roundtrip_game(g):
    buf = io.StringIO()
    write_game(g, buf)
    return read_game(io.StringIO(buf.getvalue()))


def roundtrip_cert(env):
    buf = io.StringIO()
    write_certificate(env, buf)
    return read_certificate(io.StringIO(buf.getvalue()))


# ---------------------------------------------------------------------------
# rationals
# ---------------------------------------------------------------------------


def test_rational_parsing():
    assert parse_rational("1/2") == Fraction(1, 2)
    assert parse_rational("0") == Fraction(0)
    assert parse_rational("-3/4") == Fraction(-3, 4)
    for bad in ("0.5", "1e-3", "", "a/b", "1/0"):
        with pytest.raises(FormatError):
            parse_rational(bad)


# ---------------------------------------------------------------------------
# digraph format
# ---------------------------------------------------------------------------


def test_digraph_parse_triangle():
    assert read_digraph(io.StringIO("3 3\n0 1\n1 2\n2 0")) == TRIANGLE


def test_digraph_parse_isolated_vertex():
    d = read_digraph(io.StringIO("1 0"))
    assert d.n == 1 and d.arc_count() == 0


def test_digraph_roundtrip_paley():
    assert roundtrip_digraph(PALEY7) == PALEY7


def test_digraph_comments_and_blanks_ignored():
    text = "# girth three\n3 3\n\n0 1\n# middle\n1 2\n2 0\n"
    assert read_digraph(io.StringIO(text)) == TRIANGLE


def test_digraph_write_is_sorted_and_stable():
    buf = io.StringIO()
    write_digraph(TRIANGLE, buf)
    assert buf.getvalue() == "3 3\n0 1\n1 2\n2 0\n"


def test_digraph_malformed_rejected():
    for text in (
        "",
        "3\n",
        "3 1\n0 1 2\n",
        "3 1\nx y\n",
        "3 2\n0 1\n",
        "3 1\n0 3\n",
        "3 2\n0 1\n0 1\n",
        "2 1\n0 1\nextra line\n",
    ):
        with pytest.raises(FormatError):
            read_digraph(io.StringIO(text))


def test_digraph_roundtrip_random():
    rng = random.Random(71)
    for _ in range(40):
        d = random_digraph(rng, rng.randrange(1, 10), p=rng.choice([0.1, 0.4, 0.8]))
        assert roundtrip_digraph(d) == d


# ---------------------------------------------------------------------------
# game format
# ---------------------------------------------------------------------------


def test_game_parse_1x1():
    g = read_game(io.StringIO("1 1\n1\n\n1"))
    assert g.a_matrix() == [[1]] and g.b_matrix() == [[1]]


def test_game_parse_2x2():
    g = read_game(io.StringIO("2 2\n10\n01\n\n01\n10"))
    assert g.a_matrix() == [[1, 0], [0, 1]]
    assert g.b_matrix() == [[0, 1], [1, 0]]


def test_game_roundtrip_bipartified_triangle():
    g = bipartify(TRIANGLE)
    assert roundtrip_game(g) == g


def test_game_malformed_rejected():
    for text in (
        "",
        "1 1\n1\n1",  # missing blank separator
        "1 1\n10\n\n1",  # wrong row length
        "1 1\n2\n\n1",  # illegal character
        "2 2\n10\n01\n\n01\n",  # missing B row
    ):
        with pytest.raises(FormatError):
            read_game(io.StringIO(text))


def test_game_roundtrip_random():
    rng = random.Random(72)
    for _ in range(40):
        g = random_game(
            rng, rng.randrange(1, 8), rng.randrange(1, 8), ensure_out_degree=False
        )
        assert roundtrip_game(g) == g


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def test_haight_certificate_roundtrip_and_reverify():
    env = make_envelope(
        "haight",
        {"q": 7, "y": [1, 2, 4], "kappa": 3},
        "wsforge search --kappa 3 --q-max 7",
    )
    again = roundtrip_cert(env)
    assert again == env
    assert reverify(again).ok


def test_wsne_witness_roundtrip_and_reverify():
    payload = game_payload(bipartify(TRIANGLE))
    payload.update({"p": ["1/2", "0", "1/2"], "q": ["0", "1/2", "1/2"], "eps": "1/2"})
    env = make_envelope("wsne_witness", payload, "wsforge exhaust --k 2 --eps 1/2")
    again = roundtrip_cert(env)
    assert again == env
    assert reverify(again).ok


def test_kl_certificate_reverify():
    env = make_envelope(
        "kl_digraph",
        {
            "n": 7,
            "arcs": [[u, v] for u, v in PALEY7.arcs()],
            "k": 3,
            "l": 2,
            "girth": 3,
        },
        "wsforge certify --in paley7.dg --k 3 --l 2",
    )
    assert reverify(roundtrip_cert(env)).ok


def test_nonexistence_reverify():
    payload = game_payload(bipartify(TRIANGLE))
    payload.update({"k": 1, "eps": "99/100", "pairs_refuted": 9, "char_none": True})
    env = make_envelope("nonexistence", payload, "wsforge forge --k 1 --eps 99/100")
    assert reverify(roundtrip_cert(env)).ok


def test_tampered_certificates_fail_reverify():
    good = make_envelope(
        "haight", {"q": 7, "y": [1, 2, 4], "kappa": 3}, "wsforge search"
    )
    bad = CertificateEnvelope(
        "haight", {"q": 7, "y": [1, 2, 5], "kappa": 3}, good.toolchain, good.replay
    )
    assert not reverify(bad).ok

    payload = game_payload(bipartify(TRIANGLE))
    payload.update({"k": 1, "eps": "99/100", "pairs_refuted": 8, "char_none": True})
    env = CertificateEnvelope("nonexistence", payload, good.toolchain, good.replay)
    result = reverify(env)
    assert not result.ok and "8" in result.detail

    payload = game_payload(bipartify(TRIANGLE))
    payload.update({"p": ["1", "0", "0"], "q": ["1", "0", "0"], "eps": "1/4"})
    env = CertificateEnvelope("wsne_witness", payload, good.toolchain, good.replay)
    assert not reverify(env).ok


def test_schema_violations_name_the_field():
    with pytest.raises(CertificateError, match="payload"):
        make_envelope("haight", {}, "x")
    with pytest.raises(CertificateError, match="payload.kappa"):
        make_envelope("haight", {"q": 7, "y": [1]}, "x")
    with pytest.raises(CertificateError, match=r"payload.y\[0\]"):
        make_envelope("haight", {"q": 7, "y": [9], "kappa": 2}, "x")
    with pytest.raises(CertificateError, match="payload.y"):
        make_envelope("haight", {"q": 7, "y": [2, 1], "kappa": 2}, "x")
    with pytest.raises(CertificateError, match="kind"):
        make_envelope("mystery", {"q": 7}, "x")
    with pytest.raises(CertificateError, match="payload.eps"):
        make_envelope(
            "wsne_witness",
            {
                "m": 1,
                "n": 1,
                "a": ["1"],
                "b": ["1"],
                "p": ["1"],
                "q": ["1"],
                "eps": "0.5",
            },
            "x",
        )


def test_certificate_rejects_wrong_schema_tag():
    env = make_envelope("haight", {"q": 7, "y": [1, 2, 4], "kappa": 3}, "x")
    buf = io.StringIO()
    write_certificate(env, buf)
    with pytest.raises(CertificateError, match="schema"):
        read_certificate(io.StringIO(buf.getvalue().replace("wsforge-cert/1", "other/9")))


def test_certificate_write_is_deterministic():
    env = make_envelope("haight", {"q": 7, "y": [1, 2, 4], "kappa": 3}, "x")
    a, b = io.StringIO(), io.StringIO()
    write_certificate(env, a)
    write_certificate(env, b)
    assert a.getvalue() == b.getvalue()
    assert a.getvalue().endswith("\n")
