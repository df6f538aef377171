"""Pipeline driver: every stage is a subcommand, from difference-set search
through Cayley construction, digraph powers, bipartite game mapping, WSNE
checking, exhaustive refutation, and certificate re-verification.

Exit status: 0 success, 2 usage or malformed input, 3 not found within
budget, 4 verification failed.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .digraph import KLFailure, cayley, certify_kl, power
from .formats import (
    CertificateError,
    FormatError,
    format_rational,
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
from .game import bipartify, char_decision
from .residues import HaightCertificate, ResidueSet, SearchSpec, search_haight_set
from .wsne import MixedStrategy, NoWitness, check_wsne, exhaustive_search

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_VERIFY_FAILED = 4


# ---------------------------------------------------------------------------
# Argument types
# ---------------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_at_least(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value

    return parse


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _residue_list(text: str) -> list[int]:
    stripped = text.strip()
    if not stripped:
        return []
    try:
        return [int(part) for part in stripped.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _search_replay(args: argparse.Namespace) -> str:
    return (
        f"wsforge search --kappa {args.kappa} --q-min {args.q_min} --q-max {args.q_max}"
        f" --budget {args.budget} --seed {args.seed} --mode {args.mode}"
        f" --workers {args.workers}"
    )


def cmd_search(args: argparse.Namespace) -> int:
    spec = SearchSpec(args.kappa, args.q_min, args.q_max, args.budget, args.seed, args.mode)
    result = search_haight_set(spec, workers=args.workers)
    if isinstance(result, HaightCertificate):
        members = list(result.y.members())
        print(
            f"found q={result.modulus} Y={{{', '.join(map(str, members))}}}"
            f" kappa={result.kappa} (evaluated {result.candidates_evaluated} candidates)"
        )
        if args.out:
            env = make_envelope(
                "haight",
                {
                    "q": result.modulus,
                    "y": members,
                    "kappa": result.kappa,
                    "candidates_evaluated": result.candidates_evaluated,
                },
                _search_replay(args),
            )
            write_certificate(env, args.out)
            print(f"certificate written to {args.out}")
        return EXIT_OK
    print(
        f"not found within budget (evaluated {result.candidates_evaluated} candidates)",
        file=sys.stderr,
    )
    return EXIT_NOT_FOUND


def cmd_cayley(args: argparse.Namespace) -> int:
    if args.cert:
        env = read_certificate(args.cert)
        if env.kind != "haight":
            print(f"error: {args.cert} is a {env.kind} certificate", file=sys.stderr)
            return EXIT_USAGE
        q = env.payload["q"]
        members = env.payload["y"]
    else:
        if args.q is None or args.y is None:
            print("error: need --cert or both --q and --y", file=sys.stderr)
            return EXIT_USAGE
        q = args.q
        members = args.y
    d = cayley(q, ResidueSet.from_members(q, members))
    if args.out:
        write_digraph(d, args.out)
    else:
        write_digraph(d, sys.stdout)
    return EXIT_OK


def cmd_power(args: argparse.Namespace) -> int:
    d = read_digraph(args.infile)
    result = power(d, args.t)
    if args.out:
        write_digraph(result, args.out)
    else:
        write_digraph(result, sys.stdout)
    return EXIT_OK


def cmd_bipartify(args: argparse.Namespace) -> int:
    d = read_digraph(args.infile)
    g = bipartify(d)
    if args.out:
        write_game(g, args.out)
    else:
        write_game(g, sys.stdout)
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    d = read_digraph(args.infile)
    result = certify_kl(d, args.k, args.l)
    if isinstance(result, KLFailure):
        if result.short_cycle is not None:
            print(
                f"FAILED: cycle of length {len(result.short_cycle)} < k={args.k}: "
                + " -> ".join(map(str, result.short_cycle))
            )
        else:
            print(
                f"FAILED: undominated {args.l}-set: "
                + "{" + ", ".join(map(str, result.undominated)) + "}"
            )
        return EXIT_VERIFY_FAILED
    girth_text = "acyclic" if result.girth_found is None else str(result.girth_found)
    print(f"verified ({args.k},{args.l})-digraph: n={d.n} girth={girth_text}")
    if args.out:
        env = make_envelope(
            "kl_digraph",
            {
                "n": d.n,
                "arcs": [[u, v] for u, v in d.arcs()],
                "k": args.k,
                "l": args.l,
                "girth": result.girth_found,
            },
            f"wsforge certify --in {args.infile} --k {args.k} --l {args.l}",
        )
        write_certificate(env, args.out)
        print(f"certificate written to {args.out}")
    return EXIT_OK


def _read_strategies(path: str, m: int, n: int) -> tuple[MixedStrategy, MixedStrategy]:
    env = read_certificate(path)
    if env.kind != "wsne_witness":
        raise FormatError(f"{path} is a {env.kind} certificate, expected wsne_witness")
    p_raw = env.payload["p"]
    q_raw = env.payload["q"]
    if len(p_raw) != m or len(q_raw) != n:
        raise FormatError(
            f"strategy dimensions ({len(p_raw)}, {len(q_raw)}) do not match game ({m}, {n})"
        )
    p = MixedStrategy.from_probs(p_raw)
    q = MixedStrategy.from_probs(q_raw)
    return p, q


def cmd_check(args: argparse.Namespace) -> int:
    g = read_game(args.game)
    p, q = _read_strategies(args.strategy, g.m, g.n)
    verdict = check_wsne(g, p, q, args.eps)
    if verdict.valid:
        print(
            f"valid at eps={format_rational(verdict.epsilon)}"
            f" (row best {format_rational(verdict.row_best)},"
            f" col best {format_rational(verdict.col_best)})"
        )
        return EXIT_OK
    print(f"INVALID at eps={format_rational(verdict.epsilon)}:")
    for v in verdict.violations:
        print(
            f"  {v.player} {v.index} pays {format_rational(v.payoff)},"
            f" short by {format_rational(v.shortfall)}"
        )
    return EXIT_VERIFY_FAILED


def cmd_exhaust(args: argparse.Namespace) -> int:
    g = read_game(args.game)
    eps_text = format_rational(args.eps)
    result = exhaustive_search(g, args.k, args.eps)
    replay = f"wsforge exhaust --game {args.game} --k {args.k} --eps {eps_text}"
    if isinstance(result, NoWitness):
        print(
            f"no eps-WSNE with supports of cardinality <= {args.k} at eps={eps_text}:"
            f" refuted {result.pairs_refuted} support pairs"
        )
        if args.out:
            payload = game_payload(g)
            payload.update({"k": args.k, "eps": eps_text, "pairs_refuted": result.pairs_refuted})
            write_certificate(make_envelope("nonexistence", payload, replay), args.out)
            print(f"certificate written to {args.out}")
        return EXIT_OK
    p, q = result
    print(
        f"witness found at eps={eps_text}:"
        f" row support {list(p.support)}, col support {list(q.support)}"
    )
    if args.out:
        payload = game_payload(g)
        payload.update(
            {
                "p": [format_rational(x) for x in p.probs],
                "q": [format_rational(x) for x in q.probs],
                "eps": eps_text,
            }
        )
        write_certificate(make_envelope("wsne_witness", payload, replay), args.out)
        print(f"certificate written to {args.out}")
    return EXIT_OK


def cmd_reverify(args: argparse.Namespace) -> int:
    env = read_certificate(args.cert)
    result = reverify(env)
    if result.ok:
        print(f"OK [{result.kind}] {result.detail}")
        return EXIT_OK
    print(f"FAILED [{result.kind}] {result.detail}")
    return EXIT_VERIFY_FAILED


def cmd_forge(args: argparse.Namespace) -> int:
    k = args.k
    eps = args.eps
    if not 0 <= eps < 1:
        print("error: --eps must satisfy 0 <= eps < 1", file=sys.stderr)
        return EXIT_USAGE
    eps_text = format_rational(eps)
    replay = (
        f"wsforge forge --k {k} --eps {eps_text} --budget {args.budget} --seed {args.seed}"
        f" --q-min {args.q_min} --q-max {args.q_max} --mode {args.mode}"
        f" --workers {args.workers}"
    )

    if k == 1:
        # Girth-3 triangle with every singleton dominated; no search needed.
        base = cayley(3, ResidueSet.from_members(3, [2]))
        base_kl = (3, 1)
        print("[search] k=1 uses the built-in directed triangle")
    else:
        kappa = 2 * k * (k - 1) + 1
        print(f"[search] hunting a kappa={kappa} set in q range [{args.q_min}, {args.q_max}]")
        spec = SearchSpec(kappa, args.q_min, args.q_max, args.budget, args.seed, args.mode)
        found = search_haight_set(spec, workers=args.workers)
        if not isinstance(found, HaightCertificate):
            print(
                f"[search] budget exhausted after {found.candidates_evaluated} candidates;"
                " no certificate emitted",
                file=sys.stderr,
            )
            return EXIT_NOT_FOUND
        print(
            f"[search] found q={found.modulus}"
            f" Y={{{', '.join(map(str, found.y.members()))}}}"
            f" ({found.candidates_evaluated} candidates)"
        )
        base = cayley(found.modulus, found.y)
        base_kl = (kappa, 2)

    base_cert = certify_kl(base, *base_kl)
    if isinstance(base_cert, KLFailure):
        print(f"[certify] base digraph failed: {base_cert}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print(f"[certify] base is a ({base_kl[0]},{base_kl[1]})-digraph on {base.n} vertices")

    exponent = k - 1
    target = power(base, exponent) if exponent >= 1 else base
    target_cert = certify_kl(target, 2 * k + 1, k)
    if isinstance(target_cert, KLFailure):
        print(f"[certify] power digraph failed: {target_cert}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print(f"[certify] power is a ({2 * k + 1},{k})-digraph")

    g = bipartify(target)
    print(f"[bipartify] game is {g.m} x {g.n}")
    witness = char_decision(g, k)
    if witness is not None:
        print(f"[char] unexpected structure found: {witness}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print(f"[char] no cycle of length <= {2 * k} and no one-sided undominated {k}-set")

    result = exhaustive_search(g, k, eps)
    if not isinstance(result, NoWitness):
        p, q = result
        print(
            f"[exhaust] unexpected witness: row support {list(p.support)},"
            f" col support {list(q.support)}",
            file=sys.stderr,
        )
        return EXIT_VERIFY_FAILED
    print(f"[exhaust] refuted all {result.pairs_refuted} support pairs at eps={eps_text}")

    write_game(g, args.out_game)
    payload = game_payload(g)
    payload.update(
        {
            "k": k,
            "eps": eps_text,
            "pairs_refuted": result.pairs_refuted,
            "char_none": True,
        }
    )
    write_certificate(make_envelope("nonexistence", payload, replay), args.out_cert)
    print(f"game written to {args.out_game}")
    print(f"certificate written to {args.out_cert}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsforge",
        description="Forge win-lose games with no small-support well-supported "
        "equilibria, and verify every claim exactly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="search Z_q for a complete-difference, zero-sum-free set")
    p.add_argument("--kappa", type=_int_at_least(2), required=True)
    p.add_argument("--q-min", type=_int_at_least(1), default=2)
    p.add_argument("--q-max", type=_int_at_least(1), required=True)
    p.add_argument("--budget", type=_int_at_least(1), default=1_000_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--mode", choices=("exhaustive", "randomized"), default="exhaustive")
    p.add_argument("--workers", type=_int_at_least(1), default=1)
    p.add_argument("--out", help="write a haight certificate here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("cayley", help="build the Cayley digraph of a residue set")
    p.add_argument("--q", type=_int_at_least(1))
    p.add_argument("--y", type=_residue_list, help="comma-separated residues, e.g. 1,2,4")
    p.add_argument("--cert", help="haight certificate file to take (q, Y) from")
    p.add_argument("--out", help="digraph file (stdout if omitted)")
    p.set_defaults(func=cmd_cayley)

    p = sub.add_parser("power", help="bounded-walk power of a digraph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--t", type=_int_at_least(1), required=True)
    p.add_argument("--out", help="digraph file (stdout if omitted)")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("bipartify", help="map a digraph to a square win-lose game")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", help="game file (stdout if omitted)")
    p.set_defaults(func=cmd_bipartify)

    p = sub.add_parser("certify", help="certify girth and domination of a digraph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=_int_at_least(1), required=True)
    p.add_argument("--l", type=_int_at_least(1), required=True)
    p.add_argument("--out", help="write a kl_digraph certificate here")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("check", help="check strategies against a game at some eps")
    p.add_argument("--game", required=True)
    p.add_argument("--strategy", required=True, help="wsne_witness certificate with p and q")
    p.add_argument("--eps", type=_rational, required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("exhaust", help="enumerate all support pairs up to cardinality k")
    p.add_argument("--game", required=True)
    p.add_argument("--k", type=_int_at_least(1), required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--out", help="write a witness or nonexistence certificate here")
    p.set_defaults(func=cmd_exhaust)

    p = sub.add_parser("reverify", help="re-run the defining checks of any certificate")
    p.add_argument("--cert", required=True)
    p.set_defaults(func=cmd_reverify)

    p = sub.add_parser("forge", help="end-to-end: game with no eps-WSNE of support <= k")
    p.add_argument("--k", type=_int_at_least(1), required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--budget", type=_int_at_least(1), default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--q-min", type=_int_at_least(1), default=2)
    p.add_argument("--q-max", type=_int_at_least(1), default=64)
    p.add_argument("--mode", choices=("exhaustive", "randomized"), default="randomized")
    p.add_argument("--workers", type=_int_at_least(1), default=1)
    p.add_argument("--out-game", default=None)
    p.add_argument("--out-cert", default=None)
    p.set_defaults(func=cmd_forge)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "command", None) == "forge":
        if args.out_game is None:
            args.out_game = f"forge-k{args.k}.wl"
        if args.out_cert is None:
            args.out_cert = f"forge-k{args.k}.cert.json"
    try:
        return args.func(args)
    except (FormatError, CertificateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())
