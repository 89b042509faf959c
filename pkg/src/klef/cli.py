"""Command-line front end: exact tables and reports as JSON or text.

Every command prints a single JSON document (or a plain-text rendering)
whose header echoes the parsed configuration, so identical invocations
produce byte-identical output. All numbers are exact integers.

Exit codes: 0 success, 2 usage, 3 failed precondition, 4 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import IntegrityError, KlefError, PreconditionError
from .exactpoly import QQ, CoefficientRing
from .exactpoly import prime_field
from .hecke import bott_samelson_element, bound_stats, kl_element, u_bound
from .lefschetz import (
    character,
    check_hard_lefschetz,
    compare_fields,
    bad_primes,
    datum_indecomposable,
    decompose,
    lefschetz_datum,
    verify_kl,
)
from .rootsys import RootSystem, build_root_system
from .weyl import (
    canonical_word,
    evaluate_word,
    length,
    lower_interval,
    moment_graph,
    n_value,
    n_value_elem,
    gkm_bad_primes,
    sort_key,
    validate_word,
)

COMMANDS = (
    "roots",
    "kl",
    "datum",
    "char",
    "verify",
    "decompose",
    "bound",
    "badprimes",
    "gkm",
    "compare",
)


def _parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"word {text!r} is not comma-separated integers")


def _resolve_field(selector: str) -> CoefficientRing:
    if selector.lower() == "q":
        return QQ
    try:
        p = int(selector)
    except ValueError:
        raise PreconditionError(f"field selector {selector!r} is neither q nor an integer")
    return prime_field(p)


def _word_str(word) -> str:
    return ",".join(str(letter) for letter in word) if word else "e"


def _laurent_table(poly) -> list[list[int]]:
    return [[power, coeff] for power, coeff in poly.items_sorted()]


def _hecke_table(rs: RootSystem, element) -> list[dict]:
    support = sorted(element.support(), key=lambda x: sort_key(rs, x))
    return [
        {
            "element": list(canonical_word(rs, x)),
            "coefficient": _laurent_table(element.coefficient(x)),
        }
        for x in support
    ]


def _datum_json(datum) -> list[list[int]]:
    return [[s.a, s.b] for s in datum]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klef",
        description="Exact Lefschetz data and Kazhdan-Lusztig characters "
        "for affine Weyl groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    needs_word = set(COMMANDS) - {"roots"}
    needs_field = {"datum", "char", "verify", "decompose", "compare"}
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--type", default="A", help="root system type letter")
        cmd.add_argument("--rank", type=int, default=1, help="root system rank")
        cmd.add_argument(
            "--word",
            type=_parse_word,
            required=name in needs_word,
            default=None,
            help="comma-separated letters, 0 is the affine one",
        )
        cmd.add_argument(
            "--field",
            required=name in needs_field,
            default=None,
            help="q for rationals or an odd prime",
        )
        cmd.add_argument(
            "--at",
            type=_parse_word,
            required=name == "datum",
            default=None,
            help="vertex given by a word",
        )
        cmd.add_argument(
            "--max",
            type=int,
            required=name == "badprimes",
            default=None,
            help="prime scan ceiling",
        )
        cmd.add_argument("--budget", type=int, default=None, help="reduced-word enumeration cap")
        cmd.add_argument("--format", choices=("json", "text"), default="json")
        cmd.add_argument("--out", default=None, help="write output to this path")
        if name == "kl":
            cmd.add_argument("--product", action="store_true", help="expand the full generator product instead")
    return parser


def _config_json(args) -> dict:
    return {
        "type": args.type,
        "rank": args.rank,
        "word": list(args.word) if args.word is not None else None,
        "field": args.field,
        "at": list(args.at) if args.at is not None else None,
        "max": args.max,
        "budget": args.budget,
        "format": args.format,
        "out": args.out,
    }


def _cmd_roots(rs: RootSystem, args) -> tuple[dict, list[str]]:
    positive = sorted(rs.positive_roots)
    result = {
        "type": rs.type_letter,
        "rank": rs.rank,
        "cartan": [list(row) for row in rs.cartan],
        "cartan_det": rs.cartan_det,
        "highest_root": list(rs.highest_root),
        "positive_roots": [list(root) for root in positive],
    }
    lines = [
        f"type {rs.type_letter} rank {rs.rank}",
        f"cartan det {rs.cartan_det}",
        "highest root " + " ".join(str(c) for c in rs.highest_root),
        f"positive roots {len(positive)}",
    ]
    return result, lines


def _cmd_kl(rs: RootSystem, args) -> tuple[dict, list[str]]:
    word = args.word
    if args.product:
        element = bott_samelson_element(rs, word)
        label = "product"
    else:
        element = kl_element(rs, evaluate_word(rs, word))
        label = "kl"
    table = _hecke_table(rs, element)
    lines = [f"{label} table for word {_word_str(word)}"]
    lines += [
        f"  {_word_str(row['element'])}: {element.coefficient(evaluate_word(rs, row['element'])).render()}"
        for row in table
    ]
    return {"kind": label, "word": list(word), "terms": table}, lines


def _cmd_char(rs: RootSystem, args) -> tuple[dict, list[str]]:
    word = args.word
    ring = _resolve_field(args.field)
    w = evaluate_word(rs, word)
    element = character(rs, w, ring, word=word)
    table = _hecke_table(rs, element)
    lines = [f"character of {_word_str(canonical_word(rs, w))} over {ring.name}"]
    lines += [
        f"  {_word_str(row['element'])}: {element.coefficient(evaluate_word(rs, row['element'])).render()}"
        for row in table
    ]
    result = {
        "element": list(canonical_word(rs, w)),
        "field": ring.name,
        "terms": table,
    }
    return result, lines


def _cmd_datum(rs: RootSystem, args) -> tuple[dict, list[str]]:
    word = args.word
    ring = _resolve_field(args.field)
    x = evaluate_word(rs, args.at)
    datum = lefschetz_datum(rs, word, x, ring)
    centered = check_hard_lefschetz(datum, len(word))
    result = {
        "word": list(word),
        "vertex": list(canonical_word(rs, x)),
        "field": ring.name,
        "datum": _datum_json(datum),
        "hard_lefschetz": centered,
    }
    lines = [
        f"datum of word {_word_str(word)} at {_word_str(canonical_word(rs, x))} over {ring.name}",
        "  " + (" ".join(f"({s.a},{s.b})" for s in datum) or "empty"),
        f"  hard lefschetz at center {len(word)}: {str(centered).lower()}",
    ]
    return result, lines


def _cmd_verify(rs: RootSystem, args) -> tuple[dict, list[str]]:
    word = args.word
    ring = _resolve_field(args.field)
    w = evaluate_word(rs, word)
    matches = verify_kl(rs, w, ring)
    lefschetz_ok = True
    center = length(rs, w)
    for x in lower_interval(rs, w):
        datum = datum_indecomposable(rs, w, x, ring)
        if not check_hard_lefschetz(datum, center):
            lefschetz_ok = False
            break
    verified = matches and lefschetz_ok
    result = {
        "element": list(canonical_word(rs, w)),
        "field": ring.name,
        "character_matches": matches,
        "hard_lefschetz": lefschetz_ok,
        "verified": verified,
    }
    lines = [
        f"verify {_word_str(canonical_word(rs, w))} over {ring.name}",
        f"  character matches: {str(matches).lower()}",
        f"  hard lefschetz at center {center}: {str(lefschetz_ok).lower()}",
        f"  verified: {str(verified).lower()}",
    ]
    return result, lines


def _cmd_decompose(rs: RootSystem, args) -> tuple[dict, list[str]]:
    word = args.word
    ring = _resolve_field(args.field)
    summands = decompose(rs, word, ring)
    result = {
        "word": list(word),
        "field": ring.name,
        "summands": [
            {"element": list(canonical_word(rs, x)), "shift": m} for x, m in summands
        ],
    }
    lines = [f"decomposition of word {_word_str(word)} over {ring.name}"]
    lines += [
        f"  {_word_str(canonical_word(rs, x))} shift {m}" for x, m in summands
    ]
    return result, lines


def _cmd_bound(rs: RootSystem, args) -> tuple[dict, list[str]]:
    word = args.word
    stats = bound_stats(rs, word)
    result = {
        "word": list(word),
        "l": stats.l,
        "r": stats.r,
        "d": stats.d,
        "n": stats.n,
        "u": stats.u,
    }
    lines = [
        f"bound for word {_word_str(word)}",
        f"  l={stats.l} r={stats.r} d={stats.d} n={stats.n}",
        f"  u={stats.u}",
    ]
    if args.budget is not None:
        best, truncated = u_bound(rs, evaluate_word(rs, word), args.budget)
        result["u_min"] = best
        result["truncated"] = truncated
        lines.append(f"  min over reduced words: {best} (truncated: {str(truncated).lower()})")
    return result, lines


def _cmd_badprimes(rs: RootSystem, args) -> tuple[dict, list[str]]:
    word = args.word
    found = bad_primes(rs, word, args.max)
    stats = bound_stats(rs, word)
    result = {
        "word": list(word),
        "max": args.max,
        "bad_primes": list(found),
        "u": stats.u,
    }
    lines = [
        f"bad primes for word {_word_str(word)} up to {args.max}",
        "  " + (" ".join(str(p) for p in found) or "none"),
    ]
    return result, lines


def _cmd_gkm(rs: RootSystem, args) -> tuple[dict, list[str]]:
    word = args.word
    w = evaluate_word(rs, word)
    graph = moment_graph(rs, w)
    primes = gkm_bad_primes(rs, graph)
    n = n_value_elem(rs, w)
    result = {
        "element": list(canonical_word(rs, w)),
        "n": n,
        "vertices": len(graph.vertices),
        "edges": len(graph.edges),
        "bad_primes": list(primes),
    }
    lines = [
        f"gkm scan below {_word_str(canonical_word(rs, w))}",
        f"  vertices {len(graph.vertices)} edges {len(graph.edges)} n {n}",
        "  bad primes " + (" ".join(str(p) for p in primes) or "none"),
    ]
    return result, lines


def _cmd_compare(rs: RootSystem, args) -> tuple[dict, list[str]]:
    word = args.word
    ring = _resolve_field(args.field)
    if ring is QQ:
        raise PreconditionError("compare needs a prime field selector")
    report = compare_fields(rs, word, ring.p)
    result = {
        "word": list(word),
        "prime": report.prime,
        "equal": report.equal,
        "differences": [
            {
                "vertex": list(vertex),
                "rational": _datum_json(rational),
                "modular": _datum_json(modular),
            }
            for vertex, rational, modular in report.differences
        ],
    }
    lines = [
        f"compare word {_word_str(word)} rationals vs F{report.prime}",
        f"  equal: {str(report.equal).lower()}",
    ]
    for vertex, rational, modular in report.differences:
        lines.append(
            f"  at {_word_str(vertex)}: "
            + " ".join(f"({s.a},{s.b})" for s in rational)
            + " vs "
            + " ".join(f"({s.a},{s.b})" for s in modular)
        )
    return result, lines


_HANDLERS = {
    "roots": _cmd_roots,
    "kl": _cmd_kl,
    "datum": _cmd_datum,
    "char": _cmd_char,
    "verify": _cmd_verify,
    "decompose": _cmd_decompose,
    "bound": _cmd_bound,
    "badprimes": _cmd_badprimes,
    "gkm": _cmd_gkm,
    "compare": _cmd_compare,
}


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        rs = build_root_system(args.type, args.rank)
        if args.word is not None:
            validate_word(rs, args.word)
        if args.at is not None:
            validate_word(rs, args.at)
        result, lines = _HANDLERS[args.command](rs, args)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 3
    except IntegrityError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 4
    except KlefError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 4
    payload = {
        "command": args.command,
        "config": _config_json(args),
        "result": result,
    }
    _emit(args, payload, lines)
    if args.command == "verify" and not result["verified"]:
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
