"""Batch command line front end.

Subcommands: grow, dichotomy, verify, family, approx, sample, classify.
All outputs are deterministic given the configuration: cardinalities are
exact integers, bounds are exact rationals rendered as ``p/q``, word
lists are in canonical order, and sampling requires an explicit seed.

Exit codes: 0 success, 1 input error, 2 growth bound violated without a
validated exemption, 3 analysis incomplete, 4 certificate invalid.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .decompose import (
    AnalysisIncomplete,
    DegenerateSetError,
    certificate_from_json,
    certificate_to_json,
    classification_to_json,
    classify_subgroup,
    dichotomy,
    validate_certificate,
)
from .families import (
    FAMILY_CSV_HEADER,
    bs_family,
    f2xz_family,
    prop41_family,
    quotient_check,
    quotient_report_row,
)
from .groups import GroupError, GroupLoadError, WordParseError, load_group_file
from .sets import (
    GROWTH_CSV_HEADER,
    SetFileError,
    growth_report,
    min_translate_cover,
    read_set_file,
    sample_ball,
    write_set_file,
)
from .words import FreeProduct

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BOUND = 2
EXIT_INCOMPLETE = 3
EXIT_INVALID = 4


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_group_and_set(args):
    group = load_group_file(args.group)
    words = read_set_file(group, args.set)
    return group, words


def _parse_range(spec: str) -> list[int]:
    if ".." in spec:
        lo, _, hi = spec.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


def cmd_grow(args) -> int:
    group, words = _load_group_and_set(args)
    report = growth_report(words)
    _emit(args, GROWTH_CSV_HEADER + "\n" + report.csv_row() + "\n")
    if report.verdict == "bound-violated":
        if isinstance(group, FreeProduct):
            print(
                "bound violated without a validated exemption in a free product:"
                " possible soundness bug",
                file=sys.stderr,
            )
        else:
            print(
                f"bound violated; ambient kind {group.kind!r} is not a two-factor"
                " free product, so the growth theorem does not apply",
                file=sys.stderr,
            )
        return EXIT_BOUND
    return EXIT_OK


def cmd_dichotomy(args) -> int:
    group, words = _load_group_and_set(args)
    certificate = dichotomy(words)
    ok, detail = validate_certificate(words, certificate)
    doc = {
        "certificate": certificate_to_json(group, certificate),
        "valid": ok,
        "validation": detail,
    }
    _emit(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_verify(args) -> int:
    group, words = _load_group_and_set(args)
    try:
        doc = json.loads(Path(args.certificate).read_text())
        certificate = certificate_from_json(group, doc["certificate"] if "certificate" in doc else doc)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"unreadable certificate: {exc}", file=sys.stderr)
        return EXIT_INPUT
    ok, detail = validate_certificate(words, certificate)
    _emit(args, json.dumps({"valid": ok, "validation": detail}, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_classify(args) -> int:
    group, words = _load_group_and_set(args)
    cls = classify_subgroup(words)
    _emit(args, json.dumps(classification_to_json(group, cls), sort_keys=True) + "\n")
    return EXIT_OK


def cmd_approx(args) -> int:
    group, words = _load_group_and_set(args)
    result = min_translate_cover(words, exact_limit=args.exact_limit)
    doc = {
        "k": result.k,
        "exactness": "exact" if result.exact else "greedy-upper-bound",
        "witness": result.witness.to_lines(),
    }
    _emit(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    group = load_group_file(args.group)
    words = sample_ball(group, args.radius, args.size, args.seed)
    if args.out:
        write_set_file(args.out, words)
    else:
        sys.stdout.write("".join(line + "\n" for line in words.to_lines()))
    return EXIT_OK


def cmd_family(args) -> int:
    rows = []
    if args.name == "prop41":
        group = load_group_file(args.group)
        x = group.parse(args.x)
        gens = list(group.generators.values())
        for n in _parse_range(args.N):
            _, report = prop41_family(group, gens, x, n)
            rows.append(report)
    elif args.name == "f2xz":
        for n in _parse_range(args.N):
            _, report = f2xz_family(n)
            rows.append(report)
    elif args.name == "bs":
        for d in _parse_range(args.d):
            _, report = bs_family(args.m, args.n, d)
            rows.append(report)
    elif args.name == "sl2z-quotient":
        from .groups import SL2ZGroup

        group = SL2ZGroup()
        words = sample_ball(group, args.radius, args.size, args.seed)
        report = quotient_check(words)
        params = f"radius={args.radius};size={args.size};seed={args.seed}"
        rows.append(quotient_report_row(report, params))
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown family {args.name!r}")
    body = FAMILY_CSV_HEADER + "\n" + "".join(r.csv_row() + "\n" for r in rows)
    _emit(args, body)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freegrowth",
        description="Exact product-set growth arithmetic in free products",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_set=True):
        p.add_argument("--group", required=True, help="group description JSON")
        if needs_set:
            p.add_argument("--set", required=True, help="set file, one word per line")
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("grow", help="exact growth report as CSV")
    common(p)
    p.set_defaults(func=cmd_grow)

    p = sub.add_parser("dichotomy", help="growth/structure certificate as JSON")
    common(p)
    p.set_defaults(func=cmd_dichotomy)

    p = sub.add_parser("verify", help="re-validate a stored certificate")
    common(p)
    p.add_argument("--certificate", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="classify the generated subgroup")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("approx", help="minimum translate cover of the square")
    common(p)
    p.add_argument("--exact-limit", type=int, default=64, dest="exact_limit")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("sample", help="seeded sample from a generator ball")
    common(p, needs_set=False)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("family", help="explicit family sweeps as CSV")
    p.add_argument("--name", required=True, choices=["prop41", "f2xz", "bs", "sl2z-quotient"])
    p.add_argument("--group", help="ambient group for prop41")
    p.add_argument("--x", help="infinite-order element for prop41 (word text)")
    p.add_argument("--N", help="range like 1..50 for prop41/f2xz")
    p.add_argument("--m", type=int, help="BS parameter m")
    p.add_argument("--n", type=int, help="BS parameter n")
    p.add_argument("--d", help="range like 1..50 for bs")
    p.add_argument("--radius", type=int, default=4, help="ball radius for sl2z-quotient")
    p.add_argument("--size", type=int, default=12, help="sample size for sl2z-quotient")
    p.add_argument("--seed", type=int, default=0, help="seed for sl2z-quotient")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_family)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SetFileError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except (GroupLoadError, WordParseError, FileNotFoundError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except DegenerateSetError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except AnalysisIncomplete as exc:
        print(f"analysis incomplete: {exc}", file=sys.stderr)
        print(json.dumps(exc.trace, indent=2), file=sys.stderr)
        return EXIT_INCOMPLETE
    except GroupError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:  # console script
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
