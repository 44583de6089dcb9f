"""Command-line front end.

Exit codes: 0 confirmed, 1 negative verdict, 2 error, 64 usage, 65 size.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

from . import construct as C
from .cache import TraceCache, default_cache_dir
from .errors import CsrgError, TooLarge
from .gauss import build_trace_counts, gauss_sum_exact
from .gf import VERIFY_CAP, build_field
from .relgauss import relative_gauss
from .verify import char_profile, spec_table, verify_paley_pds, verify_skew_hadamard, verify_srg

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2
EXIT_USAGE = 64
EXIT_SIZE = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _prime_powers(text: str) -> list[tuple[int, int]]:
    """'3^2,5' -> [(3, 2), (5, 1)]"""
    out = []
    for part in text.split(","):
        base, _, exp = part.strip().partition("^")
        try:
            out.append((int(base), int(exp) if exp else 1))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad prime power {part!r}") from None
    return out


# ---------------------------------------------------------------------------
# shared options


def _add_spec_source(sp):
    g = sp.add_argument_group("connection set")
    g.add_argument("--p", type=int)
    g.add_argument("--f", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--classes", type=_int_list, help="class indices I, e.g. 0,5,10")
    g.add_argument("--spec", metavar="FILE", help="ConnectionSpec JSON file, or - for stdin")


def _add_run_options(sp, fmt_choices=("json", "text")):
    sp.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])
    sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--max-q", type=int, default=None, help=f"enumeration cap (default {VERIFY_CAP})")
    sp.add_argument("--unsafe-large", action="store_true", help="allow a cap above 2^24")
    sp.add_argument("--cache-dir", default=None, help="default $CSRG_CACHE_DIR or ~/.cache/csrg")
    sp.add_argument("--no-cache", action="store_true")


def _max_q(args) -> int | None:
    if args.max_q is None:
        return None
    if args.max_q < 1:
        raise UsageError("--max-q must be positive")
    if args.max_q > VERIFY_CAP and not args.unsafe_large:
        raise UsageError(f"--max-q above {VERIFY_CAP} needs --unsafe-large")
    return args.max_q


def _cache(args) -> TraceCache | None:
    if args.no_cache:
        return None
    return TraceCache(args.cache_dir or default_cache_dir())


def _load_spec(args) -> C.ConnectionSpec:
    flags = [args.p, args.f, args.k, args.classes]
    if args.spec is not None:
        if any(x is not None for x in flags):
            raise UsageError("give either --spec or --p/--f/--k/--classes, not both")
        text = sys.stdin.read() if args.spec == "-" else open(args.spec, encoding="utf-8").read()
        try:
            return C.ConnectionSpec.from_json(json.loads(text))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CsrgError(f"bad spec JSON: {exc}") from None
    if any(x is None for x in flags):
        raise UsageError("need --p, --f, --k and --classes (or --spec)")
    return C.make_spec(args.p, args.f, args.k, args.classes, "cli", {})


def _table(spec, args):
    max_q = _max_q(args)
    if max_q is None and spec.exceeds(VERIFY_CAP) and "cap" not in spec.meta:
        raise TooLarge(f"q = {spec.p}^{spec.f} exceeds {VERIFY_CAP}; raise --max-q with --unsafe-large")
    return spec_table(spec, max_q, threads=args.threads, cache=_cache(args))


def _emit(obj, fmt: str, text: str):
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands

_VERIFIERS = {
    "verify-srg": verify_srg,
    "verify-dds": verify_skew_hadamard,
    "verify-pds": verify_paley_pds,
}


def cmd_verify(args) -> int:
    spec = _load_spec(args)
    table = _table(spec, args)
    fn = _VERIFIERS[args.command]
    verdict = fn(spec, table, cross_check=args.cross_check, brute=False if args.no_brute else None)
    obj = verdict.to_json(timing=args.timing)
    obj["spec"] = spec.to_json()
    if verdict.params is not None:
        P = verdict.params
        text = f"{verdict.kind}: ({P.v}, {P.degree}, {P.lam}, {P.mu}) via {verdict.method}"
    else:
        text = f"{verdict.kind} via {verdict.method}"
    if verdict.reason:
        text += f" ({verdict.reason})"
    if args.timing and verdict.elapsed_ms is not None:
        text += f" [{verdict.elapsed_ms:.1f} ms]"
    _emit(obj, args.format, text)
    return EXIT_OK if verdict.confirmed else EXIT_NEGATIVE


def _construct(args) -> C.ConnectionSpec:
    fam = args.family
    if fam == "table1":
        return C.build_table1(args.no)
    if fam == "thm13":
        return C.build_thm13(args.variant, args.p, args.p1, args.m, args.p2, args.n)
    if fam == "thm14":
        return C.build_thm14(args.variant, args.p, args.p1, args.m, args.s, args.H)
    if fam == "srg-family":
        return C.build_srg_family(args.p, args.primes, args.e)
    if fam == "shd":
        return C.build_shd_family(args.p, args.p1, args.e1, args.e, args.H)
    raise UsageError(f"unknown family {fam}")


def cmd_construct(args) -> int:
    spec = _construct(args)
    if args.lift:
        spec = C.lift_repeatedly(spec, args.lift, args.lift_prime)
    print(spec.dumps())
    return EXIT_OK


def cmd_gauss(args) -> int:
    field = build_field(args.p, args.f)
    max_q = _max_q(args) or VERIFY_CAP
    cache = _cache(args)
    if cache is not None:
        table = cache.get_or_build(args.p, args.f, args.k, threads=args.threads, max_q=max_q)
    else:
        table = build_trace_counts(field, args.k, threads=args.threads, max_q=max_q)
    G = gauss_sum_exact(table, args.u).value
    text = G.to_text()
    obj = {"p": args.p, "f": args.f, "k": args.k, "u": args.u, "value": G.to_json(), "text": text}
    _emit(obj, args.format, text)
    return EXIT_OK


def cmd_relgauss(args) -> int:
    max_q = _max_q(args) or VERIFY_CAP
    r = relative_gauss(args.p, args.k, args.p1, args.u, max_q=max_q)
    theta = r.theta.to_text()
    pred = "none" if r.predicted_epsilon is None else f"{r.predicted_epsilon:+d}"
    match = {True: "match", False: "mismatch", None: "no prediction"}[r.matches_prediction]
    text = f"theta={theta}, predicted={pred}, {match}"
    obj = {
        "p": r.p,
        "k": r.k,
        "k_prime": r.k_prime,
        "f": r.f,
        "f_prime": r.f_prime,
        "u": r.u,
        "theta": theta,
        "classification": str(r.classification),
        "predicted": r.predicted_epsilon,
        "match": r.matches_prediction,
    }
    _emit(obj, args.format, text)
    if r.matches_prediction is False:
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_profile(args) -> int:
    spec = _load_spec(args)
    prof = char_profile(None, spec, _table(spec, args))
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["a", "value"])
        for a, v in enumerate(prof.values):
            w.writerow([a, v.to_text()])
    else:
        _emit({"values": [v.to_text() for v in prof.values], "size": prof.size, "q": prof.q}, "json", "")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    if args.level is None:
        args.parser.print_usage(sys.stderr)
        print("selftest: choose a level, quick or full", file=sys.stderr)
        return EXIT_USAGE
    results = run_selftest(args.level)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_OK if not failed else EXIT_NEGATIVE


def cmd_cache(args) -> int:
    cache = TraceCache(args.cache_dir or default_cache_dir())
    if args.action == "list":
        for e in cache.entries():
            print(f"{e.p}\t{e.f}\t{e.k}\t{e.size}\t{e.path}")
    elif args.action == "clear":
        print(f"removed {cache.clear()} tables from {cache.dir}")
    else:
        print(cache.dir)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="csrg", description="Cyclotomic strongly regular graphs and Gauss sums.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    for name, what in (
        ("verify-srg", "strong regularity"),
        ("verify-dds", "skew Hadamard difference set"),
        ("verify-pds", "Paley type partial difference set"),
    ):
        sp = sub.add_parser(name, help=f"decide {what}")
        _add_spec_source(sp)
        _add_run_options(sp)
        sp.add_argument("--cross-check", action="store_true", help="also evaluate through Gauss sums")
        sp.add_argument("--no-brute", action="store_true", help="skip the brute-force check on small fields")
        sp.add_argument("--timing", action="store_true", help="report elapsed time")
        sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("construct", help="emit a ConnectionSpec as JSON")
    sp.add_argument("family", choices=["table1", "thm13", "thm14", "srg-family", "shd"])
    sp.add_argument("--no", type=int, help="row of the sporadic table (1-11)")
    sp.add_argument("--variant", choices=["i", "ii", "iii"])
    sp.add_argument("--p", type=int)
    sp.add_argument("--p1", type=int)
    sp.add_argument("--p2", type=int)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--e", type=int)
    sp.add_argument("--e1", type=int, default=1)
    sp.add_argument("--H", type=_int_list)
    sp.add_argument("--primes", type=_prime_powers, help="e.g. 3^2,5")
    sp.add_argument("--lift", type=int, default=0, help="apply the index-set lift this many times")
    sp.add_argument("--lift-prime", type=int, help="prime to lift along (default: the odd prime of k)")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("gauss", help="exact Gauss sum G(chi^u), chi of order k")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--f", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--u", type=int, default=1)
    _add_run_options(sp, ("text", "json"))
    sp.set_defaults(func=cmd_gauss)

    sp = sub.add_parser("relgauss", help="relative Gauss sum and its predicted sign")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--p1", type=int, required=True)
    sp.add_argument("--u", type=int, default=1)
    _add_run_options(sp, ("text", "json"))
    sp.set_defaults(func=cmd_relgauss)

    sp = sub.add_parser("profile", help="character profile psi(gamma^a D), a < k")
    _add_spec_source(sp)
    _add_run_options(sp, ("csv", "json"))
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("selftest", help="run the acceptance checks")
    sp.add_argument("level", nargs="?", choices=["quick", "full"])
    sp.set_defaults(func=cmd_selftest, parser=sp)

    sp = sub.add_parser("cache", help="inspect or clear the trace-count cache")
    sp.add_argument("action", choices=["list", "clear", "path"])
    sp.add_argument("--cache-dir", default=None)
    sp.set_defaults(func=cmd_cache)
    return ap


def _check_construct_args(args) -> None:
    need = {
        "table1": ["no"],
        "thm13": ["variant", "p", "p1"],
        "thm14": ["variant", "p", "p1"],
        "srg-family": ["p", "primes"],
        "shd": ["p", "p1"],
    }[args.family]
    missing = [n for n in need if getattr(args, n) is None]
    if missing:
        raise UsageError(f"construct {args.family} needs " + ", ".join("--" + n for n in missing))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "construct":
            _check_construct_args(args)
        return args.func(args)
    except UsageError as exc:
        print(f"csrg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooLarge as exc:
        print(f"csrg: too large: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (CsrgError, OSError, ValueError, ArithmeticError) as exc:
        print(f"csrg: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
