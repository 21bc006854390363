"""Command line interface: ``mordell-basis <command> ...``.

Exit codes: 0 success, 1 verification or certification failure, 2 usage or
precondition error (a JSON error object is written to stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .arch import generic_config
from .certify import PAIRS, SCHEMA_VERSION, certify_pair, certify_rank3, combo_label, family_heights
from .curve import MordellCurve
from .descent import SUPPORTED_PRIMES, combination_non_divisibility, line_representatives
from .divpoly import DEFAULT_PRIME_BUDGET
from .errors import MordellBasisError
from .family import FamilyCurve, enumerate_family
from .intervals import DEFAULT_PRECISION, HeightInterval
from .lattice import canonical_height, family_height_window, strictly_inside_window, uniform_lower_bound
from .nonarch import lambda_prime_2, lambda_prime_3
from .zbounds import GridSpec, verify_zprime_bounds

THREADS_ENV = "MORDELL_BASIS_THREADS"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _iv_text(h: HeightInterval, digits: int = 16) -> str:
    j = h.to_json(digits)
    return f"[{j['lo']}, {j['hi']}]"


def _emit(args, payload, text_lines) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


def _threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            n = int(raw)
        except ValueError:
            raise UsageError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise UsageError("thread count must be at least 1")
    return n


def _family(args) -> FamilyCurve:
    return FamilyCurve.build(args.a, args.b)


# ---------------------------------------------------------------------------

def cmd_height(args) -> int:
    family = None
    if args.a is not None or args.b is not None:
        if args.a is None or args.b is None or args.point is None:
            raise UsageError("--a, --b and --point go together")
        if args.n is not None or args.x is not None or args.y is not None:
            raise UsageError("give either --a/--b/--point or --n/--x/--y")
        family = _family(args)
        idx = int(args.point[1])
        E, P = family.curve, family.point(idx)
        h = family_heights(family, args.precision, args.terms)(P)
    else:
        if args.n is None or args.x is None or args.y is None:
            raise UsageError("need --a/--b/--point or --n/--x/--y")
        E = MordellCurve(args.n)
        P = E.point(Fraction(args.x), Fraction(args.y))
        if P.beta < 0:
            P = E.negate(P)
        h = canonical_height(E, P, args.precision, generic_config(E, args.terms, args.precision))
    q2 = lambda_prime_2(P).coefficient(2)
    q3 = lambda_prime_3(P).coefficient(3)
    form = f"{q2}*log 2 + {q3}*log 3 + 2*log {P.delta}"
    payload = {
        "n": E.n, "point": {"x": str(P.x), "y": str(P.y)},
        "height": h.total.to_json(), "nonarchimedean": {"terms": h.exact_part.to_json(), "form": form},
        "archimedean": h.arch_part.to_json(), "precision_bits": args.precision, "tate_terms": args.terms,
    }
    lines = [f"curve      y^2 = x^3 + {E.n}", f"point      ({P.x}, {P.y})",
             f"height     {_iv_text(h.total)}", f"h_f        {form}  (= {h.exact_part})",
             f"lambda_inf {_iv_text(h.arch_part)}"]
    status = EXIT_OK
    if family is not None:
        win = family_height_window(family.m, idx, args.precision)
        inside = strictly_inside_window(h.total, win)
        payload["family_window"] = {"lo": win[0].to_json(), "hi": win[1].to_json(), "inside": inside}
        lines.append(f"window     ({_iv_text(win[0], 10)}, {_iv_text(win[1], 10)}) inside: {inside}")
        status = EXIT_OK if inside else EXIT_FAIL
    _emit(args, payload, lines)
    return status


def _certify_one(a: int, b: int, pairs, rank3: bool, prec: int, terms: int, budget: int) -> list[dict]:
    fc = FamilyCurve.build(a, b)
    certs = [certify_pair(fc, p, prec, terms, budget) for p in pairs]
    if rank3:
        certs.append(certify_rank3(fc, prec, terms, budget))
    return [c.to_dict() for c in certs]


def _parse_pairs(text: str):
    if text == "all":
        return list(PAIRS)
    out = []
    for item in text.split(","):
        if len(item) != 2 or not set(item) <= set("123") or item[0] == item[1]:
            raise UsageError(f"bad pair {item!r}; use e.g. 12, 23, 31 or all")
        out.append((int(item[0]), int(item[1])))
    return out


def _cert_text(c: dict) -> str:
    concl = c["conclusion"]
    who = "{" + ", ".join(c["basis"]) + "}"
    sik = c["siksek"]
    sik_txt = f" bound [{sik['lo'][:10]}, {sik['hi'][:10]}]" if sik else ""
    if concl["certified"]:
        if c["kind"] == "rank3":
            what = f"independent (rank >= 3), index prime to {concl['index_coprime_to']}"
        else:
            what = "index 1"
    else:
        what = f"NOT certified at {concl['failed_step']}: {concl['reason']}"
    return f"(a, b) = ({c['curve']['a']}, {c['curve']['b']}) {who}:{sik_txt} -> {what}"


def cmd_certify(args) -> int:
    pairs = _parse_pairs(args.pair)
    rank3 = args.rank3 if args.rank3 is not None else args.pair == "all"
    _family(args)  # precondition check before any work
    certs = _certify_one(args.a, args.b, pairs, rank3, args.precision, args.terms, args.prime_budget)
    doc = {"schema_version": SCHEMA_VERSION, "certificates": certs}
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")
    _emit(args, doc, [_cert_text(c) for c in certs])
    return EXIT_OK if all(c["conclusion"]["certified"] for c in certs) else EXIT_FAIL


def cmd_enumerate(args) -> int:
    if args.a_max < 0 or args.b_max < 0:
        raise UsageError("bounds must be nonnegative")
    entries = list(enumerate_family(args.a_max, args.b_max, m_max=args.m_max))
    results = [None] * len(entries)
    todo = [(i, e) for i, e in enumerate(entries) if e.family is not None]
    if args.certify and todo:
        jobs = [(e.a, e.b, list(PAIRS), False, args.precision, args.terms, args.prime_budget) for _, e in todo]
        n = _threads(args)
        if n == 1:
            outs = [_certify_one(*j) for j in jobs]
        else:
            with ProcessPoolExecutor(max_workers=n) as pool:
                # map keeps submission order, so output is deterministic
                outs = list(pool.map(_certify_one, *zip(*jobs)))
        for (i, _), out in zip(todo, outs):
            results[i] = out
    payload, lines, status = [], [], EXIT_OK
    for e, certs in zip(entries, results):
        row = e.membership.to_json()
        row["m"] = e.a**6 + 16 * e.b**6
        line = f"({e.a}, {e.b}) m = {row['m']} {row['status']}"
        if e.membership.unknown:
            line += f" ({e.membership.reason})"
        if certs is not None:
            ok = all(c["conclusion"]["certified"] for c in certs)
            row["certified"] = ok
            row["conclusions"] = [{"basis": c["basis"], **c["conclusion"]} for c in certs]
            line += " index 1 for all pairs" if ok else " NOT certified"
            status = status if ok else EXIT_FAIL
        payload.append(row)
        lines.append(line)
    _emit(args, {"a_max": args.a_max, "b_max": args.b_max, "entries": payload}, lines)
    return status


def _parse_grid(text: str) -> GridSpec:
    try:
        y, u = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"bad grid {text!r}; use YxU, e.g. 241x241") from None
    try:
        return GridSpec(y_points=y, u_points=u)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify_bounds(args) -> int:
    grid = _parse_grid(args.grid)
    kinds = ["2a2+4b2", "3a2+4b2"] if args.d_kind == "all" else [args.d_kind]
    reports = [verify_zprime_bounds(k, grid, args.z_min, args.z_max) for k in kinds]
    lines = []
    for r in reports:
        lines.append(f"{r.d_kind}: observed z' in [{r.observed_min:.10f}, {r.observed_max:.10f}] "
                     f"over {r.n_points} points; bounds ({r.z_min}, {r.z_max}) -> {'ok' if r.ok else 'VIOLATED'}")
        for name, ok in sorted(r.checks.items()):
            lines.append(f"  check {name}: {'ok' if ok else 'FAILED'}")
        for u, y, v in r.violations[:5]:
            lines.append(f"  violation at u = {u:.6g}, Y = {y:.6g}: f = {v:.10f}")
    _emit(args, {"reports": [r.to_json() for r in reports]}, lines)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _parse_combos(text: str, s: int):
    if text == "default":
        return None
    out = []
    for item in text.split(";"):
        vec = tuple(int(v) for v in item.split(","))
        if len(vec) != s:
            raise UsageError(f"combination {item!r} needs {s} entries")
        out.append(vec)
    return out


def cmd_descent(args) -> int:
    p = args.prime
    if p not in SUPPORTED_PRIMES:
        raise UsageError(f"prime {p} is not supported (use 2, 3 or 5)")
    fc = _family(args)
    target = args.points or ("triple" if p in (2, 3) else "pairs")
    if target == "triple":
        groups = [(1, 2, 3)]
    elif target == "pairs":
        groups = list(PAIRS)
    else:
        groups = [tuple(int(c) for c in target)]
        if not 2 <= len(groups[0]) <= 3 or set(groups[0]) - {1, 2, 3} or len(set(groups[0])) != len(groups[0]):
            raise UsageError(f"bad point set {target!r}")
    hc = family_heights(fc, args.precision, args.terms)
    lam = uniform_lower_bound(fc.m, args.precision)
    payload, lines, status = [], [], EXIT_OK
    for g in groups:
        names = [f"P{i}" for i in g]
        pts = [fc.point(i) for i in g]
        combos = _parse_combos(args.combos, len(g))
        res = combination_non_divisibility(fc.curve, pts, p, combos, hc, lam,
                                           exhaustive=not args.no_exhaustive, prime_budget=args.prime_budget)
        block = []
        for combo, r in res.items():
            entry = r.to_json()
            block.append(entry)
            label = combo_label(combo, names)
            extra = f" via {list(r.witness)}" if r.witness is not None and tuple(r.witness) != combo else ""
            lines.append(f"p = {p} {label}: {r.verdict.status.value} [{r.verdict.criterion}]{extra}")
            if not r.verdict.proven:
                status = EXIT_FAIL
        payload.append({"points": names, "prime": p, "verdicts": block,
                        "lines_expected": len(line_representatives(len(g), p))})
    _emit(args, {"a": fc.a, "b": fc.b, "m": fc.m, "groups": payload}, lines)
    return status


# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="working precision in bits (>= 64)")
    p.add_argument("--terms", type=int, default=3, help="explicit Tate series terms N (>= 1)")
    p.add_argument("--threads", type=int, default=None, help=f"worker processes (env {THREADS_ENV})")
    p.add_argument("--prime-budget", type=int, default=DEFAULT_PRIME_BUDGET,
                   help="auxiliary primes tried by the rational root search")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mordell-basis", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("height", help="certified canonical height of a point")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--point", choices=("P1", "P2", "P3"))
    p.add_argument("--n", type=int)
    p.add_argument("--x")
    p.add_argument("--y")
    _common(p)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("certify", help="certify that point pairs extend to a basis")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--pair", default="all", help="12, 23, 31 (comma separated) or all")
    p.add_argument("--rank3", dest="rank3", action="store_true", default=None,
                   help="also certify P1, P2, P3 independent (default with --pair all)")
    p.add_argument("--no-rank3", dest="rank3", action="store_false")
    p.add_argument("--json", metavar="FILE", help="write the certificates to FILE")
    _common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("enumerate", help="list family members")
    p.add_argument("--a-max", type=int, required=True)
    p.add_argument("--b-max", type=int, required=True)
    p.add_argument("--m-max", type=int, default=None)
    p.add_argument("--certify", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-bounds", help="grid check of the z' tail bounds")
    p.add_argument("--d-kind", choices=("2a2+4b2", "3a2+4b2", "all"), default="all")
    p.add_argument("--grid", default="241x241", help="YxU grid size")
    p.add_argument("--z-min", type=float, default=None, help="override the lower bound under test")
    p.add_argument("--z-max", type=float, default=None, help="override the upper bound under test")
    _common(p)
    p.set_defaults(func=cmd_verify_bounds)

    p = sub.add_parser("descent", help="non-divisibility verdicts by a prime")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--points", default=None, help="triple, pairs, or indices such as 23 (default: triple "
                                                  "for p = 2, 3 and pairs for p = 5)")
    p.add_argument("--combos", default="default", help="'default' or vectors like '1,2;1,-2'")
    p.add_argument("--no-exhaustive", action="store_true", help="skip the division point search")
    _common(p)
    p.set_defaults(func=cmd_descent)
    return parser


def _error(kind: str, message: str) -> int:
    print(json.dumps({"error": message, "type": kind}), file=sys.stderr)
    return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.precision < 64:
            raise UsageError("--precision must be at least 64")
        if args.terms < 1:
            raise UsageError("--terms must be at least 1")
        if args.prime_budget < 1:
            raise UsageError("--prime-budget must be positive")
        return args.func(args)
    except UsageError as exc:
        return _error("usage", str(exc))
    except MordellBasisError as exc:
        return _error(type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
