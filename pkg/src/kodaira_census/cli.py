"""Command-line front end: ``kodaira-census <command> ...``.

Exit codes: 0 ok, 1 a check failed, 2 usage error, 3 singular curve,
4 non-reduced pair, 5 factorization incomplete, 6 box too large,
7 unknown lemma or missing/invalid lemma parameter, 8 corrupt checkpoint,
9 capacity exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import bounds, census, densities, residue_lab, sampling
from .core import make_curve
from .errors import (
    BadPrime,
    BadType,
    BoxTooLarge,
    CapacityError,
    CorruptCheckpoint,
    FactorizationIncomplete,
    MissingParameter,
    NotReduced,
    SingularCurve,
    UnknownLemma,
    XTooSmall,
)
from .kodaira import I0, Kind, KodairaType, bad_primes_ge5, check_prime, classify, conductor_star

SCHEMA_VERSION = "1"
SCHEMA_PATH = Path(__file__).with_name("output.schema.json")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EXIT_CODES = {
    SingularCurve: 3,
    NotReduced: 4,
    FactorizationIncomplete: 5,
    BoxTooLarge: 6,
    UnknownLemma: 7,
    MissingParameter: 7,
    XTooSmall: 7,
    CorruptCheckpoint: 8,
    CapacityError: 9,
    BadPrime: 2,
    BadType: 2,
}

FIELDS = {
    "density": ("p", "mode", "type", "value", "decimal"),
    "classify": ("a", "b", "p", "type", "conductor_exponent", "discriminant_valuation", "conductor_star"),
    "census": census.CENSUS_FIELDS,
    "boxcheck": ("p", "type", "modulus_a", "modulus_b", "closed_form", "brute_force", "pass"),
    "bounds": (
        "lemma", "X", "p", "n", "literal", "lower", "upper", "lower_normalized",
        "upper_normalized", "limit", "count", "slack", "lower_margin", "upper_margin", "pass",
    ),
    "convergence": ("X", "p", "quantity", "empirical", "theoretical", "abs_err", "rel_err"),
    "twistcheck": ("seed", "p", "samples", "violations", "pass"),
}


def parse_height(text: str) -> int:
    """Exact integer from ``100000000``, ``1e8`` or ``2.5e3``."""
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if d != d.to_integral_value() or d < 1:
        raise argparse.ArgumentTypeError(f"height must be a positive integer: {text!r}")
    return int(d)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(command: str, records: Sequence[dict], fmt_name: str, out=None) -> None:
    """Write records as CSV, versioned JSON, or an aligned table."""
    out = out or sys.stdout
    fields = FIELDS[command]
    rows = [{k: fmt(r.get(k)) for k in fields} for r in records]
    if fmt_name == "csv":
        w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    elif fmt_name == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "records": rows}
        out.write(json.dumps(doc, indent=1) + "\n")
    else:
        used = [f for f in fields if any(r[f] for r in rows)] or list(fields)
        widths = {f: max(len(f), *(len(r[f]) for r in rows)) for f in used}
        out.write("  ".join(f.ljust(widths[f]) for f in used).rstrip() + "\n")
        for r in rows:
            out.write("  ".join(r[f].ljust(widths[f]) for f in used).rstrip() + "\n")


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


# -- commands -------------------------------------------------------------

def _density_value(t: KodairaType | str, p: int, mode: str) -> Fraction:
    if isinstance(t, str):
        return densities.aggregate(t, p, mode)
    if mode == "absolute":
        return densities.proportion_absolute(t, p)
    return densities.proportion_given_bad(t, p)


def cmd_density(args) -> int:
    p, mode = args.prime, args.mode.replace("-", "_")
    check_prime(p)
    if args.type:
        t = KodairaType.parse(args.type, args.n)
        items = [(str(t), t)]
    else:
        fam_in = KodairaType.I(args.n) if args.n else "multiplicative"
        fam_star = KodairaType.Istar(args.n) if args.n else "potentially_multiplicative"
        items = [("I0", I0)] if mode == "absolute" else []
        items += [
            ("In" if args.n is None else f"I{args.n}", fam_in),
            *((str(KodairaType(k)), KodairaType(k)) for k in (Kind.II, Kind.III, Kind.IV, Kind.I0STAR)),
            ("In*" if args.n is None else f"I{args.n}*", fam_star),
            *((str(KodairaType(k)), KodairaType(k)) for k in (Kind.IVSTAR, Kind.IIISTAR, Kind.IISTAR)),
        ]
    records = []
    for label, t in items:
        v = _density_value(t, p, mode)
        records.append({"p": p, "mode": args.mode, "type": label, "value": v, "decimal": float(v)})
    if len(items) > 1:
        total = sum((r["value"] for r in records), Fraction(0))
        records.append({"p": p, "mode": args.mode, "type": "total", "value": total, "decimal": float(total)})
    emit("density", records, args.format)
    return EXIT_OK


def cmd_classify(args) -> int:
    pair = make_curve(args.a, args.b)
    if args.all_primes:
        primes = sorted(bad_primes_ge5(pair))
        nstar = conductor_star(pair)
    else:
        if args.prime is None:
            raise argparse.ArgumentTypeError("classify needs --prime or --all-primes")
        primes, nstar = [args.prime], None
    records = []
    for p in primes:
        lr = classify(pair, p)
        records.append({
            "a": pair.A, "b": pair.B, "p": p, "type": str(lr.type),
            "conductor_exponent": lr.conductor_exponent,
            "discriminant_valuation": lr.discriminant_valuation,
            "conductor_star": nstar,
        })
    if not records:
        records.append({"a": pair.A, "b": pair.B, "conductor_star": nstar})
    emit("classify", records, args.format)
    return EXIT_OK


def cmd_census(args) -> int:
    tally = census.run_census(
        args.height, args.primes, args.workers, checkpoint=args.checkpoint
    )
    records = census.tally_rows(tally)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            emit("census", records, args.format, fh)
        logging.getLogger(__name__).info("wrote %d rows to %s", len(records), args.out)
    else:
        emit("census", records, args.format)
    return EXIT_OK


def cmd_boxcheck(args) -> int:
    if args.type == "all":
        types = residue_lab.acceptance_types()
    else:
        types = [KodairaType.parse(args.type, args.n)]
    records, ok = [], True
    for t in types:
        rep = residue_lab.box_census(t, args.prime, args.budget)
        ok &= rep.match
        records.append({
            "p": rep.p, "type": str(t), "modulus_a": rep.modulus_a, "modulus_b": rep.modulus_b,
            "closed_form": rep.closed_form, "brute_force": rep.brute_force, "pass": rep.match,
        })
    emit("boxcheck", records, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bounds(args) -> int:
    env = bounds.bound_envelope(args.lemma, args.height, args.prime, args.n, args.literal)
    lo_n, up_n = env.normalized()
    rec = {
        "lemma": args.lemma, "X": env.X, "p": env.p, "n": env.n, "literal": env.literal,
        "lower": env.lower, "upper": env.upper, "lower_normalized": lo_n, "upper_normalized": up_n,
        "limit": bounds.limit_constant(args.lemma, args.prime, args.n),
    }
    ok = True
    if args.census:
        primes = (args.prime,) if args.prime else ()
        tally = census.run_census(args.height, primes, args.workers)
        chk = bounds.envelope_vs_census(args.lemma, args.height, args.prime, args.n, tally, args.slack, args.literal)
        rec.update(count=chk.count, slack=args.slack, lower_margin=chk.lower_margin,
                   upper_margin=chk.upper_margin, **{"pass": chk.passed})
        ok &= chk.passed
    if args.tolerance is not None:
        nc = bounds.NormalizedCheck(env, rec["limit"], args.tolerance)
        ok &= nc.passed
        rec["pass"] = ok
    emit("bounds", [rec], args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_convergence(args) -> int:
    rows = census.convergence_report(args.heights, args.prime, args.quantities, args.workers)
    records = [
        {"X": r.X, "p": args.prime, "quantity": r.quantity_id, "empirical": r.empirical,
         "theoretical": r.theoretical, "abs_err": r.abs_err, "rel_err": r.rel_err}
        for r in rows
    ]
    emit("convergence", records, args.format)
    last = max(args.heights)
    ok = all(r.rel_err <= args.tolerance for r in rows if r.X == last)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_twistcheck(args) -> int:
    records, ok = [], True
    for p in args.primes:
        check_prime(p)
        bad = sampling.twist_violations(sampling.random_pairs(args.seed, args.samples, p), p)
        ok &= not bad
        records.append({"seed": args.seed, "p": p, "samples": args.samples,
                        "violations": len(bad), "pass": not bad})
    emit("twistcheck", records, args.format)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kodaira-census", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=("csv", "json", "table"), default="table")
        return sp

    sp = add("density", cmd_density, "exact limiting proportions at a prime")
    sp.add_argument("--prime", type=int, required=True)
    sp.add_argument("--type")
    sp.add_argument("--n", type=int)
    sp.add_argument("--mode", choices=("given-bad", "absolute"), default="absolute")

    sp = add("classify", cmd_classify, "Kodaira type of y^2 = x^3 + Ax + B")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--prime", type=int)
    g.add_argument("--all-primes", action="store_true")

    sp = add("census", cmd_census, "exhaustive census up to height X")
    sp.add_argument("--height", type=parse_height, required=True)
    sp.add_argument("--primes", type=_int_list, default=[])
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--out")
    sp.add_argument("--checkpoint")
    sp.set_defaults(format="csv")

    sp = add("boxcheck", cmd_boxcheck, "brute-force residue box counts")
    sp.add_argument("--prime", type=int, required=True)
    sp.add_argument("--type", required=True, help="a type label, or 'all' for the standard sweep")
    sp.add_argument("--n", type=int)
    sp.add_argument("--budget", type=int, default=residue_lab.DEFAULT_BOX_BUDGET)

    sp = add("bounds", cmd_bounds, "evaluate a lemma's finite-X envelope")
    sp.add_argument("--lemma", required=True, help="one of: " + ", ".join(bounds.LEMMA_IDS))
    sp.add_argument("--height", type=parse_height, required=True)
    sp.add_argument("--prime", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--literal", action="store_true")
    sp.add_argument("--census", action="store_true", help="also check a census against the envelope")
    sp.add_argument("--slack", type=float, default=1e-2)
    sp.add_argument("--tolerance", type=float, help="max relative gap of envelope/X^(5/6) to the limit")
    sp.add_argument("--workers", type=int, default=None)

    sp = add("convergence", cmd_convergence, "empirical vs limiting densities along a height ladder")
    sp.add_argument("--heights", type=lambda s: [parse_height(x) for x in s.split(",")], required=True)
    sp.add_argument("--prime", type=int, required=True)
    sp.add_argument("--quantities", type=lambda s: s.split(","), default=["bad-share"])
    sp.add_argument("--tolerance", type=float, default=0.01)
    sp.add_argument("--workers", type=int, default=None)

    sp = add("twistcheck", cmd_twistcheck, "seeded fuzz of the quadratic-twist pairing")
    sp.add_argument("--primes", type=_int_list, default=[5, 7, 11])
    sp.add_argument("--samples", type=int, default=10**4)
    sp.add_argument("--seed", type=int, default=0)
    return ap


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except tuple(EXIT_CODES) as exc:
        code = next(c for cls, c in EXIT_CODES.items() if isinstance(exc, cls))
        print(f"error: {exc}", file=sys.stderr)
        return code
    except (argparse.ArgumentTypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
