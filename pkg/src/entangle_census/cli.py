"""``entangle-census`` command line."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import area as area_mod
from . import family as family_mod
from . import lattice, localdensity, predict
from .lmfdb import LmfdbClient

SUBCOMMANDS = [
    "check-family",
    "enumerate",
    "count",
    "density",
    "euler",
    "area",
    "predict",
    "fit",
    "verify-paper",
    "lmfdb-check",
]


class UsageError(Exception):
    pass


def _dec(s: str) -> int:
    s = s.strip()
    # allow 1e45 / 10^45 shorthands but keep everything exact
    if "^" in s:
        base, exp = s.split("^")
        return int(base) ** int(exp)
    if "e" in s.lower():
        m, e = s.lower().split("e")
        return int(m) * 10 ** int(e)
    return int(s)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entangle-census", description=__doc__)
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--family", choices=["F1", "F2"])
    src.add_argument("--config", metavar="PATH")
    p.add_argument("--X", dest="X", type=_dec)
    p.add_argument("--ladder", type=lambda s: [_dec(x) for x in s.split(",") if x])
    p.add_argument("--ell", type=int)
    p.add_argument("--z", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--grid", type=int, default=0, help="also compute the grid area at this resolution")
    p.add_argument("--method", choices=["scan", "structured", "via-C", "closed"])
    p.add_argument("--ainvs", type=lambda s: [int(x) for x in s.split(",")])
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv", "text"])
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--offline", action="store_true")
    return p


def _family(args) -> family_mod.FamilySpec:
    if args.config:
        return family_mod.load_family(args.config)
    if args.family:
        return family_mod.builtin(args.family)
    raise UsageError("one of --family or --config is required")


def _ladder(args) -> list[int]:
    if args.ladder:
        if args.ladder != sorted(args.ladder):
            raise UsageError("--ladder must be ascending")
        return args.ladder
    if args.X is not None:
        return [args.X]
    raise UsageError("--X or --ladder is required")


def _frac(v: Fraction) -> dict:
    return {"num": str(v.numerator), "den": str(v.denominator)}


def _emit_table(out, rows: list[dict], columns: list[str], fmt: str) -> None:
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=columns, extrasaction="ignore", lineterminator="\r\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
    else:
        json.dump(rows, out, indent=1)
        out.write("\n")


def _run(args, out) -> int:
    cmd = args.subcommand
    fmt = args.format

    if cmd == "lmfdb-check":
        if not args.ainvs or len(args.ainvs) != 5:
            raise UsageError("--ainvs a1,a2,a3,a4,a6 is required")
        rec = LmfdbClient(offline=args.offline).lookup_by_ainvs(args.ainvs)
        json.dump(rec.to_json() if rec else None, out)
        out.write("\n")
        return 0 if rec else 1

    spec = _family(args)

    if cmd == "check-family":
        res = family_mod.sigma_invariants(spec.A0, spec.B0, spec.C)
        json.dump(
            {
                **family_mod.family_to_json(spec),
                "C": spec.C.to_json(),
                "A0": spec.A0.to_json(),
                "B0": spec.B0.to_json(),
                "d": spec.d,
                "r": spec.r,
                "sigma": sorted(spec.sigma),
                "sigma_invariants": [str(x) for x in res],
            },
            out,
            indent=1,
        )
        out.write("\n")
        return 0

    if cmd == "enumerate":
        if args.X is None:
            raise UsageError("--X is required")
        lattice.write_records(
            lattice.enumerate_F(spec, args.X, args.threads), out, "csv" if fmt == "csv" else "jsonl"
        )
        return 0

    if cmd == "count":
        rows = []
        for X in _ladder(args):
            recs = list(lattice.enumerate_F(spec, X, args.threads))
            cs = lattice.count_summary(spec, X, recs)
            rows.append(
                {
                    "X": str(X),
                    "count_F": cs.count_F,
                    "count_Dz": lattice.count_Dz(spec, X, args.z, recs),
                    "count_D": cs.count_D,
                    "count_C": cs.count_C,
                    "distinct_models": cs.distinct_models,
                }
            )
        _emit_table(out, rows, list(rows[0]), fmt or "json")
        return 0

    if cmd == "density":
        if args.ell is None:
            raise UsageError("--ell is required")
        m = args.method
        if m == "via-C":
            dv = localdensity.density_via_C(spec, args.ell)
        elif m in ("scan", "structured"):
            dv = localdensity.density_def(spec, args.ell, m)
        else:
            dv = localdensity.density_closed(spec, args.ell)
        if fmt in (None, "text"):
            out.write(f"{dv.value}\n")
        elif fmt == "csv":
            row = {**dv.to_json(spec.name), "value": str(dv.value)}
            _emit_table(out, [row], ["family", "ell", "method", "value"], "csv")
        else:
            json.dump(dv.to_json(spec.name), out)
            out.write("\n")
        return 0

    if cmd == "euler":
        eb = localdensity.euler_product(spec, args.z)
        if fmt == "text":
            out.write(f"{float(eb.lower):.12g} <= prod <= {float(eb.upper):.12g}\n")
        else:
            row = {"family": spec.name, "z": eb.z, "lower": _frac(eb.lower), "upper": _frac(eb.upper),
                   "lower_float": float(eb.lower), "upper_float": float(eb.upper)}
            json.dump(row, out, indent=1)
            out.write("\n")
        return 0

    if cmd == "area":
        rows = [area_mod.area_polar(spec, args.tol).to_json(spec.name)]
        if args.grid:
            rows.append(area_mod.area_grid(spec, args.grid).to_json(spec.name))
        _emit_table(out, rows, ["family", "method", "value", "err", "evaluations"], fmt or "json")
        return 0

    if cmd in ("predict", "fit"):
        rep = predict.ratio_table(spec, _ladder(args), args.z, args.tol, args.threads)
        if cmd == "fit":
            fit = rep.exponent_fit
            if fit is None:
                raise UsageError("fit needs a ladder of at least three heights with nonzero counts")
            json.dump({"family": spec.name, "expected": 2 / spec.d, **fit.__dict__}, out, indent=1)
            out.write("\n")
        elif fmt == "csv":
            _emit_table(out, [r.to_json() for r in rep.rows], predict.PredictionReport.CSV_COLUMNS, "csv")
        else:
            json.dump(rep.to_json(), out, indent=1)
            out.write("\n")
        return 0

    if cmd == "verify-paper":
        rep = predict.verify_paper(spec)
        if fmt == "json":
            json.dump(rep.to_json(), out, indent=1)
            out.write("\n")
        else:
            for c in rep.checks:
                out.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name:28s} {c.detail}\n")
        return 0 if rep.passed else 1

    raise UsageError(f"unhandled subcommand {cmd}")


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        parser.print_usage(sys.stderr)
        print("entangle-census: error: --threads must be positive", file=sys.stderr)
        return 2
    if args.tol <= 0:
        print("entangle-census: error: --tol must be positive", file=sys.stderr)
        return 2
    buf = io.StringIO()
    try:
        code = _run(args, buf)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"entangle-census: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, ZeroDivisionError, OSError) as exc:
        print(f"entangle-census: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
