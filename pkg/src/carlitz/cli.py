"""Batch command line front end: reproducible tables and verification reports."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import cinfty, density
from .errors import (
    BudgetExceeded,
    CarlitzError,
    CrossCheckMismatch,
    InsufficientPrecision,
    InvalidCharacteristic,
    NonUnit,
    ParseError,
    UnsupportedOrder,
    WindowEmpty,
)
from .field import spec_for_order
from .series import parse_series, render_series

EX_OK = 0
EX_BUDGET = 2
EX_MISMATCH = 3
EX_USAGE = 64

CONFIG_ENV = "CARLITZ_CONFIG"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


class _UsageError(Exception):
    pass


def _positive(name, value, minimum=1):
    if value < minimum:
        raise _UsageError(f"--{name} must be >= {minimum}")
    return value


def _resolve_spec(q):
    return spec_for_order(q, os.environ.get(CONFIG_ENV))


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table_text(table, fmt):
    return table.to_json_text() if fmt == "json" else table.to_csv_text()


def _cmd_density(args):
    _positive("nmax", args.nmax)
    _positive("threads", args.threads)
    if args.k < 0:
        raise _UsageError("--k must be >= 0")
    spec = _resolve_spec(args.q)
    table = density.build_density_table(
        spec, args.k, args.nmax, args.mode, threads=args.threads, seed=args.seed
    )
    _emit(_table_text(table, args.format), args.out)
    return EX_OK


def _cmd_tensor(args):
    _positive("nmax", args.nmax)
    _positive("d", args.d)
    _positive("threads", args.threads)
    spec = _resolve_spec(args.q)
    table = density.build_tensor_table(spec, args.d, args.nmax, args.mode,
                                       threads=args.threads, seed=args.seed)
    _emit(_table_text(table, args.format), args.out)
    return EX_OK


def _cmd_omega_verify(args):
    _positive("tprec", args.tprec)
    _positive("uprec", args.uprec)
    if args.k < 0:
        raise _UsageError("--k must be >= 0")
    spec = _resolve_spec(args.q)
    omega = cinfty.compute_omega(spec, args.tprec, args.uprec)
    if args.dump_omega:
        payload = {
            "q": spec.q,
            "tprec": omega.tprec,
            "entries": [
                {
                    "n": n,
                    "val": e.val if not e.is_zero else None,
                    "uprec": e.uprec,
                    "coeffs": list(e.ranks),
                }
                for n, e in enumerate(omega.entries)
            ],
        }
        with open(args.dump_omega, "w", encoding="utf-8", newline="") as fh:
            fh.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
    checks = [("carlitz-equation", cinfty.verify_carlitz_equation(omega))]
    checks.append(
        (f"prolongation-trivialization[k={args.k}]",
         cinfty.verify_prolongation_trivialization(omega, args.k))
    )
    for j, col in enumerate(cinfty.jet_columns(omega, args.k)):
        checks.append(
            (f"hhat-membership[column {j}]", cinfty.verify_hhat_membership(args.k, col))
        )
    all_ok = True
    for name, ok in checks:
        sys.stdout.write(f"{name}: {'PASS' if ok else 'FAIL'}\n")
        all_ok = all_ok and ok
    return EX_OK if all_ok else 1


def _cmd_rep(args):
    _positive("n", args.n)
    if args.k < 0:
        raise _UsageError("--k must be >= 0")
    spec = _resolve_spec(args.q)
    unit = parse_series(spec, args.unit, args.n + args.k)
    mat = density.galois_rep(unit, args.k, args.n)
    payload = {
        "q": spec.q,
        "k": args.k,
        "N": args.n,
        "unit": render_series(unit),
        "rows": [render_series(r) for r in mat.rows],
    }
    _emit(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n", args.out)
    return EX_OK


def _cmd_torsion_level(args):
    if args.n < 0 or args.k < 0:
        raise _UsageError("--n and --k must be >= 0")
    m = density.torsion_level_m(args.p, args.n, args.k)
    payload = {"p": args.p, "n": args.n, "k": args.k, "m": m}
    _emit(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n", args.out)
    return EX_OK


def _cmd_zariski(args):
    _positive("n", args.n)
    if args.k < 0 or args.deg < 0 or args.tdeg < 0:
        raise _UsageError("--k, --deg, --tdeg must be >= 0")
    spec = _resolve_spec(args.q)
    report = density.zariski_rank_certificate(
        spec, args.k, args.deg, args.tdeg, args.n, seed=args.seed
    )
    payload = {
        "q": spec.q,
        "k": report.k,
        "deg_bound": report.deg_bound,
        "tdeg_bound": report.tdeg_bound,
        "N": report.n,
        "seed": report.seed,
        "sampled": report.sampled,
        "units": report.n_units,
        "columns": report.n_columns,
        "rank": report.rank,
        "full_rank": report.full_rank,
    }
    _emit(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n", args.out)
    return EX_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="carlitz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common_table(p):
        p.add_argument("--nmax", type=int, required=True)
        p.add_argument("--mode", choices=["brute", "formula", "both"], default="both")
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--seed", type=int, default=density.DEFAULT_SEED)

    p = sub.add_parser("density", help="image orders D(N) for the jet action")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    common_table(p)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("tensor", help="image orders D(N) for tensor powers")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    common_table(p)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_tensor)

    p = sub.add_parser("omega-verify", help="functional-equation checks for omega")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tprec", type=int, required=True)
    p.add_argument("--uprec", type=int, required=True)
    p.add_argument("--dump-omega", default=None)
    p.set_defaults(func=_cmd_omega_verify)

    p = sub.add_parser("rep", help="print the jet matrix of a unit")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--unit", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_rep)

    p = sub.add_parser("torsion-level", help="largest matching torsion level")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_torsion_level)

    p = sub.add_parser("zariski", help="low-degree relation-freeness certificate")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--deg", type=int, required=True)
    p.add_argument("--tdeg", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=density.DEFAULT_SEED)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_zariski)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EX_USAGE
    try:
        return args.func(args)
    except (_UsageError, ParseError, UnsupportedOrder, InvalidCharacteristic,
            NonUnit) as exc:
        sys.stderr.write(f"carlitz: error: {exc}\n")
        return EX_USAGE
    except CrossCheckMismatch as exc:
        sys.stderr.write(f"carlitz: cross-check failed at N={exc.n}: "
                         f"brute={exc.brute} formula={exc.formula}\n")
        return EX_MISMATCH
    except (BudgetExceeded, InsufficientPrecision, WindowEmpty) as exc:
        sys.stderr.write(f"carlitz: {exc}\n")
        return EX_BUDGET
    except CarlitzError as exc:
        sys.stderr.write(f"carlitz: {exc}\n")
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
