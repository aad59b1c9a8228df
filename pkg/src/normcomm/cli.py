"""Command-line entry point: ``normcomm <subcommand> ...``.

Exit codes: 0 success, 1 parse error, 2 verification failure,
3 precondition violation.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .center import find_center, verify_certificate
from .constants import constants_csv, constants_table
from .derivation import derivation_bracket
from .linalg import group_eigenvalues, normal_eig, verify_commutator_bound
from .oracle import EXACT_MAX_N, lambda_exact
from .pairing import SQRT3_2, build_pairing, cycle_type_report

EXIT_OK, EXIT_PARSE, EXIT_VERIFY, EXIT_PRECONDITION = 0, 1, 2, 3


class Precondition(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise io.ParseError(str(exc)) from exc


def _cert_json(c) -> dict:
    return {
        "z0": io.point(c.z0),
        "t0": c.t0,
        "directions": [io.point(d) for d in c.directions],
        "offsets": list(c.offsets),
        "masses": [list(m) for m in c.masses],
    }


def cmd_center(args):
    text = _read(args.input)
    s = io.parse_spectrum(text)
    c = find_center(s)
    ok = verify_certificate(s, c, args.tol)
    out = {"certificate": _cert_json(c), "verified": ok}
    return text, out, {"certificate": args.tol}, EXIT_OK if ok else EXIT_VERIFY


def _pairing_json(p) -> dict:
    return {
        "permutation": [int(i) for i in p.permutation],
        "z0": io.point(p.z0),
        "cycle_partition": {str(k): v for k, v in p.cycle_partition.items()},
        "cycle_type": {str(k): v for k, v in cycle_type_report(p).items()},
        "achieved_lambda": p.achieved_lambda,
    }


def _uniform_or_fail(s):
    if not s.is_uniform:
        raise Precondition("pairing requires counting measure")


def cmd_pair(args):
    text = _read(args.input)
    s = io.parse_spectrum(text)
    _uniform_or_fail(s)
    p = build_pairing(s)
    ok = p.achieved_lambda >= SQRT3_2 - args.tol
    return text, {"pairing": _pairing_json(p), "bound_holds": ok}, {"lambda": args.tol}, \
        EXIT_OK if ok else EXIT_VERIFY


def cmd_lambda(args):
    text = _read(args.input)
    s = io.parse_spectrum(text)
    _uniform_or_fail(s)
    out = {}
    if args.exact or not args.construct:
        if len(s) > EXACT_MAX_N:
            raise Precondition(f"exact oracle limited to n <= {EXACT_MAX_N}")
        r = lambda_exact(s)
        out["exact"] = {
            "lambda": r.lambda_value,
            "permutation": [int(i) for i in r.best_permutation],
            "z": io.point(r.best_z),
            "per_pair_ratios": [float(x) for x in r.per_pair_ratios],
        }
    if args.construct:
        p = build_pairing(s)
        out["construct"] = _pairing_json(p)
    return text, out, {}, EXIT_OK


def _normal_matrix(text: str):
    try:
        a = io.matrix_from_json(text)
    except ValueError as exc:
        raise io.ParseError(str(exc)) from exc
    try:
        lam = normal_eig(a).eigenvalues
    except ValueError as exc:
        raise Precondition(str(exc)) from exc
    return a, lam


def cmd_verify_matrix(args):
    text = _read(args.input)
    a, lam = _normal_matrix(text)
    from .center import WeightedSpectrum

    p = build_pairing(WeightedSpectrum.uniform(group_eigenvalues(lam)))
    res = verify_commutator_bound(a, p, args.constant, tol=args.psd_tol)
    alt = verify_commutator_bound(a, p, args.constant, tol=args.psd_tol, form="adjoint")
    out = {
        "constant": args.constant,
        "eigmin": res.eigmin,
        "holds": bool(res.holds),
        "adjoint_form": {"eigmin": alt.eigmin, "holds": bool(alt.holds)},
        "pairing": _pairing_json(p),
    }
    return text, out, {"psd": res.tol}, EXIT_OK if res.holds else EXIT_VERIFY


def cmd_derivation(args):
    text = _read(args.input)
    a, _ = _normal_matrix(text)
    try:
        br = derivation_bracket(a, n_random=args.samples, seed=args.seed)
    except RuntimeError as exc:
        return text, {"error": str(exc)}, {}, EXIT_VERIFY
    return text, {"bracket": br.to_json()}, {"bracket": 1e-9}, EXIT_OK


def cmd_constants(args):
    if args.n_max < 1:
        raise io.ParseError("--n-max must be at least 1")
    rows = constants_table(args.n_max)
    if args.csv:
        Path(args.csv).write_text(constants_csv(rows), encoding="utf-8")
    return None, {"rows": rows}, {}, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized candidates (default 0)")
    common.add_argument("--tol", type=float, default=1e-9, help="verification tolerance (default 1e-9)")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="record wall time in the report")

    ap = _Parser(prog="normcomm", description="Commutator estimates for finite normal spectra.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("center", parents=[common], help="three-line center certificate")
    p.add_argument("input")
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("pair", parents=[common], help="pairing permutation with ratio >= sqrt(3)/2")
    p.add_argument("input")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("lambda", parents=[common], help="Lambda(g) by enumeration or construction")
    p.add_argument("input")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--construct", action="store_true")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("verify-matrix", parents=[common], help="commutator lower bound on a normal matrix")
    p.add_argument("input")
    p.add_argument("--constant", type=float, default=SQRT3_2)
    p.add_argument("--psd-tol", type=float, default=None,
                   help="eigenvalue tolerance (default 1e-8 (1 + ||a||_F))")
    p.set_defaults(func=cmd_verify_matrix)

    p = sub.add_parser("derivation", parents=[common], help="bracket the derivation norm")
    p.add_argument("input")
    p.add_argument("--samples", type=int, default=1000, help="random candidates for n > 8")
    p.set_defaults(func=cmd_derivation)

    p = sub.add_parser("constants", parents=[common], help="table of Lambda_n and tilde-Lambda_n")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_constants)
    return ap


def _clean(x):
    """Make a structure JSON-safe (numpy scalars, tuples, non-finite floats)."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    t = time.perf_counter()
    try:
        text, out, tols, code = args.func(args)
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Precondition as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    report = io.RunReport(
        command=args.command,
        input_digest=io.digest(text) if text is not None else None,
        outputs=_clean(out),
        tolerances=_clean(tols),
        seed=args.seed,
        wall_time=time.perf_counter() - t if args.timing else None,
    )
    doc = io.dumps(report.to_json())
    if args.out:
        Path(args.out).write_text(doc, encoding="utf-8")
    else:
        sys.stdout.write(doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
