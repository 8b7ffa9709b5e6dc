"""Command-line front end.

Exit codes: 0 success, 1 a REFUTED or INCONCLUSIVE verdict, 2 usage error,
3 parameter outside its domain, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import certsuite, hankel, harmonic, hypergeom
from .errors import DomainError
from .polycert import Verdict

EXIT_OK, EXIT_VERDICT, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3, 4

ACCEPTANCE_M = (0.1, 0.2, 0.3, 0.4, 0.427617, 0.45, 0.5, 0.6, 0.7213)
FORMULAS = {hankel.Branch.FIRST: "M^2/36", hankel.Branch.SECOND: "(M^2/144)(39M^2-12M+2)"}


class UsageError(Exception):
    pass


class InputError(Exception):
    """Unreadable or malformed input file."""


@dataclass
class Report:
    """A result table plus the JSON record it was built from."""

    columns: list
    rows: list
    record: object
    exit_code: int = EXIT_OK
    files: dict = field(default_factory=dict)  # extra artifacts for `report`


# ------------------------------------------------------------------ formatting


def num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _jsonable(obj):
    """Round floats to 12 significant digits and turn everything else into JSON types."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return float(f"{v:.12g}") if math.isfinite(v) else str(v)
    if isinstance(obj, Fraction):
        return num(obj)
    if isinstance(obj, complex):
        return [_jsonable(obj.real), _jsonable(obj.imag)]
    if hasattr(obj, "value"):  # enums
        return obj.value
    return obj


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(report.record), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        w.writerows([[num(v) for v in row] for row in report.rows])
        return buf.getvalue()
    cells = [list(report.columns)] + [[num(v) for v in row] for row in report.rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(report.columns))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str, path: str | None) -> None:
    text = render(report, fmt)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def parse_complex(text: str) -> complex:
    """'re,im' (or a bare real) to complex."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")


# ------------------------------------------------------------------ commands


def cmd_radius(args) -> Report:
    harmonic.ClassParams(args.alpha, args.m)
    sol = hypergeom.starlike_radius(args.alpha, args.m)
    rec = {"alpha": args.alpha, "m": args.m, "r1": sol.r1, "residual": sol.residual, "iterations": sol.iterations}
    return Report(list(rec), [list(rec.values())], rec)


def cmd_bound(args) -> Report:
    b = hankel.sharp_bound(args.m)
    rec = {"m": b.m, "branch": b.branch.value, "formula": FORMULAS[b.branch], "value": b.value,
           "extremal": b.extremal_description}
    return Report(list(rec), [list(rec.values())], rec)


MAXIMIZE_COLUMNS = ["m", "bound_formula", "bound_numeric", "argmax_p1", "argmax_p2_rho", "argmax_p2_phi", "gap"]


def maximize_rows(ms, cfg: hankel.GridConfig) -> tuple:
    rows, recs = [], []
    for m in ms:
        b = hankel.sharp_bound(m)
        res = hankel.maximize_h21(m, cfg)
        p2 = complex(res.argmax.p2)
        row = [m, FORMULAS[b.branch], b.value, res.argmax.p1, abs(p2), math.atan2(p2.imag, p2.real) % (2 * math.pi),
               res.max_abs - b.value]
        rows.append(row)
        rec = dict(zip(MAXIMIZE_COLUMNS, row))
        rec["max_abs"] = res.max_abs
        rec["argmax"] = res.argmax.to_json()
        recs.append(rec)
    return rows, recs


def cmd_maximize(args) -> Report:
    for m in args.m:
        hankel.sharp_bound(m)  # domain check before any work
    cfg = hankel.GridConfig(args.grid_p1, args.grid_rho, args.grid_phi)
    rows, recs = maximize_rows(args.m, cfg)
    return Report(MAXIMIZE_COLUMNS, rows, recs)


CLAIM_COLUMNS = ["claim_id", "kind", "value", "expected", "verdict", "note"]


def claim_rows(reports) -> list:
    rows = []
    for r in reports:
        if r.certificate is not None:
            value, expected = r.certificate.root_count, r.certificate.expected.value
        else:
            value = r.bracket.mid if r.bracket else None
            expected = "root bracket"
        rows.append([r.claim_id, r.kind.value, value, expected, r.verdict.value, r.note])
    return rows


def cmd_certify(args) -> Report:
    if args.all and args.claim:
        raise UsageError("use either --claim or --all, not both")
    if not args.all and not args.claim:
        raise UsageError("nothing to certify: give --claim ID or --all")
    try:
        reports = certsuite.run_claims(None if args.all else args.claim)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    ok = all(r.verdict is Verdict.CERTIFIED for r in reports)
    return Report(CLAIM_COLUMNS, claim_rows(reports), [r.to_json() for r in reports],
                  EXIT_OK if ok else EXIT_VERDICT)


def cmd_membership(args) -> Report:
    params = harmonic.ClassParams(args.alpha, args.m)
    try:
        f = harmonic.HarmonicPolynomialMap.load(args.input)
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as e:
        raise InputError(f"cannot read map from {args.input}: {e}") from None
    v = harmonic.check_membership(f, params, args.samples)
    coeff = harmonic.check_coefficient_bounds(f, params)
    rec = {
        "status": v.status.value,
        "max_value": v.max_value,
        "m": params.m,
        "exceedance": v.exceedance(params.m),
        "witness_theta": v.witness_theta,
        "witness_z": None if v.witness_z is None else [v.witness_z.real, v.witness_z.imag],
        "sufficient_margin": harmonic.sufficient_margin(f, params),
        "coefficient_bounds_ok": coeff.passed,
        "coefficient_failures": coeff.failures,
    }
    row = [rec["status"], rec["max_value"], rec["m"], rec["exceedance"], rec["witness_theta"],
           rec["sufficient_margin"], rec["coefficient_bounds_ok"]]
    cols = ["status", "max_value", "m", "exceedance", "witness_theta", "sufficient_margin", "coefficient_bounds_ok"]
    code = EXIT_VERDICT if v.status is harmonic.MembershipStatus.REFUTED else EXIT_OK
    return Report(cols, [row], rec, code)


def cmd_hankel(args) -> Report:
    vals = (args.a2, args.a3, args.a4)
    if args.exact:
        if any(v.imag for v in vals):
            raise UsageError("--exact needs real coefficients")
        vals = tuple(Fraction(v.real).limit_denominator(10**12) for v in vals)
    a = hankel.CoeffTriple(*vals)
    A = hankel.inverse_coeffs(a)
    g = hankel.gamma_log(a)
    G = hankel.gamma_inv(a)
    h = hankel.h21_inv(a)
    names = ("A2", "A3", "A4", "gamma1", "gamma2", "gamma3", "Gamma1", "Gamma2", "Gamma3", "H21")
    values = (*A, *g, *G, h)
    rows = [[k, _show(v), abs(v)] for k, v in zip(names, values)]
    return Report(["quantity", "value", "modulus"], rows, dict(zip(names, values)))


def _show(v):
    return f"{num(v.real)},{num(v.imag)}" if isinstance(v, complex) else v


def cmd_constants(args) -> Report:
    pc = hankel.proof_constants(args.m)
    rec = pc.to_json()
    rows = []
    for k in ("t1", "t2", "t3", "t4", "y0", "y1", "y3", "threshold"):
        rows.append([k, rec[k], pc.absent.get(k, "")])
    rows.append(["M1", pc.M1, ""])
    return Report(["constant", "value", "absent_reason"], rows, rec)


def cmd_report(args) -> Report:
    """The acceptance sweep written to a directory as CSV and JSON files."""
    out = Path(args.out)
    cfg = hankel.GridConfig(args.grid_p1, args.grid_rho, args.grid_phi)
    files = {}

    max_rows, max_recs = maximize_rows(ACCEPTANCE_M, cfg)
    files["maximize.csv"] = render(Report(MAXIMIZE_COLUMNS, max_rows, None), "csv")
    files["maximize.json"] = render(Report([], [], max_recs), "json")

    reports = certsuite.run_claims()
    files["claims.csv"] = render(Report(CLAIM_COLUMNS, claim_rows(reports), None), "csv")
    files["claims.json"] = render(Report([], [], [r.to_json() for r in reports]), "json")

    rad_rows = []
    for alpha in (0.25, 0.5, 0.75, 1.0):
        for m in (0.25, 0.5, 1.0, 2.0):
            s = hypergeom.starlike_radius(alpha, m)
            closed = 1 - math.exp(-1 / (2 * m)) if alpha == 1.0 else None
            rad_rows.append([alpha, m, s.r1, s.residual, closed])
    files["radius.csv"] = render(Report(["alpha", "m", "r1", "residual", "closed_form"], rad_rows, None), "csv")

    lo, hi = certsuite.threshold_bracket()
    m3 = certsuite.find_m3()
    const_rows = [["threshold_lo", lo], ["threshold_hi", hi], ["m3_lo", m3.lo], ["m3_hi", m3.hi]]
    files["constants.csv"] = render(Report(["quantity", "value"], const_rows, None), "csv")

    witness, bound = hankel.small_m_witness()
    worst_gap = max(r[-1] for r in max_rows)
    summary = {
        "claims": certsuite.summarize(reports),
        "refuted_claims": [r.claim_id for r in reports if r.verdict is not Verdict.CERTIFIED],
        "maximize_max_gap": worst_gap,
        "small_m_witness": {"m": "1/10", "p1": "1/4", "p2": -1, "abs_h21": witness, "m2_over_36": bound,
                            "exceeds": witness > bound},
        "threshold_bracket": [lo, hi],
        "m3_bracket": [m3.lo, m3.hi],
    }
    files["summary.json"] = render(Report([], [], summary), "json")

    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text)
    rows = [[name, len(text)] for name, text in files.items()]
    code = EXIT_OK if summary["claims"]["all_certified"] else EXIT_VERDICT
    return Report(["file", "bytes"], rows, {"out": str(out), "files": sorted(files)}, code, files)


# ------------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--output", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    p = _Parser(prog="harmhankel", description="Verification toolkit for the D0_H(alpha, M) and P(M) results.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("radius", parents=[common], help="starlikeness radius r1")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--m", type=float, required=True)
    s.set_defaults(func=cmd_radius)

    s = sub.add_parser("bound", parents=[common], help="sharp |H21| bound")
    s.add_argument("--m", type=float, required=True)
    s.set_defaults(func=cmd_bound)

    grids = argparse.ArgumentParser(add_help=False)
    grids.add_argument("--grid-p1", type=int, default=512)
    grids.add_argument("--grid-rho", type=int, default=256)
    grids.add_argument("--grid-phi", type=int, default=512)

    s = sub.add_parser("maximize", parents=[common, grids], help="brute-force max of |H21|")
    s.add_argument("--m", type=float, nargs="+", required=True)
    s.set_defaults(func=cmd_maximize)

    s = sub.add_parser("certify", parents=[common], help="run ledger claims")
    s.add_argument("--claim", action="append", default=[], metavar="ID")
    s.add_argument("--all", action="store_true")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("membership", parents=[common], help="sampled membership test")
    s.add_argument("--input", required=True, metavar="FILE")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--m", type=float, required=True)
    s.add_argument("--samples", type=int, default=4096)
    s.set_defaults(func=cmd_membership)

    s = sub.add_parser("hankel", parents=[common], help="coefficient functionals of (a2, a3, a4)")
    for name in ("--a2", "--a3", "--a4"):
        s.add_argument(name, type=parse_complex, required=True, metavar="RE,IM")
    s.add_argument("--exact", action="store_true", help="rational arithmetic (real inputs only)")
    s.set_defaults(func=cmd_hankel)

    s = sub.add_parser("constants", parents=[common], help="case-analysis constants at M")
    s.add_argument("--m", type=float, required=True)
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("report", parents=[common, grids], help="full acceptance sweep to a directory")
    s.add_argument("--out", required=True, metavar="DIR")
    s.set_defaults(func=cmd_report)
    return p


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return int(e.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        report = args.func(args)
        emit_report(report, args.format, args.output)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, InputError) as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    return report.exit_code


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
