"""Command-line front end: ``cayleyspin {coeffs,verify,bench,table}``.

Exit codes: 0 success, 1 verification failures, 2 usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from . import _precise, coeffs, verify
from .errors import ZeroAxis
from .spin_core import Axis, SpinLabel, axis_contraction, axis_contraction_acb

SCHEMA_VERSION = "1"

log = logging.getLogger("cayleyspin")


@dataclass
class OutputRecord:
    command: str
    inputs: dict[str, Any]
    rows: list[dict[str, Any]] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION


class UsageError(Exception):
    pass


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


def render(record: OutputRecord, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(asdict(record), indent=2) + "\n"
    rows = record.rows
    if record.command == "table":
        rows = [
            {"j": row["j"], "m": m, "magnitude": v} for row in rows for m, v in enumerate(row["magnitudes"])
        ]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        header = list(rows[0])
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(row[h]) for h in header])
    return buf.getvalue()


def _spin_from_args(args) -> SpinLabel:
    if args.two_j is not None:
        if args.two_j < 0:
            raise UsageError(f"--two-j must be >= 0, got {args.two_j}")
        return SpinLabel(args.two_j)
    try:
        return SpinLabel.parse(args.spin)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _tolerances(args) -> verify.ToleranceConfig:
    try:
        return verify.ToleranceConfig(
            rel_matrix_tol=args.rel_matrix_tol,
            unitarity_tol=args.unitarity_tol,
            quad_tol=args.quad_tol,
            quad_cutoff_base=args.quad_cutoff_base,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_coeffs(args) -> OutputRecord:
    j = _spin_from_args(args)
    inputs: dict[str, Any] = {"two_j": j.two_j, "spin": str(j), "form": args.form}
    if args.form == "cfz":
        if args.theta is None:
            raise UsageError("--form cfz needs --theta")
        inputs["theta"] = args.theta
        values = coeffs.cfz_coefficients(j, args.theta).values
        rows = [{"k": k, "cfz": v} for k, v in enumerate(values)]
    else:
        if args.alpha is None:
            raise UsageError("--form cayley needs --alpha")
        inputs["alpha"] = args.alpha
        cs = coeffs.resolvent_coefficients(j, args.alpha)
        rows = [
            {"k": k, "resolvent": b, "cayley": a}
            for k, (b, a) in enumerate(zip(cs.resolvent_values, cs.cayley_values))
        ]
    return OutputRecord("coeffs", inputs, rows)


def cmd_verify(args) -> tuple[OutputRecord, int]:
    if args.max_two_j < 0:
        raise UsageError(f"--max-two-j must be >= 0, got {args.max_two_j}")
    if args.axes < 1:
        raise UsageError(f"--axes must be >= 1, got {args.axes}")
    cfg = _tolerances(args)
    sweep = verify.SweepGrid(axes=tuple(verify.random_axes(args.axes, args.seed)), seed=args.seed)
    reports = []
    for two_j in range(args.max_two_j + 1):
        batch = verify.run_identity_suite(SpinLabel(two_j), cfg, sweep)
        failed = sum(not r.passed for r in batch)
        log.info("two_j=%d: %d checks, %d failed", two_j, len(batch), failed)
        reports += batch
    inputs = {"max_two_j": args.max_two_j, "axes": args.axes, "seed": args.seed, "tolerances": asdict(cfg)}
    record = OutputRecord("verify", inputs, [r.to_dict() for r in reports])
    return record, 0 if all(r.passed for r in reports) else 1


def _median_seconds(fn: Callable[[], Any], reps: int) -> tuple[float, Any]:
    times = []
    result = None
    for _ in range(reps):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times), result


def _horner_f64(c: Sequence[float], x: np.ndarray) -> np.ndarray:
    eye = np.eye(x.shape[0])
    r = c[-1] * eye
    for ck in reversed(c[:-1]):
        r = r @ x + ck * eye
    return r


def cmd_bench(args) -> OutputRecord:
    if not args.two_j:
        raise UsageError("--two-j needs at least one value")
    if any(v < 0 for v in args.two_j):
        raise UsageError("--two-j values must be >= 0")
    if args.reps < 1:
        raise UsageError(f"--reps must be >= 1, got {args.reps}")
    try:
        axis = Axis.from_vector(args.axis)
    except ZeroAxis as exc:
        raise UsageError(str(exc)) from None
    alpha, theta = args.alpha, args.theta
    rows = []
    for two_j in args.two_j:
        j = SpinLabel(two_j)
        cayley_exact = coeffs.cayley_exact(j, Fraction(alpha))
        with _precise.workprec():
            x_acb = axis_contraction_acb(j, axis, 2j)
            cayley_w = [_precise.to_acb(c) for c in cayley_exact]
            cfz_w = coeffs.cfz_weights_acb(j, theta)

        def run_cayley():
            with _precise.workprec():
                return _precise.array_from_acb(_precise.matrix_horner(cayley_w, x_acb))

        def run_cfz():
            with _precise.workprec():
                return _precise.array_from_acb(_precise.matrix_horner(cfz_w, x_acb))

        x64 = 2j * axis_contraction(j, axis)
        cayley_f = coeffs.resolvent_coefficients(j, alpha).cayley_values
        cfz_f = [float(w.real) for w in cfz_w]

        t_cay, u_cay = _median_seconds(run_cayley, args.reps)
        t_lu, u_lu = _median_seconds(lambda: verify.oracle_cayley(j, alpha, axis), args.reps)
        t_cfz, u_cfz = _median_seconds(run_cfz, args.reps)
        t_eig, u_eig = _median_seconds(lambda: verify.oracle_expm(j, theta, axis), args.reps)
        t_cay64, u_cay64 = _median_seconds(lambda: _horner_f64(cayley_f, x64), args.reps)
        t_cfz64, u_cfz64 = _median_seconds(lambda: _horner_f64(cfz_f, x64), args.reps)

        cay_res = verify.max_abs(u_cay - u_lu)
        cfz_res = verify.max_abs(u_cfz - u_eig)
        for method, seconds, residual in (
            ("cayley_polynomial", t_cay, cay_res),
            ("lu_inversion", t_lu, cay_res),
            ("cfz_polynomial", t_cfz, cfz_res),
            ("eig_exponential", t_eig, cfz_res),
            ("cayley_horner_f64", t_cay64, verify.max_abs(u_cay64 - u_lu)),
            ("cfz_horner_f64", t_cfz64, verify.max_abs(u_cfz64 - u_eig)),
        ):
            rows.append({"two_j": two_j, "method": method, "median_seconds": seconds, "residual": residual})
    inputs = {"two_j": list(args.two_j), "reps": args.reps, "alpha": alpha, "theta": theta, "axis": list(axis.as_tuple())}
    return OutputRecord("bench", inputs, rows)


def cmd_table(args) -> OutputRecord:
    if args.max_j < 0:
        raise UsageError(f"--max-j must be >= 0, got {args.max_j}")
    rows = []
    for jj in range(args.max_j + 1):
        mags = coeffs.central_factorial_magnitudes(SpinLabel(2 * jj))
        rows.append({"j": jj, "magnitudes": [str(v) for v in mags]})
    return OutputRecord("table", {"max_j": args.max_j}, rows)


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--format", choices=("json", "csv"), default=default("json"))
    p.add_argument("--output", default=default(None), help="write here instead of standard output")
    p.add_argument("--rel-matrix-tol", type=float, default=default(1e-9))
    p.add_argument("--unitarity-tol", type=float, default=default(1e-10))
    p.add_argument("--quad-tol", type=float, default=default(1e-6))
    p.add_argument("--quad-cutoff-base", type=float, default=default(40.0))
    p.add_argument("-v", "--verbose", action="store_true", default=default(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cayleyspin", description="Spin-j rotation polynomials in exponential and Cayley form."
    )
    _add_common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="tabulate A_k or B_k/C_k for k = 0..2j")
    spin = p.add_mutually_exclusive_group(required=True)
    spin.add_argument("--two-j", type=int)
    spin.add_argument("--spin", help='spin as "3/2", "1.5" or "2"')
    p.add_argument("--form", choices=("cfz", "cayley"), required=True)
    p.add_argument("--theta", type=float)
    p.add_argument("--alpha", type=float)

    p = sub.add_parser("verify", parents=[common], help="run the identity suite for two_j = 0..max")
    p.add_argument("--max-two-j", type=int, default=25)
    p.add_argument("--axes", type=int, default=20, help="number of random axes")
    p.add_argument("--seed", type=int, default=2024)

    p = sub.add_parser("bench", parents=[common], help="time polynomial forms against direct methods")
    p.add_argument("--two-j", type=int, nargs="+", required=True)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--alpha", type=float, default=0.7)
    p.add_argument("--theta", type=float, default=1.3)
    p.add_argument("--axis", type=float, nargs=3, default=(1.0, 2.0, 2.0))

    p = sub.add_parser("table", parents=[common], help="central factorial magnitudes for integer j")
    p.add_argument("--max-j", type=int, required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    status = 0
    try:
        if args.command == "coeffs":
            record = cmd_coeffs(args)
        elif args.command == "verify":
            record, status = cmd_verify(args)
        elif args.command == "bench":
            record = cmd_bench(args)
        else:
            record = cmd_table(args)
    except UsageError as exc:
        parser.error(str(exc))
    text = render(record, args.format)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
