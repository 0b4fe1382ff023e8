"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input parse error,
3 matrix is not rotational, 4 mask file error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .matrix2 import (
    GateError,
    IntMatrix2,
    angle_table,
    classify_angle,
    enumerate_matrices,
    is_rotational,
    require_dilation,
    require_rotational,
)
from .quadform import ellipse_geometry, invariant_form, rationalize_form
from .refine import (
    CONVENTION,
    GridSpec,
    GridTarget,
    Mask,
    MaskFileError,
    orbit_angles,
    power_identity_residual,
    render_grid,
    verify_two_angle,
)
from .similarity import decompose

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_GATE, EXIT_MASK = 0, 1, 2, 3, 4
MAX_DEN = 64


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def dumps(obj) -> str:
    """JSON with floats at 17 significant digits; key order as given."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float {obj!r} is not valid JSON")
        return format(float(obj), ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _matrix(text: str) -> IntMatrix2:
    try:
        return IntMatrix2.parse(text)
    except ValueError as exc:
        raise _Exit(EXIT_PARSE, f"bad matrix {text!r}: {exc}") from None


def _rotational(A: IntMatrix2) -> None:
    try:
        require_rotational(A)
    except GateError as exc:
        raise _Exit(EXIT_GATE, str(exc)) from None


def _dilation(A: IntMatrix2) -> None:
    try:
        require_dilation(A)
    except GateError as exc:
        raise _Exit(EXIT_GATE, str(exc)) from None


def _mask(path: str) -> Mask:
    try:
        return Mask.load(path)
    except MaskFileError as exc:
        raise _Exit(EXIT_MASK, f"mask file {path}: {exc}") from None


def _rows(M) -> list:
    return [[v for v in row] for row in np.asarray(M).tolist()]


def analysis_report(A: IntMatrix2) -> dict:
    angle = classify_angle(A)
    rotational = is_rotational(A)
    report = {
        "matrix": list(A.entries),
        "det": A.det,
        "trace": A.trace,
        "rotational": rotational,
        "angle": {
            "kind": angle.kind.value,
            "pi_fraction": angle.pi_fraction,
            "theta_abs": angle.theta_abs,
            "theta_signed": None,
            "cos_theta_radical": angle.cos_theta_radical,
            "cos_2theta": None if angle.cos_2theta is None else str(angle.cos_2theta),
            "commensurable": angle.commensurable,
        },
        "Q": None,
        "R": None,
        "residuals": None,
        "invariant_form": None,
        "integer_form": None,
    }
    if angle.note:
        report["note"] = angle.note
    if rotational:
        d = decompose(A)
        W = invariant_form(A)
        V = rationalize_form(W, MAX_DEN)
        report["angle"]["theta_signed"] = d.theta_signed
        report["Q"] = _rows(d.Q)
        report["R"] = _rows(d.R)
        report["residuals"] = {
            "similarity": d.residual_similarity,
            "orthogonality": d.residual_orthogonality,
        }
        report["invariant_form"] = _rows(W.matrix)
        report["integer_form"] = None if V is None else _rows(V)
    return report


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".10g")
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return "-" if v is None else str(v)


def cmd_analyze(args, out) -> int:
    report = analysis_report(_matrix(args.matrix))
    if args.json:
        print(dumps(report), file=out)
        return EXIT_OK
    angle = report.pop("angle")
    residuals = report.pop("residuals") or {}
    for key, value in report.items():
        print(f"{key:>24}: {_fmt(value)}", file=out)
    for key, value in angle.items():
        print(f"{'angle.' + key:>24}: {_fmt(value)}", file=out)
    for key, value in residuals.items():
        print(f"{'residual.' + key:>24}: {_fmt(value)}", file=out)
    return EXIT_OK


def cmd_table(args, out) -> int:
    if args.det_max < 1 or args.trace_max < 0:
        raise _Exit(EXIT_PARSE, "need --det-max >= 1 and --trace-max >= 0")
    rows = angle_table(args.det_max, args.trace_max)
    if args.csv:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["det", "trace", "angle_kind", "angle_exact", "angle_radians", "commensurable"])
        for row in rows:
            theta = row.angle.theta_abs if row.applicable else None
            comm = row.angle.commensurable if row.applicable else None
            writer.writerow([
                row.delta, row.tau, row.kind_label, row.exact_label,
                "" if theta is None else format(theta, ".17g"),
                "" if comm is None else str(comm).lower(),
            ])
        return EXIT_OK
    taus = sorted({r.tau for r in rows})
    cells = {(r.delta, r.tau): r.exact_label for r in rows}
    width = max(len(c) for c in cells.values()) + 2
    print(f"{'':>8}" + "".join(f"{'tr=' + str(t):>{width}}" for t in taus), file=out)
    for delta in sorted({r.delta for r in rows}):
        line = "".join(f"{cells[(delta, t)]:>{width}}" for t in taus)
        print(f"{'det=' + str(delta):>8}" + line, file=out)
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    if args.bound < 1:
        raise _Exit(EXIT_PARSE, "--bound must be >= 1")
    mats = [list(M.entries) for M in enumerate_matrices(args.det, args.trace, args.bound)]
    if args.json:
        print(dumps(mats), file=out)
    else:
        for m in mats:
            print("{},{};{},{}".format(*m), file=out)
    return EXIT_OK


def cmd_ellipse(args, out) -> int:
    A = _matrix(args.matrix)
    _rotational(A)
    if not args.level > 0:
        raise _Exit(EXIT_PARSE, f"--level must be positive, got {args.level}")
    W = invariant_form(A)
    geom = ellipse_geometry(W, args.level)
    V = rationalize_form(W, MAX_DEN)
    report = {
        "matrix": list(A.entries),
        "level": geom.level,
        "semi_major": geom.semi_major,
        "semi_minor": geom.semi_minor,
        "orientation": geom.orientation,
        "circle": geom.is_circle,
        "invariant_form": _rows(W.matrix),
        "integer_form": None if V is None else _rows(V),
    }
    if args.json:
        print(dumps(report), file=out)
    else:
        for key, value in report.items():
            print(f"{key:>15}: {_fmt(value)}", file=out)
    return EXIT_OK


def cmd_orbit(args, out) -> int:
    A = _matrix(args.matrix)
    _rotational(A)
    if args.n < 1:
        raise _Exit(EXIT_PARSE, "-n must be >= 1")
    orbit = orbit_angles(decompose(A).theta_signed, args.n)
    if args.csv:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["j", "angle_radians", "angle_degrees"])
        for j, t in enumerate(orbit.angles, start=1):
            writer.writerow([j, format(t, ".17g"), format(math.degrees(t), ".17g")])
    else:
        for j, t in enumerate(orbit.angles, start=1):
            print(f"{j:>6}  {t:.10f}  {math.degrees(t):14.10f}", file=out)
    return EXIT_OK


def write_pgm(path: Path, values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(values.min()), float(values.max())
    if hi > lo:
        scaled = np.rint((values - lo) / (hi - lo) * 255.0)
    else:
        scaled = np.zeros_like(values)
    n_rows, n_cols = values.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{n_cols} {n_rows}\n255\n".encode("ascii"))
        fh.write(scaled.astype(np.uint8).tobytes())
    return lo, hi


def cmd_render(args, out) -> int:
    A = _matrix(args.matrix)
    try:
        grid = GridSpec(args.grid, args.extent, GridTarget(args.mode))
    except ValueError as exc:
        raise _Exit(EXIT_PARSE, str(exc)) from None
    if args.depth < 1:
        raise _Exit(EXIT_PARSE, "--depth must be >= 1")
    _dilation(A)
    mask = _mask(args.mask)
    values = render_grid(mask, A, grid, args.depth)
    path = Path(args.out)
    lo, hi = write_pgm(path, values)
    sidecar = {
        "matrix": list(A.entries),
        "mode": grid.target.value,
        "n": grid.n,
        "extent": grid.extent,
        "depth": args.depth,
        "min": lo,
        "max": hi,
        "row_axis": "xi2" if grid.target is GridTarget.FREQUENCY_MAGNITUDE else "x2",
    }
    path.with_suffix(".json").write_text(dumps(sidecar) + "\n")
    print(f"wrote {path} ({grid.n}x{grid.n}, min={lo:.10g}, max={hi:.10g})", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    A = _matrix(args.matrix)
    if args.jprime < 1 or args.samples < 1 or args.depth < 1:
        raise _Exit(EXIT_PARSE, "--jprime, --samples and --depth must be >= 1")
    _dilation(A)
    mask = _mask(args.mask)
    two_angle = verify_two_angle(
        mask, A, args.jprime, args.samples, args.seed, args.depth,
        tail_correction=not args.no_tail_correction,
    )
    power = power_identity_residual(A, args.jprime)
    ok = two_angle <= args.tol and power <= args.tol
    print(f"convention: {CONVENTION}", file=out)
    print(f"tail correction: {'off' if args.no_tail_correction else 'first-order phase'}", file=out)
    print(f"two-angle max residual: {two_angle:.10g}", file=out)
    print(f"power identity residual: {power:.10g}", file=out)
    print(f"tolerance: {args.tol:.10g}  ->  {'PASS' if ok else 'FAIL'}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isodil", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full analysis of one matrix")
    p.add_argument("matrix", help='matrix as "a,b;c,d"')
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table", help="rotation angles by determinant and trace")
    p.add_argument("--det-max", type=int, default=5)
    p.add_argument("--trace-max", type=int, default=4)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("enumerate", help="integer matrices with given det and trace")
    p.add_argument("--det", type=int, required=True)
    p.add_argument("--trace", type=int, required=True)
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("ellipse", help="invariant ellipse of a matrix")
    p.add_argument("matrix")
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ellipse)

    p = sub.add_parser("orbit", help="rotation orbit j*theta mod 2pi")
    p.add_argument("matrix")
    p.add_argument("-n", type=int, default=16)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("render", help="render phi_hat or phi to a PGM image")
    p.add_argument("matrix")
    p.add_argument("--mask", required=True)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--extent", type=float, default=4 * math.pi)
    p.add_argument("--depth", type=int, default=40)
    p.add_argument("--mode", choices=[t.value for t in GridTarget], default="freq")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="check the two-angle identity numerically")
    p.add_argument("matrix")
    p.add_argument("--mask", required=True)
    p.add_argument("--jprime", type=int, default=1)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=40)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--no-tail-correction", action="store_true",
                   help="use the plain truncated product for phi_hat")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except _Exit as exc:
        print(f"isodil: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
