"""Command-line interface.

Exit codes: 0 success or PASS, 1 INDETERMINATE or failed relation check,
2 FAIL, 64 usage error, 70 numeric failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .certifier import (
    DEFAULT_MARGIN,
    DEFAULT_SAMPLES,
    AxisCase,
    a0_axis,
    axis_invariance_residual,
    certify,
    tstar,
    two_eigenvalue_residual,
)
from .errors import OutOfRangeParameter, Pu31Error
from .isometry import classify, trace_data
from .modular import (
    HALF_PI,
    ModuliPoint,
    Word,
    build_generators,
    evaluate_word,
    verify_relations,
)

EX_USAGE = 64
EX_SOFTWARE = 70
SCAN_HEADER = "alpha,beta,trace_re,trace_im,sigma,holy,class"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EX_USAGE)


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"{text} must be positive")
        return v
    return conv


def _at_least(n):
    def conv(text):
        v = int(text)
        if v < n:
            raise argparse.ArgumentTypeError(f"{text} must be at least {n}")
        return v
    return conv


def _word(text):
    try:
        return Word.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pu31", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, point=True, family=True):
        if family:
            sp.add_argument("--family", choices=["012", "122"], default="012")
        if point:
            sp.add_argument("--alpha", type=float, required=True)
            sp.add_argument("--beta", type=float, required=True)
        sp.add_argument("--degrees", action="store_true", help="angles are given in degrees")
        sp.add_argument("--out", default="-", help="output file, '-' for stdout")

    sp = sub.add_parser("verify-relations", help="check the group relations at a point")
    common(sp)
    sp.add_argument("--tol", type=_positive(float), default=1e-10)

    sp = sub.add_parser("classify", help="classify the image of a word or generator")
    common(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--word", type=_word, help="run-length word 'm1,n1;m2,n2;...'")
    g.add_argument("--generator", choices=["A0", "A1", "A2"])
    sp.add_argument("--tol", type=_positive(float), default=1e-8)

    sp = sub.add_parser("scan", help="trace data and type of a word over the parameter square")
    common(sp, point=False)
    sp.add_argument("--word", type=_word, required=True)
    sp.add_argument("--grid", type=_at_least(2), default=64)
    sp.add_argument("--tol", type=_positive(float), default=1e-8)
    sp.add_argument("--jobs", type=_at_least(1), default=1)

    sp = sub.add_parser("axis", help="invariant line of A0 (family 012)")
    common(sp, family=False)

    sp = sub.add_parser("certify", help="sampled chain-disjointness certificate (family 012)")
    common(sp, family=False)
    sp.add_argument("--samples", type=_at_least(9), default=DEFAULT_SAMPLES)
    sp.add_argument("--margin", type=_positive(float), default=DEFAULT_MARGIN)

    sp = sub.add_parser("locus", help="two-eigenvalue residual of A0 over the parameter square")
    common(sp, point=False, family=False)
    sp.add_argument("--grid", type=_at_least(2), default=64)
    return p


def _point(args, family=None) -> ModuliPoint:
    a, b = args.alpha, args.beta
    if args.degrees:
        a, b = math.radians(a), math.radians(b)
    try:
        return ModuliPoint(family or args.family, a, b)
    except OutOfRangeParameter as exc:
        raise UsageError(str(exc)) from exc


def _grid(n: int) -> np.ndarray:
    g = np.linspace(0.0, HALF_PI, n)
    g[-1] = HALF_PI
    return g


def cmd_verify(args, out) -> int:
    rep = verify_relations(build_generators(_point(args)), args.tol)
    for name, r in rep.residuals.items():
        out.write(f"{name}: {r:.3e}\n")
    for note in rep.notes:
        out.write(f"note: {note}\n")
    out.write(f"verdict={'PASS' if rep.passed else 'FAIL'}\n")
    return 0 if rep.passed else 1


def cmd_classify(args, out) -> int:
    gen = build_generators(_point(args))
    if args.generator:
        M = getattr(gen, args.generator)
    else:
        M = evaluate_word(gen, args.word or Word.of(1, 1))
    c = classify(M, args.tol)
    out.write(c.label + "\n")
    return 0


def _scan_cell(family: str, alpha: float, beta: float, word: Word, tol: float) -> str:
    head = f"{fmt(alpha)},{fmt(beta)}"
    try:
        M = evaluate_word(build_generators(ModuliPoint(family, alpha, beta)), word)
        td = trace_data(M)
    except (Pu31Error, np.linalg.LinAlgError):
        return f"{head},indeterminate,indeterminate,indeterminate,indeterminate,indeterminate"
    try:
        label = classify(M, tol).label
    except (Pu31Error, np.linalg.LinAlgError, ValueError):
        label = "indeterminate"
    vals = (td.tau.real, td.tau.imag, td.sigma, td.holy)
    cells = [fmt(v) if math.isfinite(v) else "indeterminate" for v in vals]
    return ",".join([head, *cells, label])


def _scan_row(task) -> list:
    family, alpha, betas, word, tol = task
    return [_scan_cell(family, alpha, b, word, tol) for b in betas]


def scan_rows(family: str, word: Word, grid: int, tol: float = 1e-8, jobs: int = 1) -> list:
    """CSV lines (without header), alpha-major then beta."""
    g = _grid(grid)
    tasks = [(family, float(a), [float(b) for b in g], word, tol) for a in g]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_row, tasks))
    else:
        rows = [_scan_row(t) for t in tasks]
    return [line for row in rows for line in row]


def cmd_scan(args, out) -> int:
    out.write(SCAN_HEADER + "\n")
    for line in scan_rows(args.family, args.word, args.grid, args.tol, args.jobs):
        out.write(line + "\n")
    return 0


def cmd_axis(args, out) -> int:
    point = _point(args, "012")
    axis = a0_axis(point)
    out.write(f"case={axis.case.value}\n")
    out.write(f"locus_residual={fmt(axis.locus_residual)}\n")
    if axis.case is AxisCase.INVARIANT_LINE:
        out.write(f"y1={fmt(axis.y)}\nx2={fmt(axis.x)}\nx2_imag={fmt(axis.x_imag)}\n")
        out.write(f"invariance_residual={fmt(axis_invariance_residual(point, axis))}\n")
        out.write(f"tstar={fmt(tstar(point, axis))}\n")
    else:
        polar = ";".join(f"{fmt(z.real)}{z.imag:+.17g}j" for z in axis.polar)
        out.write(f"polar={polar}\n")
    return 0


def cmd_certify(args, out) -> int:
    rep = certify(_point(args, "012"), args.samples, args.margin)
    out.write(f"alpha={fmt(rep.point.alpha)}\nbeta={fmt(rep.point.beta)}\n")
    out.write(f"samples={rep.samples}\nmargin={fmt(rep.margin)}\n")
    for name, v in rep.preconditions.items():
        out.write(f"precondition.{name}={fmt(v)}\n")
    for name, c in rep.checks.items():
        lam, mu = c.arg_min
        out.write(f"check.{name}.min_margin={fmt(c.min_margin)}\n")
        out.write(f"check.{name}.arg_min={fmt(lam)},{fmt(mu)}\n")
    for name, v in rep.diagnostics.items():
        out.write(f"diagnostic.{name}={fmt(v)}\n")
    out.write(f"verdict={rep.verdict.value}\n")
    if rep.reason:
        out.write(f"reason={rep.reason}\n")
    return rep.verdict.exit_code


def cmd_locus(args, out) -> int:
    g = _grid(args.grid)
    out.write("alpha,beta,residual\n")
    for a in g:
        for b in g:
            out.write(f"{fmt(a)},{fmt(b)},{fmt(two_eigenvalue_residual(a, b))}\n")
    return 0


COMMANDS = {
    "verify-relations": cmd_verify,
    "classify": cmd_classify,
    "scan": cmd_scan,
    "axis": cmd_axis,
    "certify": cmd_certify,
    "locus": cmd_locus,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except UsageError as exc:
        sys.stderr.write(f"pu31: error: {exc}\n")
        return EX_USAGE
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"pu31: numeric failure: {type(exc).__name__}: {exc}\n")
        return EX_SOFTWARE
    text = buf.getvalue()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return code
