"""Command-line interface: ``weighted-stars <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from weighted_stars.enumerate import EnumQuery, count_affine, enumerate_affine
from weighted_stars.exact import bareiss_determinant
from weighted_stars.report import emit_dot, render_table, verify_paper_tables
from weighted_stars.star import (DEFAULT_THRESHOLD, AffineSolution, MatrixClass, StarShape,
                                 build_star_matrix, classify, determinant_closed, dimension,
                                 schur_scalar, tau_decompose, tau_product)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _arm_list(text: str) -> list[int]:
    try:
        arms = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"arm list must be comma-separated integers: {text!r}")
    if any(r < 1 for r in arms):
        raise argparse.ArgumentTypeError(f"arm lengths must be positive: {text!r}")
    return arms


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _m_value(text: str) -> int:
    v = _positive(text)
    if v < 2:
        raise argparse.ArgumentTypeError(f"m must be at least 2, got {v}")
    return v


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _shape(args) -> StarShape:
    try:
        return StarShape(args.k, args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _affine_from_arms(arms: Sequence[int]) -> AffineSolution:
    total = sum(Fraction(1, r + 1) for r in arms)
    if total.denominator != 1 or len(arms) < 2:
        raise UsageError(f"arms {','.join(map(str, arms))} are not affine: "
                         f"sum of 1/(r+1) is {_fmt(total)}, not an integer")
    return AffineSolution.from_arms(arms, int(total))


def cmd_classify(args, out) -> int:
    shape = _shape(args)
    kind = classify(shape)
    line = f"{kind.value} (S = {_fmt(schur_scalar(shape))}), D = {dimension(shape)}"
    if kind is MatrixClass.INDEFINITE:
        line += ", one negative eigenvalue"
    print(line, file=out)
    return 0


def cmd_det(args, out) -> int:
    shape = _shape(args)
    det = determinant_closed(shape)
    print(det, file=out)
    if args.oracle:
        oracle = bareiss_determinant(build_star_matrix(shape, args.threshold))
        print(f"oracle: {oracle}", file=sys.stderr)
        if oracle != det:
            print("error: closed form disagrees with elimination", file=sys.stderr)
            return 1
    return 0


def cmd_labels(args, out) -> int:
    shape = _shape(args)
    sol = AffineSolution(shape)
    labels = sol.labels
    if args.format == "json":
        doc = {
            "type": str(sol),
            "k": shape.k,
            "arms": list(shape.arms),
            "D": str(sol.D),
            "s": str(sol.s),
            "h": str(sol.h),
            "x": [str(v) for v in sol.x],
            "center": str(labels.center),
            "arm_labels": [[str(v) for v in arm] for arm in labels.arm_labels],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    elif args.format == "text":
        print(f"{sol}  D = {sol.D}  s = {sol.s}  h = {sol.h}", file=out)
        print(f"x = ({','.join(map(str, sol.x))})[{sol.s}]", file=out)
        for i, arm in enumerate(labels.arm_labels, start=1):
            print(f"arm {i}: {' '.join(map(str, arm))}", file=out)
        print(f"center: {labels.center}", file=out)
    else:
        out.write(render_table([sol], args.format))
    return 0


def cmd_enumerate(args, out) -> int:
    q = EnumQuery(args.m, args.p, d_max=args.dmax, limit=args.limit, count_only=args.count_only)
    result = enumerate_affine(q, workers=args.workers)
    if result.diagnostic:
        print(result.diagnostic, file=sys.stderr)
    if args.count_only:
        print(result.total, file=out)
        return 0
    out.write(render_table(result.solutions, args.format))
    print(f"{len(result)} of {result.total} solutions", file=sys.stderr)
    return 0


def cmd_count(args, out) -> int:
    print(count_affine(args.m, args.p), file=out)
    return 0


def _solution_lines(sol: AffineSolution) -> str:
    return f"{sol}  k = {sol.shape.k}  D = {sol.D}  s = {sol.s}  h = {sol.h}  " \
           f"({','.join(map(str, sol.x))})[{sol.s}]"


def cmd_tau(args, out) -> int:
    if not args.r or len(args.r) < 2:
        raise UsageError("tau needs at least two -r arm lists")
    sols = [_affine_from_arms(arms) for arms in args.r]
    prod = sols[0]
    for sol in sols[1:]:
        prod = tau_product(prod, sol)
    print(_solution_lines(prod), file=out)
    return 0


def cmd_decompose(args, out) -> int:
    sol = _affine_from_arms(args.r)
    split = tau_decompose(sol)
    if split is None:
        print(f"{sol} is tau-primitive", file=out)
    else:
        print(f"{sol} = {split[0]} tau {split[1]}", file=out)
    return 0


def cmd_dot(args, out) -> int:
    out.write(emit_dot(_shape(args), with_labels=args.with_labels))
    return 0


def cmd_verify(args, out) -> int:
    report = verify_paper_tables()
    for line in report.lines():
        print(line, file=out)
    return 0 if report.ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weighted-stars",
                     description="Classify and enumerate weighted star matrices B(k; r1,...,rm).")
    parser.add_argument("--threshold", type=_positive, default=DEFAULT_THRESHOLD,
                        help="largest dimension D that may be materialized as a dense matrix "
                             "(default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def shape_args(p, k_required=True):
        p.add_argument("-k", type=_positive, required=k_required, help="central weight")
        p.add_argument("-r", type=_arm_list, required=True, help="arm lengths, e.g. 1,2,5")

    p = sub.add_parser("classify", help="finite / affine / indefinite verdict with S")
    shape_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("det", help="determinant from the closed form")
    shape_args(p)
    p.add_argument("--oracle", action="store_true",
                   help="also compute it by Bareiss elimination on the dense matrix")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("labels", help="Coxeter labels and number of an affine star")
    shape_args(p)
    p.add_argument("--format", choices=("text", "json", "csv", "tex"), default="text")
    p.set_defaults(func=cmd_labels)

    for name, func in (("enumerate", cmd_enumerate), ("count", cmd_count)):
        p = sub.add_parser(name, help="list affine stars for (m, p)" if name == "enumerate"
                           else "number of affine stars for (m, p)")
        p.add_argument("-m", type=_m_value, required=True, help="number of arms")
        p.add_argument("-p", type=_positive, required=True, help="p = m - k")
        p.set_defaults(func=func)
        if name == "enumerate":
            p.add_argument("--dmax", type=_positive, help="omit solutions with D above this")
            p.add_argument("--format", choices=("text", "csv", "json", "tex"), default="text")
            p.add_argument("--workers", type=_positive, default=None,
                           help="processes for the first search level (default: 1)")
            excl = p.add_mutually_exclusive_group()
            excl.add_argument("--limit", type=_positive, help="print at most this many rows")
            excl.add_argument("--count-only", action="store_true",
                              help="print only the untruncated total")

    p = sub.add_parser("tau", help="tau-product of affine stars given by their arms")
    p.add_argument("-r", type=_arm_list, action="append", required=True,
                   help="arm list of one factor; repeat for each factor")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("decompose", help="split an affine star into a tau-product")
    p.add_argument("-r", type=_arm_list, required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("dot", help="Graphviz DOT for the star graph")
    shape_args(p)
    p.add_argument("--with-labels", action="store_true", help="annotate Coxeter labels")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("verify", help="regenerate the reference tables and counts")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
