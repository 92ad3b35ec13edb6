"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 dimension
mismatch, 4 violated precondition.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .congruence import synthesize_generator, variety_of_pair, verify_generator
from .curves import check_geometric_conditions, ray_bump, segment_tent, vertex_star
from .errors import DimensionError, InconclusiveError, ParseError, PreconditionError
from .exact import fmt, to_fraction
from .tropical import (
    TropicalRational,
    canonicalize,
    func_eq_witness,
    rat_eval,
    rat_func_eq_witness,
)

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_DIM, EXIT_PRE = 0, 1, 2, 3, 4


def _read(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return io.loads(text)


def _parse(fn, data):
    try:
        return fn(data)
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed input: {exc!r}") from exc


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> int:
    f = _parse(io.rational_from_json, _read(args.function))
    x = io.point_from_text(args.point)
    _emit(args, fmt(rat_eval(f, x)))
    return EXIT_OK


def cmd_canon(args) -> int:
    d = _read(args.poly)
    if isinstance(d, dict) and "terms" in d:
        p = _parse(io.poly_from_json, d)
        _emit(args, io.dumps(io.poly_to_json(canonicalize(p))))
    else:
        f = _parse(io.rational_from_json, d)
        g = TropicalRational(canonicalize(f.num), canonicalize(f.den))
        _emit(args, io.dumps(io.rational_to_json(g)))
    return EXIT_OK


def cmd_eq(args) -> int:
    a, b = _read(args.left), _read(args.right)
    if all(isinstance(d, dict) and "terms" in d for d in (a, b)):
        p, q = _parse(io.poly_from_json, a), _parse(io.poly_from_json, b)
        if p.nvars != q.nvars:
            raise DimensionError(f"dimension mismatch: {p.nvars} vs {q.nvars}")
        same, w = func_eq_witness(p, q)
        fa, fb = TropicalRational(p), TropicalRational(q)
    else:
        fa, fb = _parse(io.rational_from_json, a), _parse(io.rational_from_json, b)
        if fa.nvars != fb.nvars:
            raise DimensionError(f"dimension mismatch: {fa.nvars} vs {fb.nvars}")
        same, w = rat_func_eq_witness(fa, fb)
    lines = ["true" if same else "false"]
    if not same:
        lines.append("witness: " + ",".join(fmt(v) for v in w))
        lines.append(f"values: {fmt(rat_eval(fa, w))} vs {fmt(rat_eval(fb, w))}")
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_variety(args) -> int:
    pair = _parse(io.pair_from_json, _read(args.pair))
    _emit(args, io.dumps(io.union_to_json(variety_of_pair(pair))))
    return EXIT_OK


def cmd_generate(args) -> int:
    V = _parse(io.union_from_json, _read(args.union))
    _emit(args, io.dumps(io.certificate_to_json(synthesize_generator(V))))
    return EXIT_OK


def cmd_verify(args) -> int:
    cert = _parse(io.certificate_from_json, _read(args.certificate))
    rep = verify_generator(cert, samples=args.samples, seed=args.seed)
    _emit(args, io.dumps(io.report_to_json(rep)))
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_curve_check(args) -> int:
    C = _parse(io.complex_from_json, _read(args.complex))
    rep = check_geometric_conditions(C)
    _emit(args, io.dumps(io.geometric_report_to_json(rep)))
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_chart(args) -> int:
    C = _parse(io.complex_from_json, _read(args.complex))
    if args.ray is not None:
        ch = ray_bump(C, args.ray)
    elif args.segment is not None:
        ch = segment_tent(C, args.segment)
    else:
        eps = to_fraction(args.eps) if args.eps is not None else None
        ch = vertex_star(C, args.vertex, eps)
    _emit(args, io.dumps(io.chart_to_json(ch)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all random sampling (default 0)")
    common.add_argument("--samples", type=int, default=1000, help="random samples for verify (default 1000)")
    common.add_argument("--out", help="write output to this path instead of stdout")

    ap = argparse.ArgumentParser(
        prog="tropcong", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a rational function at a point")
    p.add_argument("function")
    p.add_argument("--point", required=True, help="comma-separated rationals, e.g. '1/2,-3'")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("canon", parents=[common], help="functional canonical form")
    p.add_argument("poly")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("eq", parents=[common], help="decide functional equality")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("variety", parents=[common], help="vanishing locus of a pair as a polyhedral union")
    p.add_argument("pair")
    p.set_defaults(func=cmd_variety)

    p = sub.add_parser("generate", parents=[common], help="single generator certificate for a union")
    p.add_argument("union")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", parents=[common], help="check a certificate on deterministic samples")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("curve-check", parents=[common], help="geometric conditions of a curve complex")
    p.add_argument("complex")
    p.set_defaults(func=cmd_curve_check)

    p = sub.add_parser("chart", parents=[common], help="ray bump, segment tent or vertex star")
    p.add_argument("complex")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--ray", type=int)
    g.add_argument("--segment", type=int)
    g.add_argument("--vertex", type=int)
    p.add_argument("--eps", help="arm length for --vertex, as 'p/q'")
    p.set_defaults(func=cmd_chart)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.samples <= 0:
        print("error: --samples must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except (PreconditionError, InconclusiveError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
