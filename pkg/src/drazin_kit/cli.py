"""Command-line interface: ``drazin-kit <command> ...``.

Exit codes: 0 ok, 1 usage or parse error, 2 numerical failure, 3 hypothesis
failure, 4 verification mismatch.  ``DRAZIN_KIT_TOL`` (a decimal string)
overrides the default ``eq_rtol``; ``--tol`` overrides both.
"""

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import hypotheses as hyp
from . import matrix_io as mio
from .drazin import drazin
from .errors import HypothesisViolation, NumericalError, PreconditionError, ShapeError
from .generators import FAMILIES, GenConfig, gen_instance
from .linalg import DEFAULT_TOL, Tolerance
from .verify import FORMULA_NAMES, evaluate, verify_family

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_HYPOTHESIS, EXIT_MISMATCH = 0, 1, 2, 3, 4
ENV_TOL = "DRAZIN_KIT_TOL"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the contract reserves 2 for numerics
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- formatting ---------------------------------------------------------------

def _fmt_scalar(z):
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}j"


def format_matrix(a, indent="  "):
    a = np.asarray(a)
    cells = [[_fmt_scalar(z) for z in row] for row in a]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(indent + "  ".join(c.rjust(width) for c in row) for row in cells)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return mio.matrix_to_dict(obj)
    if dataclasses.is_dataclass(obj):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def _trace_lines(trace):
    lines = []
    for key, value in _jsonable_items(trace):
        if isinstance(value, np.ndarray):
            lines.append(f"{key}:")
            lines.append(format_matrix(value))
        else:
            lines.append(f"{key}: {value}")
    return lines


def _jsonable_items(trace):
    if dataclasses.is_dataclass(trace):
        items = [(f.name, getattr(trace, f.name)) for f in dataclasses.fields(trace)]
    else:
        items = list(trace.items())
    for key, value in items:
        if isinstance(value, dict) and value and all(
            isinstance(v, np.ndarray) for v in value.values()
        ):
            for sub, mat in value.items():
                yield f"{key}.{sub}", mat
        elif dataclasses.is_dataclass(value):
            yield key, dataclasses.asdict(value)
        else:
            yield key, value


def _emit(args, doc, text):
    if args.json:
        sys.stdout.write(mio.dumps(_jsonable(doc)))
    else:
        print(text)


# -- tolerance ------------------------------------------------------------------

def resolve_tol(flag=None, environ=None):
    environ = os.environ if environ is None else environ
    eq = DEFAULT_TOL.eq_rtol
    raw = environ.get(ENV_TOL)
    if raw is not None and raw.strip():
        try:
            eq = float(raw)
        except ValueError:
            raise UsageError(f"{ENV_TOL}={raw!r} is not a decimal number") from None
    if flag is not None:
        eq = flag
    try:
        return Tolerance(rank_rtol=DEFAULT_TOL.rank_rtol, eq_rtol=eq)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands -------------------------------------------------------------------

def cmd_drazin(args, tol):
    a = mio.read_matrix(args.path)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"matrix must be square, got {a.shape[0]}x{a.shape[1]}")
    res = drazin(a, tol)
    doc = {
        "d": res.d,
        "index": res.index,
        "projector": res.projector,
        "residuals": res.residuals.as_dict(),
        "ok": res.ok,
    }
    text = "\n".join([
        f"index {res.index}",
        "drazin inverse:",
        format_matrix(res.d),
        "projector:",
        format_matrix(res.projector),
        "residuals: " + ", ".join(f"{k}={v:.3e}" for k, v in res.residuals.as_dict().items()),
    ])
    _emit(args, doc, text)
    if not res.ok:
        print(f"axiom residual {res.residuals.max():.3e} exceeds eq_rtol {tol.eq_rtol:g}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_check(args, tol):
    cset = hyp.condition_set(args.set)
    inst = mio.read_instance(args.path)
    report = hyp.check(inst, cset, tol)
    _emit(args, report.as_dict(), str(report))
    return EXIT_OK if report.passed else EXIT_HYPOTHESIS


def cmd_formula(args, tol):
    inst = mio.read_instance(args.path)
    result, trace = evaluate(args.formula, inst, tol)
    doc = {"formula": args.formula, "result": result}
    text = [f"{args.formula}:", format_matrix(result)]
    if args.trace:
        doc["trace"] = trace
        if trace is None:
            text.append("trace: (none for this formula)")
        else:
            text.append("trace:")
            text.extend(_trace_lines(trace))
    _emit(args, doc, "\n".join(text))
    return EXIT_OK


def _parse_dims(items):
    dims = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--dim expects key=value, got {item!r}")
        try:
            dims[key] = int(value)
        except ValueError:
            raise UsageError(f"--dim {key}: {value!r} is not an integer") from None
    return dims


def cmd_verify(args, tol):
    summary = verify_family(
        args.family, args.count, args.seed, tol,
        formula=args.formula, max_size=args.size, dims=_parse_dims(args.dim),
    )
    _emit(args, summary.as_dict(), str(summary))
    return EXIT_OK if summary.ok else EXIT_MISMATCH


def cmd_generate(args, tol):
    extra = {} if args.size is None else {"max_size": args.size}
    cfg = GenConfig(seed=args.seed, dims=_parse_dims(args.dim), **extra)
    inst, _ = gen_instance(cfg, args.family)
    text = mio.dumps(mio.instance_to_dict(inst))
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        mio.write_text(args.output, text)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help=f"eq_rtol for equality and hypothesis checks (env {ENV_TOL})")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="machine-readable output")
    fmt.add_argument("--table", action="store_true", help="human-readable output (default)")

    parser = _Parser(prog="drazin-kit", description="Drazin inverses and closed-form formulas.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("drazin", parents=[common], help="Drazin inverse of a matrix file")
    p.add_argument("path")
    p.set_defaults(func=cmd_drazin)

    p = sub.add_parser("check", parents=[common], help="check a hypothesis set on an instance")
    p.add_argument("path")
    p.add_argument("--set", required=True, help=f"one of: {', '.join(hyp.SET_NAMES)}")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("formula", parents=[common], help="evaluate a named formula")
    p.add_argument("path")
    p.add_argument("--formula", required=True, choices=FORMULA_NAMES, metavar="NAME",
                   help=f"one of: {', '.join(FORMULA_NAMES)}")
    p.add_argument("--trace", action="store_true", help="also print intermediate matrices")
    p.set_defaults(func=cmd_formula)

    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument("--family", required=True, choices=FAMILIES, metavar="NAME",
                       help=f"one of: {', '.join(FAMILIES)}")
    sizes.add_argument("--seed", type=int, default=0)
    sizes.add_argument("--size", type=int, default=None, help="largest random block size")
    sizes.add_argument("--dim", action="append", metavar="KEY=N",
                       help="pin a size parameter (n1, n2, m, n, ...)")

    p = sub.add_parser("verify", parents=[common, sizes], help="formula vs oracle on a family")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--formula", choices=FORMULA_NAMES, metavar="NAME", default=None,
                   help="override the family's formula")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", parents=[common, sizes], help="write a generated instance")
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code
    try:
        tol = resolve_tol(args.tol)
        return args.func(args, tol)
    except HypothesisViolation as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(str(exc.report), file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, PreconditionError, ShapeError, mio.FileFormatError, ValueError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
