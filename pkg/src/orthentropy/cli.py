"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation error (bad or
non-orthogonal input), 3 numerical failure (every optimizer run stalled).
"""
from __future__ import annotations

import argparse
import datetime
import math
import sys

from . import __version__, kernels
from .critical import NotStationaryError, classify_critical_point
from .entropy import entropy_bound, shannon_entropy, stationarity_residual
from .manifold import NumericalError, OptimizerConfig, multistart_search
from .matrices import (
    MatrixFormatError,
    NotOrthogonalError,
    OrthogonalMatrix,
    family_matrix,
    read_matrix,
    render_matrix,
    sylvester_hadamard,
)
from .report import catalog_report, dumps

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(s):
    x = float(s)
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return x


def _alpha_list(s):
    try:
        vals = [float(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse alpha list {s!r}") from None
    if not vals or any(not (a > 0 and math.isfinite(a)) for a in vals):
        raise argparse.ArgumentTypeError("alphas must be positive numbers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orthentropy", description="Entropy of orthogonal matrices.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    e = sub.add_parser("entropy", help="entropy report for a matrix file")
    e.add_argument("--input", required=True, metavar="FILE")
    e.add_argument("--bits", action="store_true", help="also show values in bits")

    o = sub.add_parser("optimize", help="multistart entropy ascent on O(n)")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--alpha", type=_positive_float, default=1.0)
    o.add_argument("--restarts", type=int, default=50)
    o.add_argument("--seed", type=int, required=True)
    o.add_argument("--tol", type=_positive_float, default=1e-10)
    o.add_argument("--max-iters", type=int, default=10000)
    o.add_argument("--workers", type=int, default=1)
    o.add_argument("--out", metavar="FILE")

    c = sub.add_parser("classify", help="classify a stationary point")
    c.add_argument("--input", required=True, metavar="FILE")
    c.add_argument("--step", type=_positive_float, default=1e-4)
    c.add_argument("--grad-tol", type=_positive_float, default=1e-6)

    r = sub.add_parser("residual", help="stationarity residuals for Renyi exponents")
    r.add_argument("--input", required=True, metavar="FILE")
    r.add_argument("--alpha", type=_alpha_list, required=True, metavar="LIST")

    h = sub.add_parser("hadamard", help="Sylvester-Hadamard matrix of order 2**K")
    h.add_argument("--k", type=int, required=True)
    h.add_argument("--rescale", action="store_true", help="divide by sqrt(n)")

    f = sub.add_parser("family", help="the matrix (2/n)J - I")
    f.add_argument("--n", type=int, required=True)

    b = sub.add_parser("bound", help="print n ln n")
    b.add_argument("--n", type=int, required=True)
    return p


def _load_orthogonal(path):
    return OrthogonalMatrix.validate(read_matrix(path))


def _cmd_entropy(args, out):
    rep = shannon_entropy(_load_orthogonal(args.input))
    d = rep.to_dict()
    if args.bits:
        ln2 = math.log(2)
        d["bits"] = {
            "entropy": rep.entropy / ln2,
            "bound": rep.bound / ln2,
            "deficit": rep.deficit / ln2,
            "per_row": [x / ln2 for x in rep.per_row],
        }
    out.write(dumps(d))
    return EXIT_OK


def _cmd_optimize(args, out):
    config = OptimizerConfig(
        n=args.n,
        alpha=args.alpha,
        max_iters=args.max_iters,
        grad_tol=args.tol,
        restarts=args.restarts,
        master_seed=args.seed,
    )
    catalog = multistart_search(config, workers=max(1, args.workers))
    body = dumps(catalog_report(catalog))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
        # run metadata lives beside the report so the report itself is reproducible
        meta = {
            "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "version": __version__,
            "kernel_backend": kernels.BACKEND,
            "workers": max(1, args.workers),
        }
        with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
            fh.write(dumps(meta))
    else:
        out.write(body)
    if catalog.n_stalled == len(catalog.runs):
        print("error: every optimizer run stalled", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_classify(args, out):
    rec = classify_critical_point(_load_orthogonal(args.input), grad_tol=args.grad_tol, step=args.step)
    d = rec.to_dict()
    d["label"] = rec.label
    out.write(dumps(d))
    return EXIT_OK


def _cmd_residual(args, out):
    O = _load_orthogonal(args.input)
    rows = [{"alpha": a, "max_abs": stationarity_residual(O, a).max_abs} for a in args.alpha]
    out.write(dumps({"n": O.n, "residuals": rows}))
    return EXIT_OK


def _cmd_hadamard(args, out):
    h = sylvester_hadamard(args.k)
    m = h.entries / math.sqrt(h.n) if args.rescale else h.entries
    out.write(render_matrix(m))
    return EXIT_OK


def _cmd_family(args, out):
    out.write(render_matrix(family_matrix(args.n)))
    return EXIT_OK


def _cmd_bound(args, out):
    out.write(format(entropy_bound(args.n), ".17g") + "\n")
    return EXIT_OK


_COMMANDS = {
    "entropy": _cmd_entropy,
    "optimize": _cmd_optimize,
    "classify": _cmd_classify,
    "residual": _cmd_residual,
    "hadamard": _cmd_hadamard,
    "family": _cmd_family,
    "bound": _cmd_bound,
}


def run_cli(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except (NotOrthogonalError, NotStationaryError, MatrixFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
