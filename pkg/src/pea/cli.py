"""Command-line interface: ``pea {fit,cluster,kmeans,gen,eval}``.

Exit status is 0 on success, 1 on usage errors and 2 on data errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .cluster import ClusterConfig, cluster
from .datagen import gen_motivating, screen_variance
from .errors import InvalidParameterError, PEAError
from .fit import FitConfig, fit
from .io import (
    ModelDocument,
    load_csv,
    read_labels,
    save_model,
    sniff_header,
    write_assignments,
    write_matrix,
)
from .kmeans import lloyd, worker_count
from .metrics import evaluate

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _header_flag(value: str, path) -> bool:
    if value == "auto":
        return Path(path).is_file() and sniff_header(path)
    return value == "yes"


def _add_input(p):
    p.add_argument("--input", "-i", required=True, help="input CSV (numeric columns)")
    p.add_argument("--header", choices=("auto", "yes", "no"), default="auto",
                   help="whether the first line is a header (default: auto-detect)")
    p.add_argument("--label-column", default=None,
                   help="column to drop as labels: 0-based index (negative allowed) or header name")
    p.add_argument("--seed", type=int, default=0)


def _add_fit_options(p):
    p.add_argument("--lambda", dest="lambda_lo", type=float, default=FitConfig.lambda_lo,
                   help="lower bound on inverse half-axis lengths")
    p.add_argument("--Lambda", dest="lambda_hi", type=float, default=FitConfig.lambda_hi,
                   help="upper bound on inverse half-axis lengths")
    p.add_argument("--tol", type=float, default=FitConfig.tol)
    p.add_argument("--max-iter", type=int, default=FitConfig.max_iter)
    p.add_argument("--screen-top", type=int, default=None, metavar="M",
                   help="keep only the M highest-variance columns before fitting "
                        "(a plain variance filter)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pea", description="Principal elliptical analysis: ellipsoid fitting and clustering.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("fit", help="fit one axis-aligned ellipsoid")
    _add_input(p)
    _add_fit_options(p)
    p.add_argument("--output", "-o", required=True, help="model JSON to write")

    p = sub.add_parser("cluster", help="k-ellipse clustering")
    _add_input(p)
    _add_fit_options(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--max-outer-iter", type=int, default=1000)
    p.add_argument("--n-init", type=int, default=10, help="k-means restarts for initialization")
    p.add_argument("--inner-passes", type=int, default=1)
    p.add_argument("--output", "-o", required=True, help="model JSON to write")
    p.add_argument("--assignments", default=None,
                   help="assignments CSV (default: <output stem>.assignments.csv)")

    p = sub.add_parser("kmeans", help="baseline k-means (k-means++ seeding)")
    _add_input(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--n-init", type=int, default=10)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--screen-top", type=int, default=None, metavar="M")
    p.add_argument("--output", "-o", required=True, help="assignments CSV to write")

    p = sub.add_parser("gen", help="generate a synthetic dataset")
    p.add_argument("dataset", choices=("motivating",))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-sd", type=float, default=0.3)
    p.add_argument("--output", "-o", default="-", help="CSV to write (default: stdout)")

    p = sub.add_parser("eval", help="compare two labelings (NMI, ARI, CER)")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--pred-column", default="-1", help="label column in --pred (default: last)")
    p.add_argument("--truth-column", default="-1", help="label column in --truth (default: last)")
    p.add_argument("--header", choices=("auto", "yes", "no"), default="auto")
    return parser


def _fit_config(args) -> FitConfig:
    try:
        return FitConfig(lambda_lo=args.lambda_lo, lambda_hi=args.lambda_hi,
                         max_iter=args.max_iter, tol=args.tol, seed=args.seed)
    except InvalidParameterError as exc:
        raise UsageError(f"pea {args.command}: {exc}") from None


def _load_input(args):
    X, _ = load_csv(args.input, has_header=_header_flag(args.header, args.input),
                    label_column=args.label_column)
    if getattr(args, "screen_top", None) is not None:
        X, _ = screen_variance(X, args.screen_top)
    return X


def _emit(obj):
    print(json.dumps(obj))


def _cmd_fit(args):
    cfg = _fit_config(args)
    X = _load_input(args)
    report = fit(X, cfg)
    doc = ModelDocument.from_fit(report, seed=args.seed)
    save_model(args.output, doc)
    _emit({"objective": doc.objective, "iterations": doc.iterations, "converged": doc.converged})


def _cmd_cluster(args):
    try:
        cfg = ClusterConfig(k=args.k, fit=_fit_config(args), max_outer_iter=args.max_outer_iter,
                            n_init=args.n_init, seed=args.seed, inner_passes=args.inner_passes)
    except InvalidParameterError as exc:
        raise UsageError(f"pea cluster: {exc}") from None
    X = _load_input(args)
    result = cluster(X, cfg)
    doc = ModelDocument.from_cluster(result, seed=args.seed)
    save_model(args.output, doc)
    out = Path(args.output)
    assignments = args.assignments or str(out.with_name(out.stem + ".assignments.csv"))
    write_assignments(assignments, result.model.assignments)
    _emit({"objective": doc.objective, "iterations": doc.iterations,
           "converged": doc.converged, "assignments": assignments})


def _cmd_kmeans(args):
    if args.k < 1 or args.n_init < 1 or args.max_iter < 1:
        raise UsageError("pea kmeans: -k, --n-init and --max-iter must be >= 1")
    X = _load_input(args)
    res = lloyd(X, args.k, n_init=args.n_init, max_iter=args.max_iter, seed=args.seed)
    write_assignments(args.output, res.assignments)
    _emit({"wcss": res.wcss, "iterations": res.iterations, "converged": res.converged})


def _cmd_gen(args):
    X, labels = gen_motivating(seed=args.seed, noise_sd=args.noise_sd)
    write_matrix(sys.stdout if args.output == "-" else args.output, X, labels)


def _cmd_eval(args):
    header = None if args.header == "auto" else args.header == "yes"
    pred = read_labels(args.pred, has_header=header, column=args.pred_column)
    truth = read_labels(args.truth, has_header=header, column=args.truth_column)
    _emit(evaluate(pred, truth).as_dict())


COMMANDS = {"fit": _cmd_fit, "cluster": _cmd_cluster, "kmeans": _cmd_kmeans,
            "gen": _cmd_gen, "eval": _cmd_eval}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        worker_count()  # validates PEA_THREADS up front
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except PEAError as exc:
        print(f"pea: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except PEAError as exc:
        print(f"pea: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"pea: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
