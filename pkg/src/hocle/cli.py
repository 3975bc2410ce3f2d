"""Command line interface: ``hocle {ensemble,base,fuse,eval}``.

Exit status: 0 success, 1 usage or configuration error, 2 data error,
3 numerical non-convergence (artifacts are still written).
"""

import argparse
import json
import logging
import os
import sys

from .base_clustering import generate_ensemble
from .dataset import load_labels, load_matrix
from .exceptions import ConfigError, DataError, HocleError
from .metrics import accuracy, nmi
from .pipeline import (RunConfig, StageError, export_matrix, run_fusion,
                       run_pipeline)

log = logging.getLogger("hocle")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NONCONVERGED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _optimizer_flags(p):
    p.add_argument("--seed", type=int)
    p.add_argument("--orders", help="comma separated subset of 1,2c,2p,m")
    p.add_argument("--lambda0", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--proj-iter", dest="proj_iter", type=int)
    p.add_argument("--repeats", type=int)
    p.add_argument("--labels")
    p.add_argument("--config", help="JSON file of flat key/value settings")
    p.add_argument("--jobs", type=int)


def build_parser():
    parser = _Parser(prog="hocle", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("ensemble", help="run the full pipeline on a data file")
    p.add_argument("--data")
    p.add_argument("--clusters", type=int)
    p.add_argument("--members", type=int)
    p.add_argument("--format", choices=["csv", "ws"])
    p.add_argument("--out")
    _optimizer_flags(p)

    p = sub.add_parser("base", help="write base co-association matrices")
    p.add_argument("--data", required=True)
    p.add_argument("--clusters", type=int, required=True)
    p.add_argument("--members", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "ws"], default="csv")
    p.add_argument("--out", required=True)

    p = sub.add_parser("fuse", help="fuse precomputed co-association CSVs")
    p.add_argument("--matrices", required=True)
    p.add_argument("--clusters", type=int)
    p.add_argument("--out")
    _optimizer_flags(p)

    p = sub.add_parser("eval", help="score predicted labels against truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    return parser


_NOT_CONFIG = {"command", "verbose", "config", "matrices"}


def resolve_config(args):
    """Merge defaults < config file < flags into a :class:`RunConfig`."""
    settings = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
        if not isinstance(doc, dict):
            raise ConfigError("config file must hold a JSON object")
        settings.update({k.replace("-", "_"): v for k, v in doc.items()})
    for key, value in vars(args).items():
        if key not in _NOT_CONFIG and value is not None:
            settings[key] = value
    config = RunConfig.from_mapping(settings)
    if not config.out:
        raise ConfigError("--out is required")
    return config.validate()


def _cmd_ensemble(args):
    config = resolve_config(args)
    if not config.data:
        raise ConfigError("--data is required")
    report = run_pipeline(config)
    return _report_exit(report)


def _cmd_fuse(args):
    config = resolve_config(args)
    report = run_fusion(config, args.matrices)
    return _report_exit(report)


def _report_exit(report):
    summary = report.summary
    if "acc_mean" in summary:
        print(f"acc={summary['acc_mean']:.6f} nmi={summary['nmi_mean']:.6f}")
    if not report.converged:
        log.warning("numerical non-convergence; see report.json")
        return EXIT_NONCONVERGED
    return EXIT_OK


def _cmd_base(args):
    try:
        X = load_matrix(args.data, args.format)
    except OSError as exc:
        raise StageError("load", DataError(str(exc)))
    S_list = generate_ensemble(X, args.clusters, args.members, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    for i, S in enumerate(S_list, start=1):
        export_matrix(S, os.path.join(args.out, f"S{i}.csv"))
    return EXIT_OK


def _cmd_eval(args):
    try:
        pred = load_labels(args.pred)
        truth = load_labels(args.truth)
    except OSError as exc:
        raise StageError("load", DataError(str(exc)))
    print(f"acc={accuracy(pred, truth):.6f} nmi={nmi(pred, truth):.6f}")
    return EXIT_OK


COMMANDS = {"ensemble": _cmd_ensemble, "base": _cmd_base,
            "fuse": _cmd_fuse, "eval": _cmd_eval}


def _is_data_error(exc):
    inner = exc.error if isinstance(exc, StageError) else exc
    if isinstance(inner, StageError):
        return _is_data_error(inner)
    return isinstance(inner, (DataError, OSError)) or (
        isinstance(exc, StageError) and exc.stage == "load")


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"hocle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HocleError as exc:
        print(f"hocle: error: {exc}", file=sys.stderr)
        return EXIT_DATA if _is_data_error(exc) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
