"""Command-line front end: ``amgrad run|compare|list-benchmarks|hv``.

Exit codes: 0 success, 1 configuration or input error, 2 runtime failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiment
from .benchmarks import BENCHMARKS
from .exceptions import InputError
from .io import read_objectives_csv
from .metrics import hypervolume

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _cmd_run(args):
    cfg = experiment.ExperimentConfig.from_file(args.config)
    cfg = cfg.with_overrides(seed=args.seed, output_dir=args.out)
    summary = experiment.run(cfg)
    hv = summary["hypervolume"]
    print(f"{cfg.benchmark} {cfg.algorithm}: {summary['n_points']} points, "
          f"HV={'n/a' if hv is None else f'{hv:.6g}'}, failures={len(summary['failures'])}, "
          f"wrote {cfg.output_dir}")
    return EXIT_OK


def _cmd_compare(args):
    cfg_a = experiment.ExperimentConfig.from_file(args.a)
    cfg_b = experiment.ExperimentConfig.from_file(args.b)
    if args.seed is not None:
        cfg_a = cfg_a.with_overrides(seed=args.seed)
        cfg_b = cfg_b.with_overrides(seed=args.seed)
    report = experiment.compare(cfg_a, cfg_b, labels=(Path(args.a).stem, Path(args.b).stem))
    print(f"{'config':<24}{'algorithm':<12}{'HV':>14}{'iterations':>12}{'wall [s]':>10}")
    for row in report["rows"]:
        hv = "n/a" if row["hypervolume"] is None else f"{row['hypervolume']:.6g}"
        print(f"{row['label']:<24}{row['algorithm']:<12}{hv:>14}{row['iterations']:>12}{row['wall_time_s']:>10.2f}")
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    else:
        print(json.dumps(report))
    return EXIT_OK


def _cmd_list(args):
    for name, spec in BENCHMARKS.items():
        print(f"{name:<30}{spec.description}")
    return EXIT_OK


def _cmd_hv(args):
    try:
        ref = np.array([float(v) for v in args.ref.split(",")])
    except ValueError as exc:
        raise InputError(f"--ref must be comma-separated numbers: {exc}") from exc
    try:
        front = read_objectives_csv(args.front)
    except (OSError, KeyError, ValueError) as exc:
        raise InputError(f"cannot read front {args.front}: {exc}") from exc
    print(repr(hypervolume(front, ref)))
    return EXIT_OK


def build_parser():
    parser = _ArgumentParser(prog="amgrad", description="Adaptive multi-gradient descent experiments.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log per-subproblem events")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="solve one experiment config and write artifacts")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("compare", help="hypervolume, iterations and wall time of two configs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write the report JSON here instead of stdout")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("list-benchmarks", help="print the registered benchmarks")
    p.set_defaults(func=_cmd_list)

    p = sub.add_parser("hv", help="hypervolume of a front CSV")
    p.add_argument("--front", required=True)
    p.add_argument("--ref", required=True, help="reference point, e.g. 1.1,1.1")
    p.set_defaults(func=_cmd_hv)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - any other failure is a runtime error
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
