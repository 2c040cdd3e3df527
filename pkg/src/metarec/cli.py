"""Command-line driver.

    metarec run --dataset ml100k --data-dir data/ml-100k \\
        --experiment oracle --seed 42 --out out/

writes ``report.json``, ``errors.csv`` and per-figure CSVs into the
output directory. ``metarec inspect out/errors.csv --rows 0:10`` prints
error-table rows with the per-row best algorithm marked.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:      # Python < 3.11
    import tomli as tomllib

import numpy as np

from .cache import ModelCache
from .cf import ALGORITHM_ORDER, PoolConfig, TrainingDivergedError
from .data import DataError, load_movielens
from .evaluate import ExperimentConfig, run_experiment
from .meta import ErrorTable
from .ridge import RidgeConfig, SingularSystemError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


_DEFAULTS = {
    "dataset": "ml100k",
    "data_dir": "data",
    "experiment": "oracle",
    "seed": 0,
    "folds": 5,
    "out": "out",
    "cache_dir": None,
    "algorithms": None,
    "lambda": 1e-6,
    "threads": 1,
    "allow_long": False,
}


def build_parser():
    parser = _Parser(prog="metarec",
                     description="Per-instance recommender-algorithm selection experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment end to end")
    run.add_argument("--config", type=Path, default=None,
                     help="TOML config file; flags override its values")
    run.add_argument("--dataset", choices=("ml100k", "ml1m"))
    run.add_argument("--data-dir", dest="data_dir", type=Path)
    run.add_argument("--experiment", choices=("oracle", "meta"))
    run.add_argument("--seed", type=int)
    run.add_argument("--folds", type=int)
    run.add_argument("--out", type=Path)
    run.add_argument("--cache-dir", dest="cache_dir", type=Path)
    run.add_argument("--algorithms",
                     help="comma-separated subset of the nine algorithm ids")
    run.add_argument("--lambda", dest="lam", type=float,
                     help="ridge regularization strength")
    run.add_argument("--threads", type=int)
    run.add_argument("--allow-long", dest="allow_long", action="store_true",
                     default=None, help="permit the long-running ml1m experiments")

    inspect = sub.add_parser("inspect", help="print error-table rows")
    inspect.add_argument("table", type=Path, help="errors.csv from a run")
    inspect.add_argument("--rows", default="",
                         help="row selector, e.g. '0:10' or '3,7,12' (default: first 10)")
    return parser


def _merge_config(args):
    """flags > config file > defaults"""
    merged = dict(_DEFAULTS)
    if args.config is not None:
        try:
            with open(args.config, "rb") as fh:
                file_cfg = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise DataError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(file_cfg) - set(_DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_cfg)
    flag_map = {
        "dataset": args.dataset, "data_dir": args.data_dir,
        "experiment": args.experiment, "seed": args.seed,
        "folds": args.folds, "out": args.out, "cache_dir": args.cache_dir,
        "algorithms": args.algorithms, "lambda": args.lam,
        "threads": args.threads, "allow_long": args.allow_long,
    }
    merged.update({k: v for k, v in flag_map.items() if v is not None})
    return merged


class UsageError(ValueError):
    pass


def cmd_run(args):
    cfg = _merge_config(args)
    algorithms = None
    if cfg["algorithms"]:
        algorithms = tuple(a.strip() for a in str(cfg["algorithms"]).split(",") if a.strip())
        unknown = set(algorithms) - set(ALGORITHM_ORDER)
        if unknown:
            raise UsageError(f"unknown algorithms: {sorted(unknown)}")
    if cfg["dataset"] == "ml1m" and not cfg["allow_long"]:
        raise UsageError("ml1m runs are long; pass --allow-long to confirm")

    ds = load_movielens(cfg["dataset"], cfg["data_dir"])
    exp = ExperimentConfig(
        dataset=cfg["dataset"], kind=cfg["experiment"], seed=int(cfg["seed"]),
        pool=PoolConfig(master_seed=int(cfg["seed"])),
        ridge=RidgeConfig(lam=float(cfg["lambda"])),
        folds=int(cfg["folds"]), algorithms=algorithms,
        threads=int(cfg["threads"]))
    cache = ModelCache(cfg["cache_dir"]) if cfg["cache_dir"] else None

    report = run_experiment(ds, exp, cache=cache)

    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    report.to_json(out / "report.json")
    report.write_figure_csvs(out)
    report._error_table.to_csv(out / "errors.csv")
    print(f"report written to {out / 'report.json'}")
    if cache is not None:
        print(f"cache: {cache.hits} hit(s), {cache.misses} miss(es)")
    return EXIT_OK


def _parse_rows(selector, n):
    if not selector:
        return list(range(min(10, n)))
    if ":" in selector:
        start, stop = selector.split(":", 1)
        return list(range(int(start or 0), min(int(stop or n), n)))
    return [int(x) for x in selector.split(",") if x.strip()]


def cmd_inspect(args):
    try:
        table = ErrorTable.from_csv(args.table)
    except OSError as exc:
        raise DataError(f"cannot read {args.table}: {exc}") from exc
    except (ValueError, IndexError, StopIteration) as exc:
        raise DataError(f"garbled error table {args.table}: {exc}") from exc

    rows = _parse_rows(args.rows, len(table))
    width = max(len(a) for a in table.algorithms)
    header = f"{'row':>6} {'user':>6} {'item':>6} {'true':>5}  " + "  ".join(
        f"{a:>{width}}" for a in table.algorithms)
    print(header)
    for k in rows:
        if not 0 <= k < len(table):
            raise DataError(f"row {k} out of range (table has {len(table)} rows)")
        best = int(np.argmin(np.abs(table.errors[k])))
        cells = []
        for c, e in enumerate(table.errors[k]):
            text = f"{e:+.2f}"
            if c == best:
                text = f"*{text}"
            cells.append(f"{text:>{width}}")
        print(f"{k:>6} {table.user_ids[k]:>6} {table.item_ids[k]:>6} "
              f"{table.true_ratings[k]:>5.1f}  " + "  ".join(cells))
    print("(* marks the per-row best algorithm)")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_inspect(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (TrainingDivergedError, SingularSystemError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
