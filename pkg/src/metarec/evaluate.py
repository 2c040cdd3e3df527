"""The two evaluation protocols and their report object.

Experiment 1 ("oracle"): 70/30 split, per-algorithm RMSE on the test
30%, plus the RMSE and pick-frequencies of a perfect per-row selector.

Experiment 2 ("meta"): 50/50 split; the pool trains on the first half
and the second half is evaluated with 5-fold cross-validation, training
the error models on four folds and scoring selection, single-best,
ensemble and oracle on the fifth.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from .cf import ALGORITHM_ORDER, PoolConfig, RatingMatrix, fit_pool
from .data import RatingDataset, kfold, random_split
from .features import (MetaFeatureStats, Standardizer, build_schema,
                       compute_meta_stats, encode_pair)
from .meta import (ErrorTable, MetaModel, best_frequency,
                   compute_error_table, oracle_rmse, train_meta)
from .ridge import RidgeConfig

RATING_MIN, RATING_MAX = 1.0, 5.0


def rmse(errors) -> float:
    """Root mean squared error of a non-empty list of signed errors."""
    errors = np.asarray(errors, dtype=np.float64)
    if errors.size == 0:
        raise ValueError("rmse of empty error list")
    return float(np.sqrt(np.mean(errors ** 2)))


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = "ml100k"
    kind: str = "oracle"            # "oracle" (70/30) or "meta" (50/50 + CV)
    seed: int = 0
    pool: PoolConfig = field(default_factory=PoolConfig)
    ridge: RidgeConfig = field(default_factory=RidgeConfig)
    folds: int = 5
    algorithms: tuple | None = None
    threads: int = 1

    def __post_init__(self):
        if self.kind not in ("oracle", "meta"):
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.kind == "meta" and self.folds < 2:
            raise ValueError("meta experiment needs >= 2 folds")


@dataclass
class EvaluationReport:
    dataset: str
    experiment: str
    seed: int
    n_train: int
    n_test: int
    algorithm_rmse: dict[str, float]
    oracle_rmse: float
    best_frequency_pct: dict[str, float]
    single_best_algorithm: str
    single_best_rmse: float
    meta_rmse: float | None = None
    meta_rmse_per_fold: list[float] | None = None
    oracle_rmse_per_fold: list[float] | None = None
    ensemble_rmse: float | None = None
    best_rank_accuracy: float | None = None
    worst_rank_accuracy: float | None = None
    selection_frequency_pct: dict[str, float] | None = None
    fit_seconds: float = 0.0
    eval_seconds: float = 0.0

    def to_json(self, path=None, include_timings=True):
        payload = asdict(self)
        if not include_timings:
            payload.pop("fit_seconds")
            payload.pop("eval_seconds")
        text = json.dumps(payload, indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    def write_figure_csvs(self, out_dir):
        """fig3/fig4/fig5 CSVs, one row per bar, directly plottable."""
        from pathlib import Path
        out = Path(out_dir)
        with open(out / "fig3.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["algorithm", "rmse"])
            for a, v in self.algorithm_rmse.items():
                w.writerow([a, f"{v:.6f}"])
            w.writerow(["oracle", f"{self.oracle_rmse:.6f}"])
        with open(out / "fig4.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["algorithm", "pct_best"])
            for a, v in self.best_frequency_pct.items():
                w.writerow([a, f"{v:.4f}"])
        with open(out / "fig5.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["system", "rmse"])
            if self.meta_rmse is not None:
                w.writerow(["meta_learner", f"{self.meta_rmse:.6f}"])
            w.writerow(["single_best", f"{self.single_best_rmse:.6f}"])
            if self.ensemble_rmse is not None:
                w.writerow(["ensemble", f"{self.ensemble_rmse:.6f}"])
            w.writerow(["oracle", f"{self.oracle_rmse:.6f}"])


def _column_rmse(table: ErrorTable):
    return {a: rmse(table.errors[:, c])
            for c, a in enumerate(table.algorithms)}


def _single_best(algorithm_rmse):
    # canonical order breaks exact ties
    best = min(algorithm_rmse.values())
    for a in ALGORITHM_ORDER:
        if a in algorithm_rmse and algorithm_rmse[a] == best:
            return a, best
    raise AssertionError("unreachable")


def _predict_error_matrix(meta: MetaModel, std_rows):
    W = np.stack([meta.models[a].weights for a in meta.algorithms], axis=1)
    b = np.array([meta.models[a].intercept for a in meta.algorithms])
    return std_rows @ W + b


def rank_accuracy_from_arrays(predicted_errors, true_errors):
    """(best_acc, worst_acc): how often the predicted best/worst
    algorithm matches the true best/worst (canonical tie-break)."""
    pa, ta = np.abs(predicted_errors), np.abs(true_errors)
    best = np.mean(np.argmin(pa, axis=1) == np.argmin(ta, axis=1))
    worst = np.mean(np.argmax(pa, axis=1) == np.argmax(ta, axis=1))
    return float(best), float(worst)


def rank_prediction_accuracy(meta: MetaModel, table: ErrorTable, rows):
    """Rank accuracies for raw (un-standardized) feature rows."""
    std_rows = meta.standardizer.transform(np.asarray(rows, dtype=np.float64))
    predicted = _predict_error_matrix(meta, std_rows)
    return rank_accuracy_from_arrays(predicted, table.errors)


def _get_pool(train, cfg, cache):
    if cache is not None:
        return cache.fit_pool_cached(train, cfg.pool, cfg.algorithms, cfg.threads)
    return fit_pool(train, cfg.pool, cfg.algorithms, cfg.threads)


def run_oracle_experiment(ds: RatingDataset, cfg: ExperimentConfig,
                          cache=None) -> EvaluationReport:
    plan = random_split(ds, (0.7, 0.3), cfg.seed)
    train = RatingMatrix.from_dataset(ds, plan.partitions[0])
    t0 = time.perf_counter()
    pool = _get_pool(train, cfg, cache)
    t1 = time.perf_counter()
    test = [ds.ratings[i] for i in plan.partitions[1]]
    table = compute_error_table(pool, test)
    algo_rmse = _column_rmse(table)
    best_alg, best_rmse = _single_best(algo_rmse)
    report = EvaluationReport(
        dataset=ds.name, experiment="oracle", seed=cfg.seed,
        n_train=train.n_ratings, n_test=len(test),
        algorithm_rmse=algo_rmse,
        oracle_rmse=oracle_rmse(table),
        best_frequency_pct=best_frequency(table),
        single_best_algorithm=best_alg, single_best_rmse=best_rmse,
        fit_seconds=t1 - t0, eval_seconds=time.perf_counter() - t1)
    report._error_table = table   # for CSV export without a refit
    return report


def run_meta_experiment(ds: RatingDataset, cfg: ExperimentConfig,
                        cache=None) -> EvaluationReport:
    plan = random_split(ds, (0.5, 0.5), cfg.seed)
    train = RatingMatrix.from_dataset(ds, plan.partitions[0])
    t0 = time.perf_counter()
    pool = _get_pool(train, cfg, cache)
    t1 = time.perf_counter()

    schema = build_schema(ds)
    stats = compute_meta_stats(train)
    eval_indices = plan.partitions[1]
    instances = [ds.ratings[i] for i in eval_indices]
    table = compute_error_table(pool, instances)
    rows = np.array([encode_pair(ds.users[r.user_id], ds.items[r.item_id],
                                 stats, schema) for r in instances])

    # position of each rating index within the evaluation arrays
    pos = {int(idx): k for k, idx in enumerate(eval_indices)}
    folds = kfold(eval_indices, cfg.folds, cfg.seed)

    fold_meta_rmse, fold_oracle_rmse = [], []
    meta_errors_all, pred_errors_all, true_errors_all = [], [], []
    ensemble_errors_all, per_algo_errors_all = [], []
    chosen_all = []
    for f, fold in enumerate(folds.partitions):
        test_pos = np.array([pos[int(i)] for i in fold])
        train_pos = np.array(sorted(set(range(len(instances))) - set(test_pos)))
        sub_table = ErrorTable(
            user_ids=table.user_ids[train_pos],
            item_ids=table.item_ids[train_pos],
            true_ratings=table.true_ratings[train_pos],
            errors=table.errors[train_pos],
            algorithms=table.algorithms)
        meta = train_meta(sub_table, rows[train_pos], cfg.ridge, schema, stats)

        std_test = meta.standardizer.transform(rows[test_pos])
        predicted = _predict_error_matrix(meta, std_test)
        chosen = np.argmin(np.abs(predicted), axis=1)
        true_err = table.errors[test_pos]
        true_vals = table.true_ratings[test_pos]
        # chosen algorithm's clipped prediction, re-clipped after nothing
        # (errors already come from clipped predictions)
        meta_err = true_err[np.arange(len(chosen)), chosen]
        preds = true_err + true_vals[:, None]
        ens = np.clip(preds.mean(axis=1), RATING_MIN, RATING_MAX)

        fold_meta_rmse.append(rmse(meta_err))
        fold_oracle_rmse.append(float(np.sqrt(np.mean(np.min(np.abs(true_err), axis=1) ** 2))))
        meta_errors_all.append(meta_err)
        ensemble_errors_all.append(ens - true_vals)
        per_algo_errors_all.append(true_err)
        pred_errors_all.append(predicted)
        true_errors_all.append(true_err)
        chosen_all.append(chosen)

    meta_errors = np.concatenate(meta_errors_all)
    per_algo = np.concatenate(per_algo_errors_all)
    algo_rmse = {a: rmse(per_algo[:, c]) for c, a in enumerate(table.algorithms)}
    best_alg, best_rmse = _single_best(algo_rmse)
    best_acc, worst_acc = rank_accuracy_from_arrays(
        np.concatenate(pred_errors_all), np.concatenate(true_errors_all))
    chosen = np.concatenate(chosen_all)
    sel_counts = np.bincount(chosen, minlength=len(table.algorithms))
    sel_pct = {a: float(100.0 * c / len(chosen))
               for a, c in zip(table.algorithms, sel_counts)}

    oracle_all = float(np.sqrt(np.mean(np.min(np.abs(per_algo), axis=1) ** 2)))
    report = EvaluationReport(
        dataset=ds.name, experiment="meta", seed=cfg.seed,
        n_train=train.n_ratings, n_test=len(instances),
        algorithm_rmse=algo_rmse,
        oracle_rmse=oracle_all,
        best_frequency_pct=best_frequency(table),
        single_best_algorithm=best_alg, single_best_rmse=best_rmse,
        meta_rmse=rmse(meta_errors),
        meta_rmse_per_fold=[float(v) for v in fold_meta_rmse],
        oracle_rmse_per_fold=[float(v) for v in fold_oracle_rmse],
        ensemble_rmse=rmse(np.concatenate(ensemble_errors_all)),
        best_rank_accuracy=best_acc, worst_rank_accuracy=worst_acc,
        selection_frequency_pct=sel_pct,
        fit_seconds=t1 - t0, eval_seconds=time.perf_counter() - t1)
    report._error_table = table   # for CSV export without a refit
    return report


def run_experiment(ds: RatingDataset, cfg: ExperimentConfig,
                   cache=None) -> EvaluationReport:
    if cfg.kind == "oracle":
        return run_oracle_experiment(ds, cfg, cache)
    return run_meta_experiment(ds, cfg, cache)
