"""Per-instance error table, per-algorithm error models, and selection.

The error table holds one signed error (predicted - true, from clipped
predictions) per algorithm per evaluated rating. One linear model per
algorithm regresses that signed error on the pair's features; at
prediction time the algorithm with the smallest absolute predicted error
is chosen and only its rating is consulted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .cf import ALGORITHM_ORDER, clip_rating
from .features import FeatureSchema, MetaFeatureStats, Standardizer, encode_pair
from .ridge import LinearModel, RidgeConfig, fit_ridge, predict_linear


@dataclass(frozen=True)
class ErrorTable:
    user_ids: np.ndarray
    item_ids: np.ndarray
    true_ratings: np.ndarray
    errors: np.ndarray           # (n_rows, 9), canonical column order
    algorithms: tuple = ALGORITHM_ORDER

    def __len__(self):
        return len(self.true_ratings)

    def column(self, algorithm):
        return self.errors[:, self.algorithms.index(algorithm)]

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["user", "item", "true", *self.algorithms])
            for k in range(len(self)):
                writer.writerow([int(self.user_ids[k]), int(self.item_ids[k]),
                                 _fmt(self.true_ratings[k]),
                                 *(_fmt(e) for e in self.errors[k])])

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            algorithms = tuple(header[3:])
            rows = list(reader)
        return cls(
            user_ids=np.array([int(r[0]) for r in rows], dtype=np.int64),
            item_ids=np.array([int(r[1]) for r in rows], dtype=np.int64),
            true_ratings=np.array([float(r[2]) for r in rows]),
            errors=np.array([[float(v) for v in r[3:]] for r in rows]),
            algorithms=algorithms)


def _fmt(x):
    return format(float(x), ".10g")


def compute_error_table(pool, instances) -> ErrorTable:
    """Signed errors of every pool algorithm on every rating instance."""
    if not instances:
        raise ValueError("no instances to evaluate")
    algorithms = tuple(a for a in ALGORITHM_ORDER if a in pool)
    errors = np.empty((len(instances), len(algorithms)))
    for k, r in enumerate(instances):
        for c, a in enumerate(algorithms):
            pred, _ = pool[a].predict(r.user_id, r.item_id)
            errors[k, c] = pred - r.value
    return ErrorTable(
        user_ids=np.array([r.user_id for r in instances], dtype=np.int64),
        item_ids=np.array([r.item_id for r in instances], dtype=np.int64),
        true_ratings=np.array([r.value for r in instances]),
        errors=errors,
        algorithms=algorithms)


@dataclass(frozen=True)
class MetaModel:
    models: dict[str, LinearModel]
    schema: FeatureSchema
    stats: MetaFeatureStats
    standardizer: Standardizer
    algorithms: tuple = ALGORITHM_ORDER

    def encode(self, user, item):
        raw = encode_pair(user, item, self.stats, self.schema)
        return self.standardizer.transform(raw)

    def predict_errors(self, user, item):
        x = self.encode(user, item)
        return np.array([predict_linear(self.models[a], x)
                         for a in self.algorithms])


def train_meta(table: ErrorTable, rows, cfg: RidgeConfig,
               schema: FeatureSchema, stats: MetaFeatureStats) -> MetaModel:
    """One ridge fit per algorithm: signed error on standardized features."""
    rows = np.asarray(rows, dtype=np.float64)
    if len(rows) != len(table):
        raise ValueError("feature rows do not match error-table rows")
    standardizer = Standardizer.fit(rows, schema)
    std_rows = standardizer.transform(rows)
    models = {}
    for a in table.algorithms:
        try:
            models[a] = fit_ridge(std_rows, table.column(a), cfg)
        except Exception as exc:
            raise type(exc)(f"{a}: {exc}") from exc
    return MetaModel(models=models, schema=schema, stats=stats,
                     standardizer=standardizer, algorithms=table.algorithms)


@dataclass(frozen=True)
class SelectionResult:
    chosen: str
    predicted_errors: np.ndarray
    final_rating: float


def select_and_predict(meta: MetaModel, pool, user, item) -> SelectionResult:
    """Pick the algorithm with the smallest |predicted error| (canonical
    tie-break) and return its clipped rating."""
    predicted = meta.predict_errors(user, item)
    choice = int(np.argmin(np.abs(predicted)))
    algorithm = meta.algorithms[choice]
    rating, _ = pool[algorithm].predict(user.user_id, item.item_id)
    return SelectionResult(chosen=algorithm, predicted_errors=predicted,
                           final_rating=rating)


def ensemble_average(pool, user_id, item_id) -> float:
    """Mean of all pool predictions, clipped."""
    preds = [pool[a].predict(user_id, item_id)[0]
             for a in ALGORITHM_ORDER if a in pool]
    return clip_rating(float(np.mean(preds)))


def oracle_best(row_errors) -> int:
    """Column index of the minimum |error|, first (canonical) on ties."""
    return int(np.argmin(np.abs(np.asarray(row_errors))))


def oracle_rmse(table: ErrorTable) -> float:
    """RMSE a perfect per-row selector would achieve."""
    best = np.min(np.abs(table.errors), axis=1)
    return float(np.sqrt(np.mean(best ** 2)))


def best_frequency(table: ErrorTable) -> dict[str, float]:
    """Percentage of rows on which each algorithm is the oracle pick."""
    winners = np.argmin(np.abs(table.errors), axis=1)
    counts = np.bincount(winners, minlength=len(table.algorithms))
    pct = 100.0 * counts / len(table)
    return {a: float(p) for a, p in zip(table.algorithms, pct)}
