"""Shared predictor contract: fit once, predict any (user, item) pair."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RATING_MIN = 1.0
RATING_MAX = 5.0

# Canonical algorithm order; all tie-breaking uses this ordering.
ALGORITHM_ORDER = (
    "co_clustering",
    "knn_baseline",
    "knn_basic",
    "knn_with_means",
    "nmf",
    "svd",
    "svdpp",
    "slope_one",
    "baseline_only",
)


class TrainingDivergedError(RuntimeError):
    """A trainer produced a non-finite parameter."""

    def __init__(self, algorithm, epoch):
        self.algorithm = algorithm
        self.epoch = epoch
        super().__init__(f"{algorithm}: non-finite parameters at epoch {epoch}")


@dataclass(frozen=True)
class PoolConfig:
    """Hyperparameters for the nine-algorithm pool.

    Every stochastic trainer derives its own generator stream from
    (master_seed, algorithm), so fitting order never changes results.
    """

    master_seed: int = 0
    baseline_reg_user: float = 15.0
    baseline_reg_item: float = 10.0
    baseline_epochs: int = 10
    knn_k: int = 40
    knn_min_k: int = 1
    knn_min_support: int = 1
    knn_shrinkage: float = 100.0
    svd_factors: int = 100
    svd_epochs: int = 20
    svd_lr: float = 0.005
    svd_reg: float = 0.02
    svd_init_std: float = 0.1
    svdpp_factors: int = 20
    svdpp_epochs: int = 20
    svdpp_lr: float = 0.007
    svdpp_reg: float = 0.02
    nmf_factors: int = 15
    nmf_epochs: int = 50
    nmf_reg: float = 0.06
    cocluster_user_clusters: int = 3
    cocluster_item_clusters: int = 3
    cocluster_epochs: int = 20

    def rng_for(self, algorithm):
        """Private PCG64 stream for one algorithm."""
        rank = ALGORITHM_ORDER.index(algorithm)
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(rank,))
        return np.random.Generator(np.random.PCG64(seq))


def clip_rating(x):
    return float(min(max(x, RATING_MIN), RATING_MAX))


class TrainedPredictor:
    """Base for fitted models; immutable after :meth:`fit`.

    ``predict`` is total: any (user, item) pair yields a finite rating in
    [1, 5] plus a flag marking predictions where some model component had
    to be defaulted (cold-start fallback).
    """

    algorithm = None  # overridden

    def __init__(self, train, cfg):
        self.train = train
        self.cfg = cfg
        self.global_mean = train.global_mean

    @classmethod
    def fit(cls, train, cfg):
        model = cls(train, cfg)
        model._fit(cfg.rng_for(cls.algorithm))
        model._check_finite()
        return model

    def _fit(self, rng):
        raise NotImplementedError

    def _score(self, u, i):
        """Raw score for inner indices (None when unknown); returns
        (score, fallback)."""
        raise NotImplementedError

    def predict(self, user_id, item_id):
        u = self.train.uindex.get(user_id)
        i = self.train.iindex.get(item_id)
        score, fallback = self._score(u, i)
        if not np.isfinite(score):
            raise TrainingDivergedError(self.algorithm, epoch=-1)
        return clip_rating(score), fallback

    # -- cache support -------------------------------------------------

    def param_arrays(self):
        """Fitted parameters as named float64 arrays."""
        raise NotImplementedError

    def _restore(self, arrays):
        raise NotImplementedError

    @classmethod
    def from_arrays(cls, train, cfg, arrays):
        """Rebuild a fitted model from cached parameter arrays."""
        model = cls(train, cfg)
        model._restore(arrays)
        model._check_finite()
        return model

    def _check_finite(self):
        for name, arr in self.param_arrays().items():
            if not np.all(np.isfinite(arr)):
                raise TrainingDivergedError(self.algorithm, epoch=-1)
