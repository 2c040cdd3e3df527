"""User-based k-nearest-neighbour predictors (basic, with-means,
baseline-centred)."""

from __future__ import annotations

import numpy as np

from .base import TrainedPredictor
from .baseline import estimate_baselines
from .similarity import compute_similarity


class _KnnPredictor(TrainedPredictor):
    """Common neighbour machinery; subclasses define the estimate."""

    measure = "msd"

    def _fit(self, rng):
        self.baselines = None
        if self.measure == "pearson_baseline":
            self.baselines = estimate_baselines(
                self.train, self.cfg.baseline_reg_user,
                self.cfg.baseline_reg_item, self.cfg.baseline_epochs)
        self.similarity = compute_similarity(
            self.train, self.measure,
            min_support=self.cfg.knn_min_support,
            shrinkage=self.cfg.knn_shrinkage,
            baselines=self.baselines)
        self.user_means = self.train.user_means()

    def _neighbors(self, u, i):
        """Top-k positively-similar raters of item i, for user u.

        Equal similarities break toward the lower user id.
        """
        raters, vals = self.train.item_ratings(i)
        sims = self.similarity.sim[u, raters]
        k = self.cfg.knn_k
        if len(raters) > k:
            top = np.lexsort((raters, -sims))[:k]
            raters, vals, sims = raters[top], vals[top], sims[top]
        pos = sims > 0
        return raters[pos], vals[pos], sims[pos]

    def param_arrays(self):
        arrays = {"sim": self.similarity.sim,
                  "support": self.similarity.support.astype(np.float64)}
        if self.baselines is not None:
            arrays["b_user"] = self.baselines.b_user
            arrays["b_item"] = self.baselines.b_item
        return arrays

    def _restore(self, arrays):
        from .baseline import BaselineEstimates
        from .similarity import SimilarityMatrix
        self.similarity = SimilarityMatrix(
            sim=arrays["sim"], support=arrays["support"].astype(np.int64))
        self.baselines = None
        if "b_user" in arrays:
            self.baselines = BaselineEstimates(
                mu=self.train.global_mean,
                b_user=arrays["b_user"], b_item=arrays["b_item"])
        self.user_means = self.train.user_means()


class KnnBasic(_KnnPredictor):
    """Similarity-weighted average of neighbour ratings."""

    algorithm = "knn_basic"

    def _score(self, u, i):
        if u is None or i is None:
            return self.global_mean, True
        raters, vals, sims = self._neighbors(u, i)
        if len(raters) < self.cfg.knn_min_k:
            return self.global_mean, True
        return float(np.dot(sims, vals) / np.abs(sims).sum()), False


class KnnWithMeans(_KnnPredictor):
    """User-mean plus weighted average of mean-centred neighbour ratings."""

    algorithm = "knn_with_means"

    def _score(self, u, i):
        if u is None:
            return self.global_mean, True
        mean_u = self.user_means[u]
        if i is None:
            return mean_u, True
        raters, vals, sims = self._neighbors(u, i)
        if len(raters) < self.cfg.knn_min_k:
            return mean_u, True
        dev = np.dot(sims, vals - self.user_means[raters]) / np.abs(sims).sum()
        return float(mean_u + dev), False


class KnnBaseline(_KnnPredictor):
    """Baseline estimate plus weighted average of baseline residuals,
    with shrunk baseline-residual Pearson similarity."""

    algorithm = "knn_baseline"
    measure = "pearson_baseline"

    def _baseline(self, u, i):
        b = self.baselines
        est = b.mu
        if u is not None:
            est += b.b_user[u]
        if i is not None:
            est += b.b_item[i]
        return est

    def _score(self, u, i):
        est = self._baseline(u, i)
        if u is None or i is None:
            return est, True
        raters, vals, sims = self._neighbors(u, i)
        if len(raters) < self.cfg.knn_min_k:
            return est, False
        resid = vals - (self.baselines.mu + self.baselines.b_user[raters]
                        + self.baselines.b_item[i])
        return float(est + np.dot(sims, resid) / np.abs(sims).sum()), False
