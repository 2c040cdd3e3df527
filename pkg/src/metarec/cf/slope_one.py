"""Slope One: user mean shifted by average pairwise item deviations."""

from __future__ import annotations

import numpy as np

from .base import TrainedPredictor


class SlopeOne(TrainedPredictor):
    algorithm = "slope_one"

    def _fit(self, rng):
        t = self.train
        dense = t.dense()
        mask = t.mask()
        # counts[i, j] = number of users who rated both i and j
        counts = mask.T @ mask
        diff_sum = dense.T @ mask - mask.T @ dense
        with np.errstate(divide="ignore", invalid="ignore"):
            dev = np.where(counts > 0, diff_sum / np.maximum(counts, 1.0), 0.0)
        self.dev = dev
        self.counts = counts
        self.user_means = t.user_means()

    def _score(self, u, i):
        if u is None:
            return self.global_mean, True
        mean_u = self.user_means[u]
        if i is None:
            return mean_u, True
        items, _ = self.train.user_ratings(u)
        relevant = items[self.counts[i, items] > 0]
        if len(relevant) == 0:
            return mean_u, True
        return float(mean_u + self.dev[i, relevant].mean()), False

    def param_arrays(self):
        return {"dev": self.dev, "counts": self.counts}

    def _restore(self, arrays):
        self.dev = arrays["dev"]
        self.counts = arrays["counts"]
        self.user_means = self.train.user_means()
