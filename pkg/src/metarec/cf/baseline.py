"""Global-mean / user-bias / item-bias estimates fitted by ALS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import TrainedPredictor


@dataclass(frozen=True)
class BaselineEstimates:
    mu: float
    b_user: np.ndarray   # per inner user index
    b_item: np.ndarray   # per inner item index


def estimate_baselines(train, reg_user=15.0, reg_item=10.0, epochs=10) -> BaselineEstimates:
    """Alternating least squares for b_u, b_i around the global mean.

    Each epoch solves items first, then users:

        b_i <- sum_{u in R(i)} (r_ui - mu - b_u) / (reg_item + |R(i)|)
        b_u <- sum_{i in R(u)} (r_ui - mu - b_i) / (reg_user + |R(u)|)

    Biases start at zero, so constant data stays at the zero fixed point.
    """
    mu = train.global_mean
    bu = np.zeros(train.n_users)
    bi = np.zeros(train.n_items)
    uidx, iidx, vals = train.uidx, train.iidx, train.values
    n_u = np.bincount(uidx, minlength=train.n_users).astype(np.float64)
    n_i = np.bincount(iidx, minlength=train.n_items).astype(np.float64)

    for _ in range(epochs):
        resid = vals - mu - bu[uidx]
        bi = np.bincount(iidx, weights=resid, minlength=train.n_items) / (reg_item + n_i)
        resid = vals - mu - bi[iidx]
        bu = np.bincount(uidx, weights=resid, minlength=train.n_users) / (reg_user + n_u)

    return BaselineEstimates(mu=mu, b_user=bu, b_item=bi)


class BaselineOnly(TrainedPredictor):
    """mu + b_u + b_i with ALS-fitted biases."""

    algorithm = "baseline_only"

    def _fit(self, rng):
        self.baselines = estimate_baselines(
            self.train, self.cfg.baseline_reg_user,
            self.cfg.baseline_reg_item, self.cfg.baseline_epochs)

    def _score(self, u, i):
        est = self.baselines.mu
        if u is not None:
            est += self.baselines.b_user[u]
        if i is not None:
            est += self.baselines.b_item[i]
        return est, u is None or i is None

    def param_arrays(self):
        return {"b_user": self.baselines.b_user, "b_item": self.baselines.b_item}

    def _restore(self, arrays):
        self.baselines = BaselineEstimates(
            mu=self.train.global_mean,
            b_user=arrays["b_user"], b_item=arrays["b_item"])

