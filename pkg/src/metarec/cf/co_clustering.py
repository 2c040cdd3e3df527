"""Co-clustering predictor: users and items are alternately reassigned to
the cluster minimizing their squared prediction error, and a pair is
scored from its co-cluster mean plus user/item offsets."""

from __future__ import annotations

import numpy as np

from .base import TrainedPredictor


class CoClustering(TrainedPredictor):
    algorithm = "co_clustering"

    def _averages(self, cu, ci):
        t = self.train
        g, h = cu[t.uidx], ci[t.iidx]
        n_cu, n_ci = self.n_cu, self.n_ci
        mu = t.global_mean

        def avg(codes, n):
            s = np.bincount(codes, weights=t.values, minlength=n)
            c = np.bincount(codes, minlength=n)
            return np.where(c > 0, s / np.maximum(c, 1), mu)

        avg_u = avg(g, n_cu)
        avg_i = avg(h, n_ci)
        co_codes = g * n_ci + h
        s = np.bincount(co_codes, weights=t.values, minlength=n_cu * n_ci)
        c = np.bincount(co_codes, minlength=n_cu * n_ci)
        avg_co = np.where(c > 0, s / np.maximum(c, 1), mu).reshape(n_cu, n_ci)
        return avg_u, avg_i, avg_co

    def _fit(self, rng):
        t = self.train
        self.n_cu = self.cfg.cocluster_user_clusters
        self.n_ci = self.cfg.cocluster_item_clusters
        cu = rng.integers(0, self.n_cu, t.n_users)
        ci = rng.integers(0, self.n_ci, t.n_items)
        self.user_means = t.user_means()
        self.item_means = t.item_means()
        base = t.values - self.user_means[t.uidx] - self.item_means[t.iidx]

        for _ in range(self.cfg.cocluster_epochs):
            avg_u, avg_i, avg_co = self._averages(cu, ci)
            # reassign users: cost of candidate cluster g summed per user
            h = ci[t.iidx]
            cost = np.empty((t.n_users, self.n_cu))
            for g in range(self.n_cu):
                err = base + avg_i[h] - avg_co[g, h] + avg_u[g]
                cost[:, g] = np.bincount(t.uidx, weights=err * err,
                                         minlength=t.n_users)
            cu = np.argmin(cost, axis=1)
            # reassign items against the fresh user assignment
            g = cu[t.uidx]
            cost = np.empty((t.n_items, self.n_ci))
            for hh in range(self.n_ci):
                err = base + avg_u[g] - avg_co[g, hh] + avg_i[hh]
                cost[:, hh] = np.bincount(t.iidx, weights=err * err,
                                          minlength=t.n_items)
            ci = np.argmin(cost, axis=1)

        self.cluster_u = cu
        self.cluster_i = ci
        self.avg_u, self.avg_i, self.avg_co = self._averages(cu, ci)

    def _score(self, u, i):
        if u is None and i is None:
            return self.global_mean, True
        if u is None:
            return self.item_means[i], True
        if i is None:
            return self.user_means[u], True
        g, h = self.cluster_u[u], self.cluster_i[i]
        est = (self.avg_co[g, h]
               + (self.user_means[u] - self.avg_u[g])
               + (self.item_means[i] - self.avg_i[h]))
        return float(est), False

    def param_arrays(self):
        return {"cluster_u": self.cluster_u.astype(np.float64),
                "cluster_i": self.cluster_i.astype(np.float64),
                "avg_u": self.avg_u, "avg_i": self.avg_i,
                "avg_co": self.avg_co}

    def _restore(self, arrays):
        self.n_cu = self.cfg.cocluster_user_clusters
        self.n_ci = self.cfg.cocluster_item_clusters
        self.cluster_u = arrays["cluster_u"].astype(np.int64)
        self.cluster_i = arrays["cluster_i"].astype(np.int64)
        self.avg_u, self.avg_i = arrays["avg_u"], arrays["avg_i"]
        self.avg_co = arrays["avg_co"]
        self.user_means = self.train.user_means()
        self.item_means = self.train.item_means()
