"""Latent-factor predictors: biased SVD, SVD++ with implicit feedback,
and non-negative matrix factorization.

The per-rating update loops are JIT-compiled with numba; each epoch's
parameters are checked for finiteness so divergence aborts with the
offending algorithm and epoch named.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .base import TrainedPredictor, TrainingDivergedError


@njit(cache=True)
def _svd_epoch(uidx, iidx, vals, mu, bu, bi, P, Q, lr, reg):
    n_factors = P.shape[1]
    for r in range(len(vals)):
        u, i = uidx[r], iidx[r]
        dot = 0.0
        for f in range(n_factors):
            dot += P[u, f] * Q[i, f]
        err = vals[r] - (mu + bu[u] + bi[i] + dot)
        bu[u] += lr * (err - reg * bu[u])
        bi[i] += lr * (err - reg * bi[i])
        for f in range(n_factors):
            puf = P[u, f]
            qif = Q[i, f]
            P[u, f] += lr * (err * qif - reg * puf)
            Q[i, f] += lr * (err * puf - reg * qif)


@njit(cache=True)
def _svdpp_epoch(uidx, iidx, vals, mu, bu, bi, P, Q, Y,
                 u_items_flat, u_ptr, lr, reg):
    n_factors = P.shape[1]
    impl = np.empty(n_factors)
    for r in range(len(vals)):
        u, i = uidx[r], iidx[r]
        lo, hi = u_ptr[u], u_ptr[u + 1]
        sqrt_n = np.sqrt(hi - lo)
        for f in range(n_factors):
            s = 0.0
            for p in range(lo, hi):
                s += Y[u_items_flat[p], f]
            impl[f] = s / sqrt_n
        dot = 0.0
        for f in range(n_factors):
            dot += Q[i, f] * (P[u, f] + impl[f])
        err = vals[r] - (mu + bu[u] + bi[i] + dot)
        bu[u] += lr * (err - reg * bu[u])
        bi[i] += lr * (err - reg * bi[i])
        for f in range(n_factors):
            puf = P[u, f]
            qif = Q[i, f]
            P[u, f] += lr * (err * qif - reg * puf)
            Q[i, f] += lr * (err * (puf + impl[f]) - reg * qif)
            for p in range(lo, hi):
                j = u_items_flat[p]
                Y[j, f] += lr * (err * qif / sqrt_n - reg * Y[j, f])


@njit(cache=True)
def _nmf_epoch(uidx, iidx, vals, P, Q, n_u, n_i, reg):
    n_users, n_factors = P.shape
    n_items = Q.shape[0]
    user_num = np.zeros((n_users, n_factors))
    user_denom = np.zeros((n_users, n_factors))
    item_num = np.zeros((n_items, n_factors))
    item_denom = np.zeros((n_items, n_factors))
    for r in range(len(vals)):
        u, i = uidx[r], iidx[r]
        est = 0.0
        for f in range(n_factors):
            est += P[u, f] * Q[i, f]
        for f in range(n_factors):
            user_num[u, f] += Q[i, f] * vals[r]
            user_denom[u, f] += Q[i, f] * est
            item_num[i, f] += P[u, f] * vals[r]
            item_denom[i, f] += P[u, f] * est
    for u in range(n_users):
        if n_u[u] > 0:
            for f in range(n_factors):
                user_denom[u, f] += n_u[u] * reg * P[u, f]
                P[u, f] *= user_num[u, f] / user_denom[u, f]
    for i in range(n_items):
        if n_i[i] > 0:
            for f in range(n_factors):
                item_denom[i, f] += n_i[i] * reg * Q[i, f]
                Q[i, f] *= item_num[i, f] / item_denom[i, f]


def _guard(algorithm, epoch, *arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise TrainingDivergedError(algorithm, epoch)


class Svd(TrainedPredictor):
    """mu + b_u + b_i + q_i . p_u, trained by SGD."""

    algorithm = "svd"

    def _fit(self, rng):
        cfg = self.cfg
        t = self.train
        self.bu = np.zeros(t.n_users)
        self.bi = np.zeros(t.n_items)
        self.P = rng.normal(0.0, cfg.svd_init_std, (t.n_users, cfg.svd_factors))
        self.Q = rng.normal(0.0, cfg.svd_init_std, (t.n_items, cfg.svd_factors))
        for epoch in range(cfg.svd_epochs):
            _svd_epoch(t.uidx, t.iidx, t.values, t.global_mean,
                       self.bu, self.bi, self.P, self.Q, cfg.svd_lr, cfg.svd_reg)
            _guard(self.algorithm, epoch, self.bu, self.bi, self.P, self.Q)

    def _score(self, u, i):
        est = self.global_mean
        if u is not None:
            est += self.bu[u]
        if i is not None:
            est += self.bi[i]
        if u is not None and i is not None:
            return est + float(np.dot(self.P[u], self.Q[i])), False
        return est, True

    def param_arrays(self):
        return {"bu": self.bu, "bi": self.bi, "P": self.P, "Q": self.Q}

    def _restore(self, arrays):
        self.bu, self.bi = arrays["bu"], arrays["bi"]
        self.P, self.Q = arrays["P"], arrays["Q"]


class SvdPP(TrainedPredictor):
    """SVD plus implicit-feedback item factors (y_j)."""

    algorithm = "svdpp"

    def _user_items(self):
        t = self.train
        flat = np.empty(t.n_ratings, dtype=np.int64)
        ptr = np.zeros(t.n_users + 1, dtype=np.int64)
        pos = 0
        for u in range(t.n_users):
            items, _ = t.user_ratings(u)
            ptr[u] = pos
            flat[pos:pos + len(items)] = items
            pos += len(items)
        ptr[t.n_users] = pos
        return flat, ptr

    def _fit(self, rng):
        cfg = self.cfg
        t = self.train
        self.bu = np.zeros(t.n_users)
        self.bi = np.zeros(t.n_items)
        self.P = rng.normal(0.0, cfg.svd_init_std, (t.n_users, cfg.svdpp_factors))
        self.Q = rng.normal(0.0, cfg.svd_init_std, (t.n_items, cfg.svdpp_factors))
        self.Y = rng.normal(0.0, cfg.svd_init_std, (t.n_items, cfg.svdpp_factors))
        flat, ptr = self._user_items()
        self._flat, self._ptr = flat, ptr
        for epoch in range(cfg.svdpp_epochs):
            _svdpp_epoch(t.uidx, t.iidx, t.values, t.global_mean,
                         self.bu, self.bi, self.P, self.Q, self.Y,
                         flat, ptr, cfg.svdpp_lr, cfg.svdpp_reg)
            _guard(self.algorithm, epoch, self.bu, self.bi, self.P, self.Q, self.Y)

    def _score(self, u, i):
        est = self.global_mean
        if u is not None:
            est += self.bu[u]
        if i is not None:
            est += self.bi[i]
        if u is not None and i is not None:
            items = self._flat[self._ptr[u]:self._ptr[u + 1]]
            impl = self.Y[items].sum(axis=0) / np.sqrt(len(items))
            return est + float(np.dot(self.Q[i], self.P[u] + impl)), False
        return est, True

    def param_arrays(self):
        return {"bu": self.bu, "bi": self.bi,
                "P": self.P, "Q": self.Q, "Y": self.Y}

    def _restore(self, arrays):
        self.bu, self.bi = arrays["bu"], arrays["bi"]
        self.P, self.Q, self.Y = arrays["P"], arrays["Q"], arrays["Y"]
        self._flat, self._ptr = self._user_items()


class Nmf(TrainedPredictor):
    """Non-negative q_i . p_u via regularized multiplicative updates."""

    algorithm = "nmf"

    def _fit(self, rng):
        cfg = self.cfg
        t = self.train
        self.P = rng.uniform(0.0, 1.0, (t.n_users, cfg.nmf_factors))
        self.Q = rng.uniform(0.0, 1.0, (t.n_items, cfg.nmf_factors))
        n_u = np.bincount(t.uidx, minlength=t.n_users).astype(np.float64)
        n_i = np.bincount(t.iidx, minlength=t.n_items).astype(np.float64)
        for epoch in range(cfg.nmf_epochs):
            _nmf_epoch(t.uidx, t.iidx, t.values, self.P, self.Q,
                       n_u, n_i, cfg.nmf_reg)
            _guard(self.algorithm, epoch, self.P, self.Q)

    def _score(self, u, i):
        if u is None or i is None:
            return self.global_mean, True
        return float(np.dot(self.P[u], self.Q[i])), False

    def param_arrays(self):
        return {"P": self.P, "Q": self.Q}

    def _restore(self, arrays):
        self.P, self.Q = arrays["P"], arrays["Q"]
