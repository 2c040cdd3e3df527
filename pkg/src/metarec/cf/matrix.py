"""Compact training-matrix representation shared by all predictors."""

from __future__ import annotations

import numpy as np


class RatingMatrix:
    """Ratings in both user-major and item-major adjacency.

    External user/item ids are remapped to contiguous inner indices;
    predictors look ids up through ``uindex`` / ``iindex`` and fall back
    when a lookup misses.
    """

    def __init__(self, user_ids, item_ids, values):
        user_ids = np.asarray(user_ids, dtype=np.int64)
        item_ids = np.asarray(item_ids, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if not (len(user_ids) == len(item_ids) == len(values)):
            raise ValueError("ragged rating arrays")
        if len(values) == 0:
            raise ValueError("empty training set")

        self.user_ids = np.unique(user_ids)
        self.item_ids = np.unique(item_ids)
        self.uindex = {int(u): i for i, u in enumerate(self.user_ids)}
        self.iindex = {int(j): i for i, j in enumerate(self.item_ids)}

        self.uidx = np.searchsorted(self.user_ids, user_ids)
        self.iidx = np.searchsorted(self.item_ids, item_ids)
        self.values = values
        self.global_mean = float(values.mean())

        self._by_user = self._adjacency(self.uidx, self.iidx, len(self.user_ids))
        self._by_item = self._adjacency(self.iidx, self.uidx, len(self.item_ids))

    def _adjacency(self, major, minor, n):
        order = np.argsort(major, kind="stable")
        starts = np.searchsorted(major[order], np.arange(n + 1))
        return [(minor[order[a:b]], self.values[order[a:b]])
                for a, b in zip(starts[:-1], starts[1:])]

    @classmethod
    def from_dataset(cls, ds, indices=None):
        ratings = ds.ratings if indices is None else [ds.ratings[i] for i in indices]
        return cls([r.user_id for r in ratings],
                   [r.item_id for r in ratings],
                   [r.value for r in ratings])

    @property
    def n_users(self):
        return len(self.user_ids)

    @property
    def n_items(self):
        return len(self.item_ids)

    @property
    def n_ratings(self):
        return len(self.values)

    def user_ratings(self, u):
        """(item inner indices, values) for inner user index ``u``."""
        return self._by_user[u]

    def item_ratings(self, i):
        """(user inner indices, values) for inner item index ``i``."""
        return self._by_item[i]

    def dense(self, dtype=np.float64):
        """(n_users, n_items) dense matrix with 0 for missing entries."""
        out = np.zeros((self.n_users, self.n_items), dtype=dtype)
        out[self.uidx, self.iidx] = self.values
        return out

    def mask(self, dtype=np.float64):
        """Binary rated-mask matching :meth:`dense`."""
        out = np.zeros((self.n_users, self.n_items), dtype=dtype)
        out[self.uidx, self.iidx] = 1.0
        return out

    def user_means(self):
        counts = np.array([len(v) for _, v in self._by_user], dtype=np.float64)
        sums = np.array([v.sum() for _, v in self._by_user])
        return sums / counts

    def item_means(self):
        counts = np.array([len(v) for _, v in self._by_item], dtype=np.float64)
        sums = np.array([v.sum() for _, v in self._by_item])
        return sums / counts

    def fingerprint(self):
        """Content hash of the rating triples, for cache validation."""
        import hashlib
        h = hashlib.sha256()
        h.update(self.user_ids[self.uidx].tobytes())
        h.update(self.item_ids[self.iidx].tobytes())
        h.update(self.values.tobytes())
        return h.hexdigest()
