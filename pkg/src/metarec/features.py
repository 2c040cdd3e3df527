"""Meta-learner input representation.

A feature vector is: user age, gender one-hot, occupation one-hot,
release-decade one-hot, genre multi-hot, then ten rating statistics
(mean / std / min / max / median for the user and for the item).

Numeric columns (age and the ten statistics) are z-scored with moments
estimated once from the meta-training rows; one-hot blocks stay raw 0/1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import RatingDataset

DECADES = ("pre1920", "1920s", "1930s", "1940s", "1950s",
           "1960s", "1970s", "1980s", "1990s", "2000s")

META_COLUMNS = ("user_mean", "user_std", "user_min", "user_max", "user_median",
                "item_mean", "item_std", "item_min", "item_max", "item_median")


class VocabularyError(ValueError):
    """A profile value falls outside the schema's closed vocabulary."""


@dataclass(frozen=True)
class FeatureSchema:
    dataset_name: str
    occupations: tuple[str, ...]
    genres: tuple[str, ...]
    columns: tuple[str, ...]
    numeric_idx: tuple[int, ...]   # columns subject to z-scoring

    def __len__(self):
        return len(self.columns)


def build_schema(ds: RatingDataset) -> FeatureSchema:
    """Column layout for a dataset, in the order its vocabularies ship."""
    columns = ["age", "gender_M", "gender_F"]
    columns += [f"occupation_{o}" for o in ds.occupation_vocab]
    columns += [f"decade_{d}" for d in DECADES]
    columns += [f"genre_{g}" for g in ds.genre_vocab]
    meta_start = len(columns)
    columns += META_COLUMNS
    numeric = (0,) + tuple(range(meta_start, meta_start + len(META_COLUMNS)))
    return FeatureSchema(
        dataset_name=ds.name,
        occupations=tuple(ds.occupation_vocab),
        genres=tuple(ds.genre_vocab),
        columns=tuple(columns),
        numeric_idx=numeric)


def _stats_of(values):
    v = np.asarray(values, dtype=np.float64)
    return (float(v.mean()), float(v.std()), float(v.min()),
            float(v.max()), float(np.median(v)))


@dataclass(frozen=True)
class MetaFeatureStats:
    """Per-user and per-item rating statistics from the pool-training
    partition only; unseen entities get the global fallback tuple."""

    user_stats: dict[int, tuple]
    item_stats: dict[int, tuple]
    fallback: tuple

    @classmethod
    def from_matrix(cls, train):
        users = {}
        for u, uid in enumerate(train.user_ids):
            _, vals = train.user_ratings(u)
            users[int(uid)] = _stats_of(vals)
        items = {}
        for i, iid in enumerate(train.item_ids):
            _, vals = train.item_ratings(i)
            items[int(iid)] = _stats_of(vals)
        mu = train.global_mean
        fallback = (mu, float(train.values.std()), 1.0, 5.0, mu)
        return cls(user_stats=users, item_stats=items, fallback=fallback)


def compute_meta_stats(train) -> MetaFeatureStats:
    return MetaFeatureStats.from_matrix(train)


def _decade_block(year):
    block = np.zeros(len(DECADES))
    if year is None:
        return block
    if year < 1920:
        block[0] = 1.0
    else:
        idx = min((year - 1920) // 10 + 1, len(DECADES) - 1)
        block[idx] = 1.0
    return block


def encode_pair(user, item, stats: MetaFeatureStats,
                schema: FeatureSchema) -> np.ndarray:
    """Raw (un-standardized) feature vector for one user-item pair."""
    parts = [np.array([float(user.age)])]

    gender = np.zeros(2)
    if user.gender == "M":
        gender[0] = 1.0
    elif user.gender == "F":
        gender[1] = 1.0
    else:
        raise VocabularyError(f"gender {user.gender!r} not in {{M, F}}")
    parts.append(gender)

    occ = np.zeros(len(schema.occupations))
    try:
        occ[schema.occupations.index(user.occupation)] = 1.0
    except ValueError:
        raise VocabularyError(
            f"occupation {user.occupation!r} not in schema vocabulary") from None
    parts.append(occ)

    parts.append(_decade_block(item.release_year))

    genres = np.zeros(len(schema.genres))
    for g in item.genres:
        try:
            genres[schema.genres.index(g)] = 1.0
        except ValueError:
            raise VocabularyError(
                f"genre {g!r} not in schema vocabulary") from None
    parts.append(genres)

    parts.append(np.array(stats.user_stats.get(user.user_id, stats.fallback)))
    parts.append(np.array(stats.item_stats.get(item.item_id, stats.fallback)))

    vec = np.concatenate(parts)
    assert len(vec) == len(schema)
    return vec


@dataclass(frozen=True)
class Standardizer:
    """z-scoring moments for a schema's numeric columns."""

    numeric_idx: tuple[int, ...]
    mean: np.ndarray
    scale: np.ndarray   # std, with 1.0 substituted for constant columns

    @classmethod
    def fit(cls, rows, schema: FeatureSchema):
        rows = np.asarray(rows, dtype=np.float64)
        idx = list(schema.numeric_idx)
        mean = rows[:, idx].mean(axis=0)
        std = rows[:, idx].std(axis=0)
        scale = np.where(std > 0, std, 1.0)
        return cls(numeric_idx=schema.numeric_idx, mean=mean, scale=scale)

    def transform(self, rows):
        rows = np.array(rows, dtype=np.float64, copy=True)
        one_d = rows.ndim == 1
        if one_d:
            rows = rows[None, :]
        idx = list(self.numeric_idx)
        rows[:, idx] = (rows[:, idx] - self.mean) / self.scale
        return rows[0] if one_d else rows
