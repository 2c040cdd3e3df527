import numpy as np
import pytest

from metarec import (RatingMatrix, build_schema, compute_meta_stats,
                     encode_pair, random_split)
from metarec.data import ItemProfile, UserProfile
from metarec.features import DECADES, Standardizer, VocabularyError

from conftest import GENRES, OCCUPATIONS


@pytest.fixture(scope="module")
def schema(dataset):
    return build_schema(dataset)


@pytest.fixture(scope="module")
def stats(train_matrix):
    return compute_meta_stats(train_matrix)


class TestSchema:
    def test_column_counts(self, schema):
        occ = [c for c in schema.columns if c.startswith("occupation_")]
        gen = [c for c in schema.columns if c.startswith("genre_")]
        dec = [c for c in schema.columns if c.startswith("decade_")]
        assert len(occ) == len(OCCUPATIONS)
        assert len(gen) == len(GENRES)
        assert len(dec) == len(DECADES)
        assert len(schema) == 1 + 2 + len(occ) + len(dec) + len(gen) + 10

    def test_vocabulary_order_preserved(self, schema):
        assert schema.occupations == OCCUPATIONS
        assert schema.genres == GENRES

    def test_deterministic(self, dataset):
        assert build_schema(dataset) == build_schema(dataset)

    def test_numeric_columns(self, schema):
        assert schema.numeric_idx[0] == 0          # age
        assert len(schema.numeric_idx) == 11       # age + 10 meta features


class TestMetaStats:
    def test_hand_case_1_to_5(self):
        m = RatingMatrix([1] * 5, [1, 2, 3, 4, 5], [1, 2, 3, 4, 5])
        s = compute_meta_stats(m)
        mean, std, lo, hi, med = s.user_stats[1]
        assert mean == 3.0
        assert std == pytest.approx(np.sqrt(2.0))
        assert (lo, hi, med) == (1.0, 5.0, 3.0)

    def test_singleton(self):
        m = RatingMatrix([1, 2], [1, 1], [4, 2])
        assert compute_meta_stats(m).user_stats[1] == (4.0, 0.0, 4.0, 4.0, 4.0)

    def test_even_length_median(self):
        m = RatingMatrix([1] * 4, [1, 2, 3, 4], [1, 2, 4, 5])
        assert compute_meta_stats(m).user_stats[1][4] == 3.0

    def test_global_fallback(self, train_matrix, stats):
        mu = train_matrix.global_mean
        assert stats.fallback == (mu, pytest.approx(train_matrix.values.std()),
                                  1.0, 5.0, mu)

    def test_ordering_invariant(self, stats):
        for entry in list(stats.user_stats.values()) + list(stats.item_stats.values()):
            mean, std, lo, hi, med = entry
            assert lo <= med <= hi
            assert std >= 0

    def test_leakage_guard(self, dataset):
        # stats depend only on the pool-training partition: removing any
        # test rating changes nothing, bit for bit
        plan = random_split(dataset, (0.5, 0.5), seed=3)
        train_idx = plan.partitions[0]
        full = compute_meta_stats(RatingMatrix.from_dataset(dataset, train_idx))
        for drop in plan.partitions[1][:5]:
            again = compute_meta_stats(RatingMatrix.from_dataset(dataset, train_idx))
            assert again == full


class TestEncodePair:
    def test_length_invariance(self, dataset, stats, schema):
        for r in dataset.ratings[:200]:
            vec = encode_pair(dataset.users[r.user_id], dataset.items[r.item_id],
                              stats, schema)
            assert len(vec) == len(schema)
            assert np.all(np.isfinite(vec))

    def test_gender_one_hot(self, dataset, stats, schema):
        male = UserProfile(1, 30, "M", OCCUPATIONS[0])
        vec = encode_pair(male, next(iter(dataset.items.values())), stats, schema)
        assert (vec[1], vec[2]) == (1.0, 0.0)
        female = UserProfile(1, 30, "F", OCCUPATIONS[0])
        vec = encode_pair(female, next(iter(dataset.items.values())), stats, schema)
        assert (vec[1], vec[2]) == (0.0, 1.0)

    def test_one_hot_block_sums(self, dataset, stats, schema):
        cols = list(schema.columns)
        occ = [k for k, c in enumerate(cols) if c.startswith("occupation_")]
        dec = [k for k, c in enumerate(cols) if c.startswith("decade_")]
        gender = [1, 2]
        for r in dataset.ratings[:200]:
            item = dataset.items[r.item_id]
            vec = encode_pair(dataset.users[r.user_id], item, stats, schema)
            for block in (occ, dec, gender):
                block_vals = vec[block]
                assert set(block_vals) <= {0.0, 1.0}
                expected = 0.0 if (block is dec and item.release_year is None) else 1.0
                assert block_vals.sum() == expected

    def test_multi_hot_genres(self, dataset, stats, schema):
        item = ItemProfile(1, "x", 1985, frozenset({"Action", "Comedy"}))
        user = next(iter(dataset.users.values()))
        vec = encode_pair(user, item, stats, schema)
        gen0 = schema.columns.index(f"genre_{GENRES[0]}")
        block = vec[gen0:gen0 + len(GENRES)]
        assert block.sum() == 2.0
        assert block[GENRES.index("Action")] == 1.0
        assert block[GENRES.index("Comedy")] == 1.0

    def test_absent_year_zero_block(self, dataset, stats, schema):
        item = ItemProfile(1, "x", None, frozenset())
        user = next(iter(dataset.users.values()))
        vec = encode_pair(user, item, stats, schema)
        dec0 = schema.columns.index(f"decade_{DECADES[0]}")
        assert vec[dec0:dec0 + len(DECADES)].sum() == 0.0

    def test_decade_buckets(self, dataset, stats, schema):
        user = next(iter(dataset.users.values()))
        for year, bucket in ((1915, "pre1920"), (1920, "1920s"),
                             (1969, "1960s"), (1999, "1990s")):
            item = ItemProfile(1, "x", year, frozenset())
            vec = encode_pair(user, item, stats, schema)
            assert vec[schema.columns.index(f"decade_{bucket}")] == 1.0

    def test_unseen_entity_uses_fallback(self, dataset, stats, schema):
        user = UserProfile(10**7, 30, "M", OCCUPATIONS[0])
        item = ItemProfile(10**7, "x", 1990, frozenset())
        vec = encode_pair(user, item, stats, schema)
        assert tuple(vec[-10:-5]) == stats.fallback
        assert tuple(vec[-5:]) == stats.fallback

    def test_out_of_vocabulary_rejected(self, dataset, stats, schema):
        user = UserProfile(1, 30, "M", "astronaut")
        item = next(iter(dataset.items.values()))
        with pytest.raises(VocabularyError):
            encode_pair(user, item, stats, schema)
        item = ItemProfile(1, "x", 1990, frozenset({"Telenovela"}))
        user = next(iter(dataset.users.values()))
        with pytest.raises(VocabularyError):
            encode_pair(user, item, stats, schema)


class TestStandardizer:
    def test_zscores_numeric_only(self, dataset, stats, schema):
        rows = np.array([encode_pair(dataset.users[r.user_id],
                                     dataset.items[r.item_id], stats, schema)
                         for r in dataset.ratings[:300]])
        std = Standardizer.fit(rows, schema)
        out = std.transform(rows)
        idx = list(schema.numeric_idx)
        assert np.allclose(out[:, idx].mean(axis=0), 0.0, atol=1e-9)
        onehot = [k for k in range(rows.shape[1]) if k not in idx]
        assert np.array_equal(out[:, onehot], rows[:, onehot])

    def test_constant_column_left_at_zero(self, schema):
        rows = np.ones((5, len(schema)))
        std = Standardizer.fit(rows, schema)
        out = std.transform(rows)
        assert np.all(np.isfinite(out))
        assert np.allclose(out[:, list(schema.numeric_idx)], 0.0)
