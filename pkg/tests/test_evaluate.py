import json

import numpy as np
import pytest

from metarec import (ExperimentConfig, rank_prediction_accuracy, rmse,
                     run_meta_experiment, run_oracle_experiment)
from metarec.evaluate import rank_accuracy_from_arrays


class TestRmse:
    def test_hand_case(self):
        assert rmse([1, -1, 2, 0]) == pytest.approx(np.sqrt(1.5))

    def test_all_zero(self):
        assert rmse([0.0, 0.0, 0.0]) == 0.0

    def test_single_error(self):
        assert rmse([-2.5]) == 2.5

    def test_constant_error_any_length(self):
        for n in (1, 3, 17):
            assert rmse([0.7] * n) == pytest.approx(0.7)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            rmse([])


class TestConfig:
    def test_bad_kind(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="macro")

    def test_meta_needs_folds(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="meta", folds=1)


@pytest.fixture(scope="module")
def oracle_report(dataset):
    return run_oracle_experiment(dataset, ExperimentConfig(kind="oracle", seed=9))


@pytest.fixture(scope="module")
def meta_report(dataset):
    return run_meta_experiment(dataset, ExperimentConfig(kind="meta", seed=9))


class TestOracleExperiment:
    def test_report_consistency(self, oracle_report):
        rep = oracle_report
        assert set(rep.algorithm_rmse) == {
            "co_clustering", "knn_baseline", "knn_basic", "knn_with_means",
            "nmf", "svd", "svdpp", "slope_one", "baseline_only"}
        for v in rep.algorithm_rmse.values():
            assert np.isfinite(v) and v >= 0
            assert rep.oracle_rmse <= v + 1e-12
        assert sum(rep.best_frequency_pct.values()) == pytest.approx(100.0)
        assert rep.single_best_rmse == min(rep.algorithm_rmse.values())

    def test_determinism(self, dataset, oracle_report):
        again = run_oracle_experiment(dataset, ExperimentConfig(kind="oracle", seed=9))
        assert again.to_json(include_timings=False) == \
            oracle_report.to_json(include_timings=False)

    def test_seed_changes_results(self, dataset, oracle_report):
        other = run_oracle_experiment(dataset, ExperimentConfig(kind="oracle", seed=10))
        assert other.algorithm_rmse != oracle_report.algorithm_rmse


class TestMetaExperiment:
    def test_oracle_below_meta_every_fold(self, meta_report):
        rep = meta_report
        assert len(rep.meta_rmse_per_fold) == 5
        for oracle, meta in zip(rep.oracle_rmse_per_fold, rep.meta_rmse_per_fold):
            assert oracle <= meta + 1e-12

    def test_report_fields(self, meta_report):
        rep = meta_report
        assert rep.meta_rmse is not None and np.isfinite(rep.meta_rmse)
        assert rep.ensemble_rmse is not None
        assert 0.0 <= rep.best_rank_accuracy <= 1.0
        assert 0.0 <= rep.worst_rank_accuracy <= 1.0
        assert sum(rep.selection_frequency_pct.values()) == pytest.approx(100.0)

    def test_meta_rmse_bounded_by_worst_algorithm(self, meta_report):
        # selection can't be worse than always picking the worst column
        assert meta_report.meta_rmse <= max(meta_report.algorithm_rmse.values()) + 0.25

    def test_determinism(self, dataset, meta_report):
        again = run_meta_experiment(dataset, ExperimentConfig(kind="meta", seed=9))
        assert again.to_json(include_timings=False) == \
            meta_report.to_json(include_timings=False)

    def test_json_roundtrip(self, meta_report, tmp_path):
        path = tmp_path / "report.json"
        meta_report.to_json(path)
        payload = json.loads(path.read_text())
        assert payload["dataset"] == "ml100k"
        assert payload["experiment"] == "meta"
        assert payload["meta_rmse"] == pytest.approx(meta_report.meta_rmse)

    def test_figure_csvs(self, meta_report, tmp_path):
        meta_report.write_figure_csvs(tmp_path)
        fig3 = (tmp_path / "fig3.csv").read_text().splitlines()
        assert fig3[0] == "algorithm,rmse"
        assert len(fig3) == 1 + 9 + 1   # nine algorithms + oracle
        fig4 = (tmp_path / "fig4.csv").read_text().splitlines()
        assert len(fig4) == 1 + 9
        fig5 = (tmp_path / "fig5.csv").read_text().splitlines()
        assert [r.split(",")[0] for r in fig5[1:]] == [
            "meta_learner", "single_best", "ensemble", "oracle"]


class TestRankAccuracy:
    def test_perfect_predictions(self):
        rng = np.random.Generator(np.random.PCG64(0))
        errs = rng.uniform(-2, 2, size=(500, 9))
        assert rank_accuracy_from_arrays(errs, errs) == (1.0, 1.0)

    def test_uniform_random_baseline(self):
        rng = np.random.Generator(np.random.PCG64(1))
        true = rng.uniform(-4, 4, size=(20_000, 9))
        predicted = rng.uniform(-4, 4, size=(20_000, 9))
        best, worst = rank_accuracy_from_arrays(predicted, true)
        assert best == pytest.approx(1 / 9, abs=0.02)
        assert worst == pytest.approx(1 / 9, abs=0.02)

    def test_full_pipeline_accuracy(self, dataset):
        from metarec import (PoolConfig, RatingMatrix, RidgeConfig,
                             build_schema, compute_error_table,
                             compute_meta_stats, encode_pair, fit_pool,
                             random_split, train_meta)
        plan = random_split(dataset, (0.5, 0.5), seed=1)
        train = RatingMatrix.from_dataset(dataset, plan.partitions[0])
        pool = fit_pool(train, PoolConfig(master_seed=1))
        test = [dataset.ratings[i] for i in plan.partitions[1]]
        table = compute_error_table(pool, test)
        schema = build_schema(dataset)
        stats = compute_meta_stats(train)
        rows = np.array([encode_pair(dataset.users[r.user_id],
                                     dataset.items[r.item_id], stats, schema)
                         for r in test])
        meta = train_meta(table, rows, RidgeConfig(), schema, stats)
        best, worst = rank_prediction_accuracy(meta, table, rows)
        # in-sample ranking of nine similar algorithms: weak but above chance
        assert 0.0 <= best <= 1.0 and 0.0 <= worst <= 1.0
        assert best > 1 / 30 and worst > 1 / 30
