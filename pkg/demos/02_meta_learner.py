"""Demo 2: can a meta-learner capture the oracle's headroom?

Splits the data 50/50: the first half trains the pool of nine predictors,
the second half is evaluated with 5-fold cross-validation. For each fold,
one ridge model per algorithm learns to predict that algorithm's signed
error from user demographics, item metadata, and rating statistics; at
prediction time the algorithm with the smallest predicted |error| is
selected for each user-item pair.

Run:  python3 demos/02_meta_learner.py
Uses real MovieLens 100K when MOVIELENS_DATA_DIR is set; otherwise a
small synthetic dataset so the script finishes in seconds.
"""

from _toy_data import get_dataset

from metarec import ExperimentConfig, PoolConfig, run_meta_experiment

ds, label = get_dataset()
print(f"dataset: {label} ({len(ds.ratings)} ratings)")

cfg = ExperimentConfig(kind="meta", seed=42, folds=5,
                       pool=PoolConfig(master_seed=42))
report = run_meta_experiment(ds, cfg)

print("\nheadline RMSE (5-fold CV on the evaluation half):")
print(f"  meta-learner selection : {report.meta_rmse:.4f}")
print(f"  best single algorithm  : {report.single_best_rmse:.4f} "
      f"({report.single_best_algorithm})")
print(f"  ensemble (mean of 9)   : {report.ensemble_rmse:.4f}")
print(f"  oracle upper bound     : {report.oracle_rmse:.4f}")

print("\nper-fold meta vs oracle RMSE:")
for k, (m, o) in enumerate(zip(report.meta_rmse_per_fold,
                               report.oracle_rmse_per_fold)):
    print(f"  fold {k}: meta {m:.4f}   oracle {o:.4f}")

print("\nhow often the meta-learner picks each algorithm:")
for name, pct in sorted(report.selection_frequency_pct.items(),
                        key=lambda kv: -kv[1]):
    print(f"  {name:<14} {pct:5.2f}%")

print(f"\nrank-prediction accuracy: picks the true best algorithm "
      f"{report.best_rank_accuracy:.1%} of the time,\nbut the true worst "
      f"{report.worst_rank_accuracy:.1%} of the time (random would be 11.1% "
      "for both).")
print("The selector finds real signal about which algorithms err, yet "
      "mistaking the\nworst for the best is costly enough that the simple "
      "per-pair selection does not\nbeat the single best algorithm — the "
      "oracle headroom stays mostly uncaptured.")
