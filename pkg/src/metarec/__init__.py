"""metarec: per-instance recommendation-algorithm selection.

Train a pool of nine collaborative-filtering predictors, learn one
linear error model per algorithm, and pick the algorithm with the
smallest predicted absolute error for each user-item pair.
"""

from .cf import (ALGORITHM_ORDER, PoolConfig, RatingMatrix,
                 TrainingDivergedError, compute_similarity,
                 estimate_baselines, fit_pool, fit_predictor)
from .data import (DataError, ItemProfile, MalformedLineError, Rating,
                   RatingDataset, SplitPlan, UserProfile, kfold,
                   load_movielens, random_split)
from .evaluate import (EvaluationReport, ExperimentConfig,
                       rank_prediction_accuracy, rmse,
                       run_meta_experiment, run_oracle_experiment)
from .features import (FeatureSchema, MetaFeatureStats, Standardizer,
                       build_schema, compute_meta_stats, encode_pair)
from .meta import (ErrorTable, MetaModel, SelectionResult, best_frequency,
                   compute_error_table, ensemble_average, oracle_best,
                   oracle_rmse, select_and_predict, train_meta)
from .ridge import (LinearModel, RidgeConfig, SingularSystemError,
                    fit_ridge, predict_linear)

__version__ = "0.1.0"
