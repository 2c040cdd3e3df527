"""The nine-algorithm collaborative-filtering pool."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .base import (ALGORITHM_ORDER, RATING_MAX, RATING_MIN, PoolConfig,
                   TrainedPredictor, TrainingDivergedError, clip_rating)
from .baseline import BaselineEstimates, BaselineOnly, estimate_baselines
from .co_clustering import CoClustering
from .factor import Nmf, Svd, SvdPP
from .knn import KnnBaseline, KnnBasic, KnnWithMeans
from .matrix import RatingMatrix
from .similarity import SimilarityMatrix, compute_similarity
from .slope_one import SlopeOne

PREDICTOR_CLASSES = {cls.algorithm: cls for cls in (
    CoClustering, KnnBaseline, KnnBasic, KnnWithMeans,
    Nmf, Svd, SvdPP, SlopeOne, BaselineOnly)}

assert tuple(sorted(PREDICTOR_CLASSES)) == tuple(sorted(ALGORITHM_ORDER))


def fit_predictor(algorithm, train, cfg):
    """Fit one pool member; deterministic given (train, cfg)."""
    try:
        cls = PREDICTOR_CLASSES[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}") from None
    return cls.fit(train, cfg)


def fit_pool(train, cfg, algorithms=None, threads=1):
    """Fit the pool (all nine by default), in canonical order.

    Each trainer draws from its own (master_seed, algorithm) stream, so
    a parallel fit matches a sequential one exactly.
    """
    algorithms = tuple(algorithms) if algorithms else ALGORITHM_ORDER
    unknown = set(algorithms) - set(ALGORITHM_ORDER)
    if unknown:
        raise ValueError(f"unknown algorithms: {sorted(unknown)}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {a: pool.submit(fit_predictor, a, train, cfg)
                       for a in algorithms}
            return {a: f.result() for a, f in futures.items()}
    return {a: fit_predictor(a, train, cfg) for a in algorithms}


__all__ = [
    "ALGORITHM_ORDER", "RATING_MIN", "RATING_MAX", "PoolConfig",
    "TrainedPredictor", "TrainingDivergedError", "clip_rating",
    "BaselineEstimates", "BaselineOnly", "estimate_baselines",
    "CoClustering", "Nmf", "Svd", "SvdPP",
    "KnnBaseline", "KnnBasic", "KnnWithMeans",
    "RatingMatrix", "SimilarityMatrix", "compute_similarity",
    "SlopeOne", "PREDICTOR_CLASSES", "fit_predictor", "fit_pool",
]
