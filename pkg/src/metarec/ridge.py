"""Ridge regression by direct normal equations (Cholesky solve)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class SingularSystemError(np.linalg.LinAlgError):
    """Normal equations are singular (retry with lambda > 0)."""


@dataclass(frozen=True)
class RidgeConfig:
    lam: float = 1e-6

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    intercept: float


def fit_ridge(rows, targets, cfg: RidgeConfig = RidgeConfig()) -> LinearModel:
    """Minimize sum (w.x + b - y)^2 + lambda ||w||^2 (intercept free).

    Solved via the augmented normal equations with lambda added to the
    Gram diagonal (except the intercept entry) and a symmetric
    positive-definite factorization.
    """
    X = np.asarray(rows, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if X.ndim != 2 or len(X) != len(y) or len(y) < 1:
        raise ValueError("rows/targets shape mismatch")

    aug = np.hstack([X, np.ones((len(X), 1))])
    gram = aug.T @ aug
    n = X.shape[1]
    gram[np.arange(n), np.arange(n)] += cfg.lam
    rhs = aug.T @ y
    try:
        c, low = scipy.linalg.cho_factor(gram)
        sol = scipy.linalg.cho_solve((c, low), rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"singular normal equations at lambda={cfg.lam}") from exc
    if not np.all(np.isfinite(sol)):
        raise SingularSystemError(
            f"non-finite solution at lambda={cfg.lam}")
    return LinearModel(weights=sol[:-1], intercept=float(sol[-1]))


def predict_linear(model: LinearModel, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.weights.shape:
        raise ValueError(
            f"feature length {x.shape} != model length {model.weights.shape}")
    return float(np.dot(model.weights, x) + model.intercept)
