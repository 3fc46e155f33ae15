"""Binary logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, class_counts


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    max_iterations: int = 1000
    l2_penalty: float = 1.0
    tolerance: float = 1e-6
    standardize: bool = True

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not self.l2_penalty >= 0:
            raise ValueError("l2_penalty must be non-negative")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class LogisticModel:
    """Weights act on raw features; any standardization is already folded in.

    ``feature_mean``/``feature_scale`` record the standardization that was
    used during training, for reference only.
    """

    weights: np.ndarray
    intercept: float
    feature_mean: np.ndarray | None = None
    feature_scale: np.ndarray | None = None
    iterations: int = 0
    final_loss: float = float("nan")
    converged: bool = False
    loss_history: tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "weights": [float(w) for w in self.weights],
            "intercept": float(self.intercept),
            "standardization": None if self.feature_mean is None else {
                "mean": [float(m) for m in self.feature_mean],
                "scale": [float(s) for s in self.feature_scale],
            },
            "training_meta": {
                "iterations": self.iterations,
                "final_loss": self.final_loss,
                "converged": self.converged,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_gradient(weights, intercept, X, y, l2_penalty):
    """Mean negative log-likelihood plus ``l2_penalty * |w|^2 / (2 n)``.

    The penalty matches an inverse-regularization strength ``C = 1 / l2``
    applied to the summed likelihood; the intercept is not penalized.
    Returns ``(loss, grad_w, grad_b)``.
    """
    n = X.shape[0]
    z = X @ weights + intercept
    # log(1 + e^z) - y z, computed stably
    loss = np.mean(np.logaddexp(0.0, z) - y * z)
    loss += l2_penalty * float(weights @ weights) / (2 * n)
    resid = sigmoid(z) - y
    grad_w = X.T @ resid / n + l2_penalty * weights / n
    grad_b = float(resid.mean())
    return float(loss), grad_w, grad_b


def fit(train: Dataset, cfg: TrainConfig = TrainConfig()) -> LogisticModel:
    counts = class_counts(train)
    if counts.n_negative == 0 or counts.n_positive == 0:
        raise TrainingError("training data must contain both classes")

    X = train.features
    y = train.labels.astype(np.float64)
    mean = scale = None
    if cfg.standardize:
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
        X = (X - mean) / scale

    w = np.zeros(X.shape[1])
    b = 0.0
    loss, gw, gb = loss_and_gradient(w, b, X, y, cfg.l2_penalty)
    history = [loss]
    converged = False
    it = 0
    while it < cfg.max_iterations:
        w = w - cfg.learning_rate * gw
        b = b - cfg.learning_rate * gb
        it += 1
        # overflow surfaces as a non-finite loss below
        with np.errstate(over="ignore", invalid="ignore"):
            new_loss, gw, gb = loss_and_gradient(w, b, X, y, cfg.l2_penalty)
        if not np.isfinite(new_loss):
            raise TrainingError(f"loss diverged at iteration {it}")
        history.append(new_loss)
        if abs(loss - new_loss) < cfg.tolerance:
            loss = new_loss
            converged = True
            break
        loss = new_loss

    if cfg.standardize:
        raw_w = w / scale
        raw_b = b - float(raw_w @ mean)
    else:
        raw_w, raw_b = w, b
    return LogisticModel(
        weights=raw_w,
        intercept=float(raw_b),
        feature_mean=mean,
        feature_scale=scale,
        iterations=it,
        final_loss=float(loss),
        converged=converged,
        loss_history=tuple(history),
    )


def predict_proba(model: LogisticModel, features) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.weights.shape[0]:
        raise ValueError(
            f"expected {model.weights.shape[0]} feature columns, got shape {X.shape}"
        )
    return sigmoid(X @ model.weights + model.intercept)


def predict(model: LogisticModel, features, threshold: float = 0.5) -> np.ndarray:
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    return (predict_proba(model, features) >= threshold).astype(np.int64)
