"""Feature-vector classifier: one rectifier hidden layer and a sigmoid output,
trained like the sequence model (momentum gradient descent, cross-entropy).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels_np import sigmoid
from .lstm import TrainConfig

MLP_INPUT_DIM = 11
MLP_HIDDEN_DIM = 16


@dataclass
class MlpModel:
    w1: np.ndarray  # (input_dim, hidden)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (hidden,)
    b2: float
    mu: np.ndarray
    sigma: np.ndarray
    loss_history: list[float] = field(default_factory=list, compare=False, repr=False)

    @property
    def input_dim(self) -> int:
        return self.mu.size

    @property
    def hidden_dim(self) -> int:
        return self.w2.size

    def standardize(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mu) / self.sigma

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.shape[1] != self.input_dim:
            raise ValueError(f"expected {self.input_dim} features, got {x.shape[1]}")
        if not np.all(np.isfinite(x)):
            raise ValueError("non-finite input")
        logits = _forward_logits(self.w1, self.b1, self.w2, self.b2, self.standardize(x))[0]
        probs = np.clip(sigmoid(logits), 1e-12, 1.0 - 1e-12)
        return probs[0] if single else probs


def mlp_forward(model: MlpModel, x) -> float:
    """Probability for a single feature vector."""
    return float(model.predict_proba(np.asarray(x, dtype=float)))


def _forward_logits(w1, b1, w2, b2, x):
    hidden = np.maximum(x @ w1 + b1, 0.0)
    return hidden @ w2 + b2, hidden


def _loss_and_grads(w1, b1, w2, b2, x, y):
    n = x.shape[0]
    logits, hidden = _forward_logits(w1, b1, w2, b2, x)
    loss = float(np.mean(np.logaddexp(0.0, logits) - y * logits))
    dlogit = (sigmoid(logits) - y) / n
    dw2 = hidden.T @ dlogit
    db2 = float(dlogit.sum())
    dhidden = dlogit[:, None] * w2[None, :]
    dhidden = dhidden * (hidden > 0)
    dw1 = x.T @ dhidden
    db1 = dhidden.sum(axis=0)
    return loss, dw1, db1, dw2, db2


def init_mlp(input_dim: int = MLP_INPUT_DIM, hidden_dim: int = MLP_HIDDEN_DIM, seed: int = 0) -> MlpModel:
    rng = np.random.default_rng(seed)
    w1, b1, w2, b2 = _init_params(input_dim, hidden_dim, rng)
    return MlpModel(w1=w1, b1=b1, w2=w2, b2=b2,
                    mu=np.zeros(input_dim), sigma=np.ones(input_dim))


def _init_params(input_dim: int, hidden_dim: int, rng: np.random.Generator):
    bound = 1.0 / np.sqrt(input_dim)
    w1 = rng.uniform(-bound, bound, size=(input_dim, hidden_dim))
    b1 = np.zeros(hidden_dim)
    out_bound = 1.0 / np.sqrt(hidden_dim)
    w2 = rng.uniform(-out_bound, out_bound, size=hidden_dim)
    return w1, b1, w2, 0.0


def mlp_train(samples, cfg: TrainConfig, hidden_dim: int = MLP_HIDDEN_DIM) -> MlpModel:
    """Train on StressSamples; deterministic given cfg.seed."""
    samples = list(samples)
    y = np.array([s.label for s in samples], dtype=float)
    x = np.stack([s.features.to_array() for s in samples])
    return mlp_train_arrays(x, y, cfg, hidden_dim)


def mlp_train_arrays(x: np.ndarray, y: np.ndarray, cfg: TrainConfig, hidden_dim: int = MLP_HIDDEN_DIM) -> MlpModel:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(np.unique(y)) < 2:
        raise ValueError("training requires both classes")
    rng = np.random.default_rng(cfg.seed)
    w1, b1, w2, b2 = _init_params(x.shape[1], hidden_dim, rng)
    mu = x.mean(axis=0)
    sigma = x.std(axis=0)
    sigma = np.where(sigma < 1e-8, 1.0, sigma)
    xs = (x - mu) / sigma
    n = xs.shape[0]

    vel = [np.zeros_like(w1), np.zeros_like(b1), np.zeros_like(w2), 0.0]
    history = [_loss_and_grads(w1, b1, w2, b2, xs, y)[0]]
    for _ in range(cfg.epochs):
        perm = rng.permutation(n)
        epoch_losses = []
        for s in range(0, n, cfg.batch_size):
            idx = perm[s : s + cfg.batch_size]
            loss, dw1, db1, dw2, db2 = _loss_and_grads(w1, b1, w2, b2, xs[idx], y[idx])
            if not np.isfinite(loss):
                raise FloatingPointError(f"non-finite training loss: {loss}")
            vel[0] = cfg.momentum * vel[0] - cfg.learning_rate * dw1
            vel[1] = cfg.momentum * vel[1] - cfg.learning_rate * db1
            vel[2] = cfg.momentum * vel[2] - cfg.learning_rate * dw2
            vel[3] = cfg.momentum * vel[3] - cfg.learning_rate * db2
            w1 = w1 + vel[0]
            b1 = b1 + vel[1]
            w2 = w2 + vel[2]
            b2 = b2 + vel[3]
            epoch_losses.append(loss)
        history.append(float(np.mean(epoch_losses)))

    model = MlpModel(w1=w1, b1=b1, w2=w2, b2=float(b2), mu=mu, sigma=sigma)
    model.loss_history = history
    return model
