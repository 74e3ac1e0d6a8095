"""Sequence classifier: a single-layer gated recurrent cell with a sigmoid
readout from the final hidden state, trained with momentum gradient descent on
mean binary cross-entropy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .backend import kernels

LSTM_INPUT_DIM = 5
LSTM_HIDDEN_DIM = 32
PREDICT_CHUNK = 512


@dataclass
class TrainConfig:
    learning_rate: float = 0.01
    momentum: float = 0.9
    epochs: int = 50
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass
class LstmModel:
    """Gate weights w ((input+hidden) x 4*hidden, gate order input/forget/
    candidate/output), gate bias b, readout w_out/b_out, and the per-channel
    standardization (mu, sigma) learned from the training set."""

    w: np.ndarray
    b: np.ndarray
    w_out: np.ndarray
    b_out: float
    mu: np.ndarray
    sigma: np.ndarray
    loss_history: list[float] = field(default_factory=list, compare=False, repr=False)

    @property
    def input_dim(self) -> int:
        return self.mu.size

    @property
    def hidden_dim(self) -> int:
        return self.w_out.size

    def standardize(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mu) / self.sigma

    def predict_proba(self, windows: np.ndarray) -> np.ndarray:
        """Probabilities for a stack of sequences of shape (N, T, input_dim)."""
        x = np.ascontiguousarray(np.asarray(windows, dtype=float))
        if x.ndim != 3 or x.shape[2] != self.input_dim:
            raise ValueError(f"expected (N, T, {self.input_dim}) input, got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("non-finite input")
        x = self.standardize(x)
        out = np.empty(x.shape[0])
        for s in range(0, x.shape[0], PREDICT_CHUNK):
            chunk = np.ascontiguousarray(x[s : s + PREDICT_CHUNK])
            out[s : s + PREDICT_CHUNK] = kernels.lstm_probs(
                self.w, self.b, self.w_out, self.b_out, chunk
            )
        return np.clip(out, 1e-12, 1.0 - 1e-12)


def lstm_forward(model: LstmModel, sequence) -> float:
    """Probability for a single (T, input_dim) sequence."""
    seq = np.asarray(sequence, dtype=float)
    if seq.ndim != 2:
        raise ValueError(f"expected a 2-D sequence, got shape {seq.shape}")
    if seq.shape[0] < 1:
        raise ValueError("empty sequence")
    return float(model.predict_proba(seq[None, :, :])[0])


def _init_params(input_dim: int, hidden_dim: int, rng: np.random.Generator):
    """Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per receiving block."""
    fan_in = input_dim + hidden_dim
    bound = 1.0 / np.sqrt(fan_in)
    w = rng.uniform(-bound, bound, size=(fan_in, 4 * hidden_dim))
    b = np.zeros(4 * hidden_dim)
    out_bound = 1.0 / np.sqrt(hidden_dim)
    w_out = rng.uniform(-out_bound, out_bound, size=hidden_dim)
    return w, b, w_out, 0.0


def init_lstm(input_dim: int = LSTM_INPUT_DIM, hidden_dim: int = LSTM_HIDDEN_DIM, seed: int = 0) -> LstmModel:
    rng = np.random.default_rng(seed)
    w, b, w_out, b_out = _init_params(input_dim, hidden_dim, rng)
    return LstmModel(w=w, b=b, w_out=w_out, b_out=b_out,
                     mu=np.zeros(input_dim), sigma=np.ones(input_dim))


def fit_standardization(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-channel mean/std over all windows and timesteps; std floored so
    constant channels stay finite."""
    mu = x.reshape(-1, x.shape[-1]).mean(axis=0)
    sigma = x.reshape(-1, x.shape[-1]).std(axis=0)
    sigma = np.where(sigma < 1e-8, 1.0, sigma)
    return mu, sigma


def lstm_train(samples, cfg: TrainConfig, hidden_dim: int = LSTM_HIDDEN_DIM) -> LstmModel:
    """Train on WindowSamples; deterministic given cfg.seed.

    The model's loss_history holds the full-data loss at initialization
    followed by the mean batch loss of each epoch.
    """
    samples = list(samples)
    labels = np.array([s.label for s in samples], dtype=float)
    if len(np.unique(labels)) < 2:
        raise ValueError("training requires both classes")
    x = np.ascontiguousarray(np.stack([s.features for s in samples]).astype(float))
    return _fit(x, labels, cfg, hidden_dim)


def _fit(x: np.ndarray, y: np.ndarray, cfg: TrainConfig, hidden_dim: int) -> LstmModel:
    rng = np.random.default_rng(cfg.seed)
    input_dim = x.shape[2]
    w, b, w_out, b_out = _init_params(input_dim, hidden_dim, rng)
    mu, sigma = fit_standardization(x)
    xs = np.ascontiguousarray((x - mu) / sigma)
    n = xs.shape[0]

    vel = [np.zeros_like(w), np.zeros_like(b), np.zeros_like(w_out), 0.0]
    history = [_full_loss(w, b, w_out, b_out, xs, y, cfg.batch_size)]
    for _ in range(cfg.epochs):
        perm = rng.permutation(n)
        epoch_losses = []
        for s in range(0, n, cfg.batch_size):
            idx = perm[s : s + cfg.batch_size]
            bx = np.ascontiguousarray(xs[idx])
            loss, dw, db, dw_out, db_out = kernels.lstm_loss_and_grads(w, b, w_out, b_out, bx, y[idx])
            if not np.isfinite(loss):
                raise FloatingPointError(f"non-finite training loss: {loss}")
            vel[0] = cfg.momentum * vel[0] - cfg.learning_rate * dw
            vel[1] = cfg.momentum * vel[1] - cfg.learning_rate * db
            vel[2] = cfg.momentum * vel[2] - cfg.learning_rate * dw_out
            vel[3] = cfg.momentum * vel[3] - cfg.learning_rate * db_out
            w = w + vel[0]
            b = b + vel[1]
            w_out = w_out + vel[2]
            b_out = b_out + vel[3]
            epoch_losses.append(loss)
        history.append(float(np.mean(epoch_losses)))

    model = LstmModel(w=w, b=b, w_out=w_out, b_out=float(b_out), mu=mu, sigma=sigma)
    model.loss_history = history
    return model


def _full_loss(w, b, w_out, b_out, xs, y, batch_size: int) -> float:
    total = 0.0
    n = xs.shape[0]
    for s in range(0, n, batch_size):
        bx = np.ascontiguousarray(xs[s : s + batch_size])
        loss, *_ = kernels.lstm_loss_and_grads(w, b, w_out, b_out, bx, y[s : s + batch_size])
        total += loss * bx.shape[0]
    return total / n
