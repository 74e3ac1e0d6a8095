"""Finite-difference verification of the analytic gradients.

Central differences with h = 1e-5 over every scalar parameter of a small
seeded instance. The reported figure is the worst relative error, with the
denominator floored at 1e-6 so exactly-zero gradients report 0 and
numerically-dead parameters do not blow up the ratio.
"""

from __future__ import annotations

import numpy as np

from . import mlp as _mlp
from .backend import kernels

FD_STEP = 1e-5
_DENOM_FLOOR = 1e-6


def _rel_errors(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    denom = np.maximum(np.abs(analytic) + np.abs(numeric), _DENOM_FLOOR)
    return np.abs(analytic - numeric) / denom


def _max_rel_error(params: list[np.ndarray], loss_fn, grads: list[np.ndarray], h: float) -> float:
    worst = 0.0
    for p, g in zip(params, grads):
        flat = p.ravel()
        gn = np.empty_like(flat)
        for k in range(flat.size):
            orig = flat[k]
            flat[k] = orig + h
            up = loss_fn()
            flat[k] = orig - h
            down = loss_fn()
            flat[k] = orig
            gn[k] = (up - down) / (2.0 * h)
        worst = max(worst, float(_rel_errors(g.ravel(), gn).max()))
    return worst


def gradient_check(kind: str, seed: int, h: float = FD_STEP) -> float:
    """Max relative error between analytic and central-difference gradients
    on a small random instance ('lstm' or 'mlp')."""
    if kind == "lstm":
        return _check_lstm(seed, h)
    if kind == "mlp":
        return _check_mlp(seed, h)
    raise ValueError(f"unknown model kind {kind!r}")


def _check_lstm(seed: int, h: float) -> float:
    rng = np.random.default_rng(seed)
    B, T, D, H = 3, 5, 5, 6
    w = rng.uniform(-0.5, 0.5, size=(D + H, 4 * H))
    b = rng.uniform(-0.2, 0.2, size=4 * H)
    w_out = rng.uniform(-0.5, 0.5, size=H)
    b_out = np.array([rng.uniform(-0.2, 0.2)])
    x = np.ascontiguousarray(rng.normal(size=(B, T, D)))
    y = rng.integers(0, 2, size=B).astype(float)

    _, dw, db, dw_out, db_out = kernels.lstm_loss_and_grads(w, b, w_out, b_out[0], x, y)

    def loss_fn():
        return kernels.lstm_loss_and_grads(w, b, w_out, b_out[0], x, y)[0]

    return _max_rel_error(
        [w, b, w_out, b_out],
        loss_fn,
        [dw, db, dw_out, np.array([db_out])],
        h,
    )


def _check_mlp(seed: int, h: float) -> float:
    # Regenerate until no hidden pre-activation sits within 1e-3 of the
    # rectifier kink, where central differences are invalid.
    for attempt in range(100):
        rng = np.random.default_rng(seed + 1000 * attempt)
        B, D, H = 4, 11, 5
        w1 = rng.uniform(-0.5, 0.5, size=(D, H))
        b1 = rng.uniform(-0.2, 0.2, size=H)
        w2 = rng.uniform(-0.5, 0.5, size=H)
        b2 = np.array([rng.uniform(-0.2, 0.2)])
        x = rng.normal(size=(B, D))
        y = rng.integers(0, 2, size=B).astype(float)
        pre = x @ w1 + b1
        if np.min(np.abs(pre)) > 1e-3:
            break
    else:
        raise RuntimeError("could not find a kink-free instance")

    _, dw1, db1, dw2, db2 = _mlp._loss_and_grads(w1, b1, w2, b2[0], x, y)

    def loss_fn():
        return _mlp._loss_and_grads(w1, b1, w2, b2[0], x, y)[0]

    return _max_rel_error(
        [w1, b1, w2, b2],
        loss_fn,
        [dw1, db1, dw2, np.array([db2])],
        h,
    )
