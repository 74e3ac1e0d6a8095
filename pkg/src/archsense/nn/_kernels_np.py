"""Pure-numpy recurrent kernels: batched forward pass and
backpropagation-through-time for the gated memory cell.

This is the fallback backend; the compiled extension implements the same two
functions with identical parameter layout and math. Gate weights live in one
(input_dim + hidden, 4*hidden) matrix with gate order
[input, forget, output, candidate] - the three sigmoid gates first so one
vectorized exp covers them. The final hidden state feeds a single sigmoid
readout unit and the loss is mean binary cross-entropy.
"""

from __future__ import annotations

import threading

import numpy as np

# Reusable per-thread scratch buffers; repeated multi-megabyte allocations at
# training shapes otherwise spend more time in page faults than arithmetic.
_workspaces: dict = {}


def _workspace(B: int, T: int, D: int, H: int) -> dict:
    key = (threading.get_ident(), B, T, D, H)
    ws = _workspaces.get(key)
    if ws is None:
        ws = {
            "xw": np.empty((B, T, 4 * H)),
            "gates": np.empty((T, B, 4 * H)),
            "cs": np.empty((T, B, H)),
            "tanh_c": np.empty((T, B, H)),
            "hs": np.empty((T, B, H)),
            "da": np.empty((B, 4 * H)),
        }
        _workspaces[key] = ws
    return ws


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Logistic function; overflow saturates to exactly 0/1, which is the
    correct limit and is clipped by callers that need an open interval."""
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def _sigmoid_inplace(z: np.ndarray) -> None:
    with np.errstate(over="ignore"):
        np.negative(z, out=z)
        np.exp(z, out=z)
        z += 1.0
        np.reciprocal(z, out=z)


def lstm_probs(w, b, w_out, b_out, x) -> np.ndarray:
    """Readout probabilities for a batch of sequences x of shape (B, T, D)."""
    B, T, D = x.shape
    H = w_out.size
    wx = w[:D]
    wh = w[D:]
    xw = _workspace(B, T, D, H)["xw"]
    np.matmul(x.reshape(B * T, D), wx, out=xw.reshape(B * T, 4 * H))
    xw += b
    h = np.zeros((B, H))
    c = np.zeros((B, H))
    a = np.empty((B, 4 * H))
    for t in range(T):
        np.dot(h, wh, out=a)
        a += xw[:, t]
        _sigmoid_inplace(a[:, : 3 * H])
        g = np.tanh(a[:, 3 * H :])
        c *= a[:, H : 2 * H]
        c += a[:, :H] * g
        np.tanh(c, out=h)
        h *= a[:, 2 * H : 3 * H]
    logits = h @ w_out + b_out
    return sigmoid(logits)


def lstm_loss_and_grads(w, b, w_out, b_out, x, y):
    """Mean cross-entropy loss and gradients for a batch.

    Returns (loss, dw, db, dw_out, db_out). The loss is computed from logits
    (log1p-exp form) so saturated outputs stay finite.
    """
    B, T, D = x.shape
    H = w_out.size
    wx = w[:D]
    wh = w[D:]

    ws = _workspace(B, T, D, H)
    xw = ws["xw"]
    np.matmul(x.reshape(B * T, D), wx, out=xw.reshape(B * T, 4 * H))
    xw += b
    gates = ws["gates"]
    cs = ws["cs"]
    tanh_c = ws["tanh_c"]
    hs = ws["hs"]
    h = np.zeros((B, H))
    c = np.zeros((B, H))
    for t in range(T):
        a = gates[t]
        np.dot(h, wh, out=a)
        a += xw[:, t]
        _sigmoid_inplace(a[:, : 3 * H])
        np.tanh(a[:, 3 * H :], out=a[:, 3 * H :])
        c = a[:, H : 2 * H] * c
        c += a[:, :H] * a[:, 3 * H :]
        tc = np.tanh(c, out=tanh_c[t])
        h = a[:, 2 * H : 3 * H] * tc
        cs[t] = c
        hs[t] = h

    logits = h @ w_out + b_out
    y = np.asarray(y, dtype=float)
    loss = float(np.mean(np.logaddexp(0.0, logits) - y * logits))

    dlogit = (sigmoid(logits) - y) / B
    dw_out = h.T @ dlogit
    db_out = float(dlogit.sum())
    dh = dlogit[:, None] * w_out[None, :]
    dc = np.zeros((B, H))
    dw = np.zeros_like(w)
    db = np.zeros_like(b)
    da = ws["da"]
    for t in range(T - 1, -1, -1):
        i = gates[t, :, :H]
        f = gates[t, :, H : 2 * H]
        o = gates[t, :, 2 * H : 3 * H]
        g = gates[t, :, 3 * H :]
        tc = tanh_c[t]
        dc += dh * o * (1.0 - tc * tc)
        np.multiply(dc * g, i * (1.0 - i), out=da[:, :H])
        if t > 0:
            np.multiply(dc * cs[t - 1], f * (1.0 - f), out=da[:, H : 2 * H])
        else:
            da[:, H : 2 * H] = 0.0
        np.multiply(dh * tc, o * (1.0 - o), out=da[:, 2 * H : 3 * H])
        np.multiply(dc * i, 1.0 - g * g, out=da[:, 3 * H :])
        dw[:D] += x[:, t].T @ da
        if t > 0:
            dw[D:] += hs[t - 1].T @ da
        db += da.sum(axis=0)
        dh = da @ wh.T
        dc *= f
    return loss, dw, db, dw_out, db_out
