# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: initializedcheck=False
"""Compiled recurrent kernels.

Same contract, parameter layout and math as _kernels_np: batched forward pass
and backpropagation-through-time with gate order [input, forget, output,
candidate]. Matrix products go through BLAS dgemm and the gatewise arithmetic
runs in plain C loops; the transcendentals stay on numpy's vectorized ufuncs,
which beat scalar libm by an order of magnitude.
"""

import threading

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log1p
from scipy.linalg.cython_blas cimport dgemm

cnp.import_array()

# Reusable per-thread scratch buffers. The multi-megabyte caches would
# otherwise be mmap'd and returned to the OS on every call, and the page-fault
# churn dominates the arithmetic at training shapes.
_workspaces: dict = {}


def _workspace(Py_ssize_t B, Py_ssize_t T, Py_ssize_t D, Py_ssize_t H):
    key = (threading.get_ident(), B, T, D, H)
    ws = _workspaces.get(key)
    if ws is None:
        ws = {
            "xw": np.empty((B * T, 4 * H)),
            "gates": np.empty((T, B, 4 * H)),
            "cs": np.empty((T, B, H)),
            "tcs": np.empty((T, B, H)),
            "hs": np.empty((T, B, H)),
            "c": np.empty((B, H)),
            "tc": np.empty((B, H)),
            "h": np.empty((B, H)),
            "a": np.empty((B, 4 * H)),
            "dh": np.empty((B, H)),
            "dc": np.empty((B, H)),
            "da": np.empty((B, 4 * H)),
            "xt": np.empty((B, D)),
            "dlogit": np.empty(B),
        }
        _workspaces[key] = ws
    return ws


cdef inline double _sigmoid(double z) noexcept nogil:
    if z >= 0.0:
        return 1.0 / (1.0 + exp(-z))
    cdef double ez = exp(z)
    return ez / (1.0 + ez)


cdef inline double _softplus(double z) noexcept nogil:
    if z > 0.0:
        return z + log1p(exp(-z))
    return log1p(exp(z))


cdef void _mm(double[:, ::1] a, double[:, ::1] b, double[:, ::1] c,
              bint ta, bint tb, double alpha, double beta) noexcept nogil:
    """Row-major c = alpha * op(a) @ op(b) + beta * c.

    Column-major BLAS computes c^T = alpha * op(b)^T @ op(a)^T + beta * c^T;
    a row-major buffer read column-major is exactly the transpose, so the
    operands swap and the leading dimensions are the row-major column counts.
    """
    cdef int m, n, k
    if ta:
        m = <int> a.shape[1]
        k = <int> a.shape[0]
    else:
        m = <int> a.shape[0]
        k = <int> a.shape[1]
    n = <int> (b.shape[0] if tb else b.shape[1])
    cdef char trans_first = 84 if tb else 78   # 'T' / 'N'
    cdef char trans_second = 84 if ta else 78
    cdef int lda = <int> b.shape[1]
    cdef int ldb = <int> a.shape[1]
    cdef int ldc = n
    dgemm(&trans_first, &trans_second, &n, &m, &k,
          &alpha, &b[0, 0], &lda, &a[0, 0], &ldb, &beta, &c[0, 0], &ldc)


def _as2d(arr):
    return np.ascontiguousarray(arr, dtype=np.float64)


cdef void _activate(object block_np, Py_ssize_t H):
    """In-place gate activations on a (B, 4H) block: sigmoid on the first 3H
    columns, tanh on the last H."""
    sig = block_np[:, : 3 * H]
    np.negative(sig, out=sig)
    np.exp(sig, out=sig)
    np.add(sig, 1.0, out=sig)
    np.reciprocal(sig, out=sig)
    cand = block_np[:, 3 * H :]
    np.tanh(cand, out=cand)


def lstm_probs(w_in, b_in, w_out_in, double b_out, x_in):
    """Readout probabilities for a batch of sequences x of shape (B, T, D)."""
    cdef double[:, ::1] w = _as2d(w_in)
    cdef double[::1] w_out = np.ascontiguousarray(w_out_in, dtype=np.float64)
    x_np = np.ascontiguousarray(x_in, dtype=np.float64)
    cdef double[:, :, ::1] x = x_np

    cdef Py_ssize_t B = x.shape[0], T = x.shape[1], D = x.shape[2]
    cdef Py_ssize_t H = w_out.shape[0], G4 = 4 * H
    cdef Py_ssize_t bb, t, j, row

    ws = _workspace(B, T, D, H)
    xw_np = ws["xw"]
    np.matmul(x_np.reshape(B * T, D), np.asarray(w_in)[:D], out=xw_np)
    xw_np += np.asarray(b_in)
    cdef double[:, ::1] xw = xw_np

    a_np = ws["a"]
    c_np = ws["c"]
    tc_np = ws["tc"]
    c_np[:] = 0.0
    cdef double[:, ::1] a = a_np
    cdef double[:, ::1] c = c_np
    cdef double[:, ::1] tc = tc_np
    h_np = ws["h"]
    h_np[:] = 0.0
    cdef double[:, ::1] h = h_np

    for t in range(T):
        _mm(h, w[D:], a, False, False, 1.0, 0.0)
        for bb in range(B):
            row = bb * T + t
            for j in range(G4):
                a[bb, j] += xw[row, j]
        _activate(a_np, H)
        for bb in range(B):
            for j in range(H):
                c[bb, j] = a[bb, H + j] * c[bb, j] + a[bb, j] * a[bb, 3 * H + j]
        np.tanh(c_np, out=tc_np)
        for bb in range(B):
            for j in range(H):
                h[bb, j] = a[bb, 2 * H + j] * tc[bb, j]

    probs_np = np.empty(B)
    cdef double[::1] probs = probs_np
    cdef double logit
    for bb in range(B):
        logit = b_out
        for j in range(H):
            logit += h[bb, j] * w_out[j]
        probs[bb] = _sigmoid(logit)
    return probs_np


def lstm_loss_and_grads(w_in, b_in, w_out_in, double b_out, x_in, y_in):
    """Mean cross-entropy loss and parameter gradients for one batch.

    Returns (loss, dw, db, dw_out, db_out) with the same shapes and the same
    mathematical definition as the numpy backend.
    """
    cdef double[:, ::1] w = _as2d(w_in)
    cdef double[::1] w_out = np.ascontiguousarray(w_out_in, dtype=np.float64)
    x_np = np.ascontiguousarray(x_in, dtype=np.float64)
    cdef double[:, :, ::1] x = x_np
    cdef double[::1] y = np.ascontiguousarray(y_in, dtype=np.float64)

    cdef Py_ssize_t B = x.shape[0], T = x.shape[1], D = x.shape[2]
    cdef Py_ssize_t H = w_out.shape[0], G4 = 4 * H
    cdef Py_ssize_t bb, t, j, row

    ws = _workspace(B, T, D, H)
    xw_np = ws["xw"]
    np.matmul(x_np.reshape(B * T, D), np.asarray(w_in)[:D], out=xw_np)
    xw_np += np.asarray(b_in)
    cdef double[:, ::1] xw = xw_np

    gates_np = ws["gates"]
    cdef double[:, :, ::1] gates = gates_np
    cdef double[:, :, ::1] cs = ws["cs"]
    cdef double[:, :, ::1] tcs = ws["tcs"]
    cdef double[:, :, ::1] hs = ws["hs"]

    c_np = ws["c"]
    c_np[:] = 0.0
    cdef double[:, ::1] c = c_np
    tc_np = ws["tc"]
    cdef double[:, ::1] tc = tc_np
    h_np = ws["h"]
    h_np[:] = 0.0
    cdef double[:, ::1] h = h_np
    cdef double[:, ::1] a

    for t in range(T):
        a_np = gates_np[t]
        a = a_np
        _mm(h, w[D:], a, False, False, 1.0, 0.0)
        for bb in range(B):
            row = bb * T + t
            for j in range(G4):
                a[bb, j] += xw[row, j]
        _activate(a_np, H)
        for bb in range(B):
            for j in range(H):
                c[bb, j] = a[bb, H + j] * c[bb, j] + a[bb, j] * a[bb, 3 * H + j]
                cs[t, bb, j] = c[bb, j]
        np.tanh(c_np, out=tc_np)
        for bb in range(B):
            for j in range(H):
                tcs[t, bb, j] = tc[bb, j]
                h[bb, j] = a[bb, 2 * H + j] * tc[bb, j]
                hs[t, bb, j] = h[bb, j]

    cdef double loss = 0.0
    cdef double logit
    cdef double[::1] dlogit = ws["dlogit"]
    for bb in range(B):
        logit = b_out
        for j in range(H):
            logit += h[bb, j] * w_out[j]
        loss += _softplus(logit) - y[bb] * logit
        dlogit[bb] = (_sigmoid(logit) - y[bb]) / B
    loss /= B

    dw_np = np.zeros((D + H, G4))
    db_np = np.zeros(G4)
    dw_out_np = np.zeros(H)
    cdef double[:, ::1] dw = dw_np
    cdef double[::1] db = db_np
    cdef double[::1] dw_out = dw_out_np
    cdef double db_out = 0.0

    cdef double[:, ::1] dh = ws["dh"]
    dc_np = ws["dc"]
    dc_np[:] = 0.0
    cdef double[:, ::1] dc = dc_np
    cdef double[:, ::1] da = ws["da"]
    cdef double[:, ::1] xt = ws["xt"]
    cdef double gi, gf, go, gg, tch, dct, cp

    for bb in range(B):
        db_out += dlogit[bb]
        for j in range(H):
            dw_out[j] += h[bb, j] * dlogit[bb]
            dh[bb, j] = dlogit[bb] * w_out[j]

    for t in range(T - 1, -1, -1):
        for bb in range(B):
            for j in range(H):
                gi = gates[t, bb, j]
                gf = gates[t, bb, H + j]
                go = gates[t, bb, 2 * H + j]
                gg = gates[t, bb, 3 * H + j]
                tch = tcs[t, bb, j]
                dct = dc[bb, j] + dh[bb, j] * go * (1.0 - tch * tch)
                cp = cs[t - 1, bb, j] if t > 0 else 0.0
                da[bb, j] = dct * gg * gi * (1.0 - gi)
                da[bb, H + j] = dct * cp * gf * (1.0 - gf)
                da[bb, 2 * H + j] = dh[bb, j] * tch * go * (1.0 - go)
                da[bb, 3 * H + j] = dct * gi * (1.0 - gg * gg)
                dc[bb, j] = dct * gf
            for j in range(D):
                xt[bb, j] = x[bb, t, j]
        _mm(xt, da, dw[:D], True, False, 1.0, 1.0)
        if t > 0:
            _mm(hs[t - 1], da, dw[D:], True, False, 1.0, 1.0)
        for bb in range(B):
            for j in range(G4):
                db[j] += da[bb, j]
        _mm(da, w[D:], dh, False, True, 1.0, 0.0)

    return loss, dw_np, db_np, dw_out_np, float(db_out)
