#!/usr/bin/env python3
"""Benchmark the recurrent kernels: compiled extension vs numpy fallback.

Times the two operations that dominate pipeline runtime (the training step
with backpropagation through time, and the batched forward pass used for
stream prediction) at the default training shape and a few variants.

Usage: python benchmarks/bench_lstm.py [--repeats N]
"""

import argparse
import time

import numpy as np

from archsense.nn import available_backends
from archsense.nn import _kernels_np

SHAPES = [
    ("training batch", 32, 80, 5, 32),
    ("large batch", 128, 80, 5, 32),
    ("prediction chunk", 512, 80, 5, 32),
    ("small instance", 8, 20, 5, 8),
]


def load_backends():
    backends = {"numpy": _kernels_np}
    if "compiled" in available_backends():
        from archsense.nn import _kernels_cy

        backends["compiled"] = _kernels_cy
    return backends


def make_problem(rng, B, T, D, H):
    w = rng.normal(size=(D + H, 4 * H)) * 0.2
    b = np.zeros(4 * H)
    w_out = rng.normal(size=H) * 0.2
    x = np.ascontiguousarray(rng.normal(size=(B, T, D)))
    y = rng.integers(0, 2, B).astype(float)
    return w, b, w_out, 0.0, x, y


def time_call(fn, repeats):
    fn()  # warm caches and workspaces
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    backends = load_backends()
    if "compiled" not in backends:
        print("note: compiled extension not built; showing numpy only\n")

    rng = np.random.default_rng(0)
    header = f"{'shape':<18} {'op':<12}" + "".join(f"{name:>12}" for name in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, B, T, D, H in SHAPES:
        w, b, w_out, b_out, x, y = make_problem(rng, B, T, D, H)
        for op_name, call in [
            ("train step", lambda k: k.lstm_loss_and_grads(w, b, w_out, b_out, x, y)),
            ("forward", lambda k: k.lstm_probs(w, b, w_out, b_out, x)),
        ]:
            times = {name: time_call(lambda k=k: call(k), args.repeats)
                     for name, k in backends.items()}
            row = f"{label:<18} {op_name:<12}"
            for name in backends:
                row += f"{times[name] * 1000:>10.2f}ms"
            if len(backends) == 2:
                row += f"{times['numpy'] / times['compiled']:>9.1f}x"
            print(row)
    print("\ntimes are best-of-N wall clock per call")


if __name__ == "__main__":
    main()
