"""Kinematic feature channels derived from raw three-axis accelerometry.

Three transforms feed the motion model: the per-sample acceleration magnitude
("total"), its first-order difference, and a rolling-mean smoothing of that
difference which emphasizes motion boundaries while suppressing sensor noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_SMOOTH_WINDOW = 20


@dataclass(frozen=True)
class FeatureChannels:
    """Five aligned feature columns: raw axes plus the two derived channels."""

    ax: np.ndarray
    ay: np.ndarray
    az: np.ndarray
    total: np.ndarray
    smooth_diff: np.ndarray

    def __post_init__(self):
        n = len(self.ax)
        for name in ("ay", "az", "total", "smooth_diff"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"channel {name} length {len(getattr(self, name))} != {n}")

    def __len__(self) -> int:
        return len(self.ax)

    def as_matrix(self) -> np.ndarray:
        """Stack the channels into an (n, 5) matrix in channel order."""
        return np.column_stack([self.ax, self.ay, self.az, self.total, self.smooth_diff])


def total_acc(ax, ay, az) -> np.ndarray:
    """Euclidean norm of the three axis values at each sample.

    Collapses the 3-D reading into a scalar motion-intensity value; invariant
    under rotation of the sensor frame.
    """
    ax = np.asarray(ax, dtype=float)
    ay = np.asarray(ay, dtype=float)
    az = np.asarray(az, dtype=float)
    if not (ax.shape == ay.shape == az.shape):
        raise ValueError(f"axis length mismatch: {ax.shape}, {ay.shape}, {az.shape}")
    if ax.size == 0:
        raise ValueError("empty input")
    return np.sqrt(ax * ax + ay * ay + az * az)


def diff_series(total) -> np.ndarray:
    """First-order difference of a series; the first element is 0 by convention."""
    total = np.asarray(total, dtype=float)
    if total.size == 0:
        raise ValueError("empty input")
    out = np.empty_like(total)
    out[0] = 0.0
    out[1:] = total[1:] - total[:-1]
    return out


def smooth_diff(diff, window: int = DEFAULT_SMOOTH_WINDOW) -> np.ndarray:
    """Trailing rolling mean of the differenced series.

    out[t] is the mean of diff[t-window+1 .. t]; positions with an incomplete
    window (t < window-1) are 0.
    """
    diff = np.asarray(diff, dtype=float)
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if diff.size == 0:
        raise ValueError("empty input")
    if window == 1:
        return diff.copy()
    out = np.zeros_like(diff)
    if diff.size < window:
        return out
    out[window - 1:] = np.lib.stride_tricks.sliding_window_view(diff, window).mean(axis=1)
    return out


def build_channels(acc, window: int = DEFAULT_SMOOTH_WINDOW) -> FeatureChannels:
    """Compute the full five-channel feature block from an accelerometer series."""
    acc = list(acc)
    if not acc:
        raise ValueError("empty accelerometer series")
    ax = np.array([s.ax for s in acc], dtype=float)
    ay = np.array([s.ay for s in acc], dtype=float)
    az = np.array([s.az for s in acc], dtype=float)
    total = total_acc(ax, ay, az)
    sd = smooth_diff(diff_series(total), window)
    return FeatureChannels(ax=ax, ay=ay, az=az, total=total, smooth_diff=sd)
