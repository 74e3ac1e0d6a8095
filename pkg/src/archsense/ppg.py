"""Pulse-wave preprocessing: bandpass filtering, peak detection, beat-interval extraction
and automatic outlier reconstruction.

The output of the full chain is a corrected inter-beat interval series in
milliseconds, the substrate for every variability feature downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import butter, filtfilt

DEFAULT_FS = 20.0
DEFAULT_LOW_HZ = 0.6
DEFAULT_HIGH_HZ = 10.0
DEFAULT_ORDER = 3

# Physiological bounds on a plausible inter-beat interval (200..30 bpm).
RR_MIN_MS = 300.0
RR_MAX_MS = 2000.0

REFRACTORY_S = 0.3
PERCENTILE_WINDOW_S = 5.0


@dataclass(frozen=True)
class RRSeries:
    """Inter-beat intervals in milliseconds plus the peak indices they came from.

    len(intervals_ms) == len(peak_indices) - 1 whenever peak provenance is kept.
    """

    intervals_ms: np.ndarray
    peak_indices: np.ndarray = field(default_factory=lambda: np.array([], dtype=np.int64))

    def __post_init__(self):
        object.__setattr__(self, "intervals_ms", np.asarray(self.intervals_ms, dtype=float))
        object.__setattr__(self, "peak_indices", np.asarray(self.peak_indices, dtype=np.int64))
        if self.peak_indices.size and self.intervals_ms.size != self.peak_indices.size - 1:
            raise ValueError(
                f"interval count {self.intervals_ms.size} != peak count {self.peak_indices.size} - 1"
            )

    def __len__(self) -> int:
        return int(self.intervals_ms.size)


def bandpass(
    ppg,
    fs: float = DEFAULT_FS,
    low: float = DEFAULT_LOW_HZ,
    high: float = DEFAULT_HIGH_HZ,
    order: int = DEFAULT_ORDER,
) -> np.ndarray:
    """Zero-phase Butterworth bandpass.

    The filter runs forward and backward so peaks keep their positions relative
    to the accelerometer timestamps. An upper cutoff at or above Nyquist is
    clamped to 0.45*fs; the clamp is an error only if it collapses the band.
    """
    x = np.asarray(ppg, dtype=float)
    if fs <= 0:
        raise ValueError(f"fs must be positive, got {fs}")
    if low <= 0:
        raise ValueError(f"low cutoff must be positive, got {low}")
    nyq = fs / 2.0
    high_eff = min(high, 0.45 * fs)
    if low >= high_eff:
        raise ValueError(f"band collapsed: low={low} >= effective high={high_eff} (Nyquist={nyq})")
    b, a = butter(order, [low / nyq, high_eff / nyq], btype="band")
    if x.size <= 3 * max(len(a), len(b)):
        raise ValueError(f"input too short to filter: {x.size} samples")
    return filtfilt(b, a, x)


def detect_peaks(filtered, fs: float) -> np.ndarray:
    """Pulse-peak indices in a bandpassed signal.

    A candidate is a local maximum whose amplitude exceeds half the rolling
    75th percentile of the positive signal within a 5 s neighborhood. Candidates
    closer than the 300 ms refractory period are resolved in favor of the
    taller one, so every returned index is the dominant maximum of its
    neighborhood and consecutive peaks are always >= 300 ms apart.
    """
    x = np.asarray(filtered, dtype=float)
    if x.size == 0:
        raise ValueError("empty input")
    if x.size < 3:
        return np.array([], dtype=np.int64)

    refractory = max(1, int(round(REFRACTORY_S * fs)))
    half_win = max(1, int(round(PERCENTILE_WINDOW_S * fs / 2)))

    rising = x[1:-1] > x[:-2]
    falling = x[1:-1] >= x[2:]
    candidates = np.nonzero(rising & falling)[0] + 1

    kept = []
    for i in candidates:
        lo = max(0, i - half_win)
        seg = x[lo : i + half_win + 1]
        pos = seg[seg > 0]
        if pos.size == 0:
            continue
        if x[i] > 0.5 * np.percentile(pos, 75):
            kept.append(i)

    # Tallest-first suppression inside the refractory window.
    order = sorted(kept, key=lambda i: (-x[i], i))
    accepted: list[int] = []
    for i in order:
        if all(abs(i - j) >= refractory for j in accepted):
            accepted.append(i)
    return np.array(sorted(accepted), dtype=np.int64)


def peaks_to_rr(peaks, fs: float) -> RRSeries:
    """Convert peak indices into inter-beat intervals in milliseconds."""
    peaks = np.asarray(peaks, dtype=np.int64)
    if peaks.size < 2:
        raise ValueError(f"need at least 2 peaks to form an interval, got {peaks.size}")
    if np.any(np.diff(peaks) <= 0):
        raise ValueError("peak indices must be strictly increasing")
    intervals = np.diff(peaks) * (1000.0 / fs)
    return RRSeries(intervals_ms=intervals, peak_indices=peaks)


def _local_median(values: np.ndarray, i: int) -> float:
    """Median of up to 4 nearest neighbors (self excluded) in a five-beat window."""
    n = values.size
    order = sorted((j for j in range(max(0, i - 3), min(n, i + 4)) if j != i),
                   key=lambda j: (abs(j - i), j))
    neighbors = order[:4]
    return float(np.median(values[neighbors]))


def _flag_outliers(values: np.ndarray, rel_tol: float) -> np.ndarray:
    flags = (values < RR_MIN_MS) | (values > RR_MAX_MS)
    for i in range(values.size):
        if flags[i]:
            continue
        med = _local_median(values, i)
        if abs(values[i] - med) > rel_tol * med:
            flags[i] = True
    return flags


def correct_rr(rr: RRSeries, rel_tol: float = 0.3) -> RRSeries:
    """Reconstruct implausible intervals by interpolation over their neighbors.

    An interval is flagged when it leaves the [300, 2000] ms range or deviates
    from the leave-one-out local median by more than rel_tol. Flagged values are
    replaced by linear interpolation between the surrounding clean beats; the
    pass repeats until nothing is flagged, which makes the operation idempotent.
    Raises when more than half the series is flagged (signal too corrupted).
    """
    values = np.asarray(rr.intervals_ms, dtype=float).copy()
    if values.size == 0:
        raise ValueError("empty interval series")

    for iteration in range(values.size + 1):
        flags = _flag_outliers(values, rel_tol)
        n_flagged = int(flags.sum())
        if iteration == 0 and n_flagged * 2 > values.size:
            raise ValueError(
                f"signal too corrupted: {n_flagged}/{values.size} intervals flagged"
            )
        if n_flagged == 0:
            return RRSeries(intervals_ms=values, peak_indices=rr.peak_indices)
        good = np.nonzero(~flags)[0]
        if good.size == 0:
            raise ValueError("signal too corrupted: no clean intervals to interpolate from")
        bad = np.nonzero(flags)[0]
        values[bad] = np.interp(bad, good, values[good])

    raise ValueError("outlier correction did not converge; signal too corrupted")
