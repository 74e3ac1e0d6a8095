"""Heart-rate variability features over a corrected inter-beat interval series.

Eleven features in three families: time-domain statistics (rate, spread of the
intervals and of their successive differences), spectral power of the evenly
resampled interval tachogram, and nonlinear descriptors (return-map dispersion
and sample entropy).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ppg import RRSeries

FEATURE_NAMES = (
    "hr", "sdnn", "rmssd", "pnn20", "pnn50",
    "hf", "tf", "pob", "sd1", "sd2", "samp_en",
)

HF_BAND = (0.15, 0.4)
RESAMPLE_HZ = 4.0
SPECTRUM_MIN_INTERVALS = 8
SPECTRUM_MIN_SPAN_S = 30.0
POB_THRESHOLD_MS = 50.0
POB_WINDOW = 5


@dataclass(frozen=True)
class HrvFeatureVector:
    """The eleven-feature input of the stress classifier.

    samp_en is None when entropy is undefined for the series (no template
    matches, or a zero tolerance on a constant series).
    """

    hr: float
    sdnn: float
    rmssd: float
    pnn20: float
    pnn50: float
    hf: float
    tf: float
    pob: float
    sd1: float
    sd2: float
    samp_en: float | None

    def to_array(self) -> np.ndarray:
        """Dense vector in FEATURE_NAMES order; an undefined samp_en maps to 0."""
        vals = [getattr(self, name) for name in FEATURE_NAMES]
        return np.array([0.0 if v is None else float(v) for v in vals])


@dataclass(frozen=True)
class PowerSpectrum:
    """One-sided power spectral density of the resampled tachogram (ms^2 per Hz)."""

    freqs: np.ndarray
    density: np.ndarray

    def band_power(self, low: float, high: float) -> float:
        """Integral of the density over [low, high] Hz (rectangle rule)."""
        df = self.freqs[1] - self.freqs[0] if self.freqs.size > 1 else 0.0
        mask = (self.freqs >= low) & (self.freqs <= high)
        return float(self.density[mask].sum() * df)


def _intervals(rr) -> np.ndarray:
    if isinstance(rr, RRSeries):
        return np.asarray(rr.intervals_ms, dtype=float)
    return np.asarray(rr, dtype=float)


def hr(rr) -> float:
    """Beats per minute implied by the mean interval."""
    x = _intervals(rr)
    if x.size < 1:
        raise ValueError("empty interval series")
    return 60000.0 / float(np.mean(x))


def sdnn(rr) -> float:
    """Sample standard deviation of the intervals (N-1 denominator)."""
    x = _intervals(rr)
    if x.size < 2:
        raise ValueError(f"need >= 2 intervals, got {x.size}")
    return float(np.std(x, ddof=1))


def rmssd(rr) -> float:
    """Root mean square of successive interval differences.

    The N-1 successive differences are averaged over N-1, i.e. an exact mean
    of the squared differences.
    """
    x = _intervals(rr)
    if x.size < 2:
        raise ValueError(f"need >= 2 intervals, got {x.size}")
    d = np.diff(x)
    return float(np.sqrt(np.mean(d * d)))


def pnnx(rr, x_ms: float) -> float:
    """Percentage of successive differences strictly exceeding x_ms."""
    x = _intervals(rr)
    if x.size < 2:
        raise ValueError(f"need >= 2 intervals, got {x.size}")
    if x_ms <= 0:
        raise ValueError(f"threshold must be positive, got {x_ms}")
    d = np.abs(np.diff(x))
    return 100.0 * float(np.sum(d > x_ms)) / d.size


def spectrum(
    rr,
    resample_hz: float = RESAMPLE_HZ,
    min_intervals: int = SPECTRUM_MIN_INTERVALS,
    min_span_s: float = SPECTRUM_MIN_SPAN_S,
) -> PowerSpectrum:
    """Periodogram of the interval tachogram.

    The unevenly spaced intervals are placed at their cumulative beat times,
    linearly resampled onto an even grid, mean-removed, and transformed with a
    single FFT. The rectangle-rule integral of the result equals the variance
    of the resampled signal (Parseval).
    """
    x = _intervals(rr)
    span_s = float(np.sum(x)) / 1000.0
    if x.size < min_intervals or span_s < min_span_s:
        raise ValueError(
            f"series too short for spectral analysis: {x.size} intervals over {span_s:.1f} s "
            f"(need >= {min_intervals} intervals spanning >= {min_span_s:.0f} s)"
        )
    beat_t = np.cumsum(x) / 1000.0
    n_grid = int(np.floor((beat_t[-1] - beat_t[0]) * resample_hz)) + 1
    grid = beat_t[0] + np.arange(n_grid) / resample_hz
    resampled = np.interp(grid, beat_t, x)
    resampled = resampled - resampled.mean()

    spec = np.fft.rfft(resampled)
    density = (np.abs(spec) ** 2) / (resample_hz * n_grid)
    # One-sided: double everything except DC and (for even n) Nyquist.
    if n_grid % 2 == 0:
        density[1:-1] *= 2.0
    else:
        density[1:] *= 2.0
    freqs = np.fft.rfftfreq(n_grid, 1.0 / resample_hz)
    return PowerSpectrum(freqs=freqs, density=density)


def hf_power(psd: PowerSpectrum) -> float:
    """Power in the respiratory band (0.15-0.4 Hz), ms^2."""
    return psd.band_power(*HF_BAND)


def tf_power(psd: PowerSpectrum) -> float:
    """Total power above DC up to the resampled Nyquist, ms^2."""
    if psd.freqs.size < 2:
        return 0.0
    return psd.band_power(psd.freqs[1], float(psd.freqs[-1]))


def pob(rr, threshold_ms: float = POB_THRESHOLD_MS, window: int = POB_WINDOW) -> float:
    """Percentage of beats deviating from their centered moving average by more
    than threshold_ms.

    The window is truncated at the series edges. This is a concrete stand-in
    for the loosely specified "oscillatory beats" notion; treat absolute values
    with care when comparing across tools.
    """
    x = _intervals(rr)
    if x.size < 6:
        raise ValueError(f"need >= 6 intervals, got {x.size}")
    half = window // 2
    count = 0
    for i in range(x.size):
        seg = x[max(0, i - half) : i + half + 1]
        if abs(x[i] - seg.mean()) > threshold_ms:
            count += 1
    return 100.0 * count / x.size


def poincare(rr) -> tuple[float, float]:
    """Return-map dispersion (sd1, sd2) in ms.

    sd1^2 = Var(successive differences)/2 and sd2^2 = 2 Var(intervals) - sd1^2,
    both with the N-1 variance convention; the sd2 radicand is clamped at 0.
    """
    x = _intervals(rr)
    if x.size < 3:
        raise ValueError(f"need >= 3 intervals, got {x.size}")
    d = np.diff(x)
    sd1_sq = 0.5 * float(np.var(d, ddof=1))
    sd2_sq = 2.0 * float(np.var(x, ddof=1)) - sd1_sq
    return float(np.sqrt(sd1_sq)), float(np.sqrt(max(0.0, sd2_sq)))


def sample_entropy(rr, m: int = 2, r: float | None = None) -> float | None:
    """Sample entropy: -ln(A/B) where B counts m-length template pairs within
    tolerance r (Chebyshev distance, self-matches excluded) and A counts the
    same pairs extended to length m+1.

    r defaults to 0.2 * sdnn. Returns None (undefined) when the default
    tolerance degenerates to 0 or when no pairs match at either length.
    """
    x = _intervals(rr)
    if x.size < 10:
        raise ValueError(f"need >= 10 intervals, got {x.size}")
    if r is None:
        r = 0.2 * sdnn(x)
        if r == 0.0:
            return None
    elif r <= 0:
        raise ValueError(f"tolerance must be positive, got {r}")

    n_templates = x.size - m
    # windows[i] = x[i : i+m+1]; both template lengths draw from the same
    # n_templates starting points so the A/B ratio is a proper probability.
    win = np.lib.stride_tricks.sliding_window_view(x, m + 1)[:n_templates]
    b_count = 0
    a_count = 0
    for i in range(n_templates - 1):
        d_m = np.max(np.abs(win[i + 1 :, :m] - win[i, :m]), axis=1)
        d_m1 = np.maximum(d_m, np.abs(win[i + 1 :, m] - win[i, m]))
        b_count += int(np.sum(d_m <= r))
        a_count += int(np.sum(d_m1 <= r))
    if a_count == 0 or b_count == 0:
        return None
    return float(-np.log(a_count / b_count))


def extract_all(rr) -> HrvFeatureVector:
    """Assemble the full eleven-feature vector from one interval series."""
    psd = spectrum(rr)
    sd1, sd2 = poincare(rr)
    return HrvFeatureVector(
        hr=hr(rr),
        sdnn=sdnn(rr),
        rmssd=rmssd(rr),
        pnn20=pnnx(rr, 20.0),
        pnn50=pnnx(rr, 50.0),
        hf=hf_power(psd),
        tf=tf_power(psd),
        pob=pob(rr),
        sd1=sd1,
        sd2=sd2,
        samp_en=sample_entropy(rr),
    )
