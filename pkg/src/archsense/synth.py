"""Synthetic session generator with exact ground truth.

Stands in for real range recordings: accelerometer traces embed shot events
with known boundary indices (two-axis swell during the draw, a flat plateau
while aiming, a sharp two-axis spike at release), and the pulse channel is a
train of Gaussian bumps whose inter-beat sequence is constructed, so the true
interval series is known exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ppg import RRSeries
from .types import (
    AccSample,
    EventMarker,
    MarkerKind,
    PpgSample,
    SessionRecording,
    ShotAnnotation,
)

BASELINE = (0.2, -0.3, 1.0)
PULSE_SIGMA_MS = 75.0  # bump width ~150 ms


@dataclass(frozen=True)
class SynthConfig:
    n_shots: int = 3
    shot_spacing_s: float = 15.0
    draw_s: float = 1.5
    aim_s: float = 2.0
    release_s: float = 0.5
    noise_std: float = 0.05
    ppg_noise_std: float = 0.02
    hr_bpm: float = 70.0
    rr_jitter_ms: float = 20.0
    resp_freq_hz: float = 0.25
    resp_amp_ms: float = 25.0
    stress_regime: str = "low"
    seed: int = 0
    fs: float = 20.0
    lead_in_s: float = 5.0
    tail_s: float = 10.0

    def __post_init__(self):
        if min(self.draw_s, self.aim_s, self.release_s) <= 0:
            raise ValueError("phase durations must be positive")
        if not 40 <= self.hr_bpm <= 200:
            raise ValueError(f"hr_bpm must be in [40, 200], got {self.hr_bpm}")
        if self.n_shots < 0:
            raise ValueError(f"n_shots must be >= 0, got {self.n_shots}")
        if self.stress_regime not in ("low", "high"):
            raise ValueError(f"stress_regime must be 'low' or 'high', got {self.stress_regime!r}")
        shot_s = self.draw_s + self.aim_s + self.release_s
        if self.n_shots > 1 and shot_s >= self.shot_spacing_s:
            raise ValueError(
                f"shots overlap: phase durations sum to {shot_s} s >= spacing {self.shot_spacing_s} s"
            )


def _shot_template(cfg: SynthConfig, ax, ay, az, start: int) -> ShotAnnotation:
    """Add one shot starting at sample index start; returns its boundaries.

    Each phase adds a constant shelf (so every boundary is a step change on a
    noise-free trace) plus a half-sine swell where the motion rises and falls.
    """
    d = int(round(cfg.draw_s * cfg.fs))
    a = int(round(cfg.aim_s * cfg.fs))
    r = int(round(cfg.release_s * cfg.fs))
    b1, b2, b3, b4 = start, start + d, start + d + a, start + d + a + r

    u = np.arange(d) / d
    swell = np.sin(np.pi * u)
    ax[b1:b2] += 0.10 + 0.9 * swell
    ay[b1:b2] += 0.10 + 0.7 * swell

    ax[b2:b3] += 0.25
    ay[b2:b3] += 0.18
    az[b2:b3] += -0.08

    ur = np.arange(r) / r
    spike = np.sin(np.pi * ur)
    ax[b3:b4] += 0.15 + 1.4 * spike
    az[b3:b4] += 0.12 + 1.1 * spike
    ay[b3:b4] += -0.10 - 0.5 * spike
    return ShotAnnotation(b1=b1, b2=b2, b3=b3, b4=b4)


def _rr_sequence(rng, base_ms: float, jitter_ms: float, resp_freq: float,
                 resp_amp: float, total_ms: float) -> np.ndarray:
    intervals = []
    t = 0.0
    while t < total_ms:
        rr = base_ms + resp_amp * np.sin(2 * np.pi * resp_freq * t / 1000.0)
        if jitter_ms > 0:
            rr += rng.normal(0.0, jitter_ms)
        rr = max(rr, 250.0)
        intervals.append(rr)
        t += rr
    return np.array(intervals)


def gen_session(
    cfg: SynthConfig,
    subject_id: str = "synth",
    round_id: str | None = None,
) -> tuple[SessionRecording, list[ShotAnnotation], RRSeries]:
    """Build one recording plus its exact shot annotations and true interval series."""
    rng = np.random.default_rng(cfg.seed)
    total_s = cfg.lead_in_s + cfg.n_shots * cfg.shot_spacing_s + cfg.tail_s
    n = int(round(total_s * cfg.fs))
    t_ms = np.round(np.arange(n) * 1000.0 / cfg.fs).astype(np.int64)

    ax = np.full(n, BASELINE[0])
    ay = np.full(n, BASELINE[1])
    az = np.full(n, BASELINE[2])
    annotations = []
    for k in range(cfg.n_shots):
        start = int(round((cfg.lead_in_s + k * cfg.shot_spacing_s) * cfg.fs))
        annotations.append(_shot_template(cfg, ax, ay, az, start))
    if cfg.noise_std > 0:
        ax += rng.normal(0.0, cfg.noise_std, n)
        ay += rng.normal(0.0, cfg.noise_std, n)
        az += rng.normal(0.0, cfg.noise_std, n)

    base_ms = 60000.0 / cfg.hr_bpm
    rr = _rr_sequence(rng, base_ms, cfg.rr_jitter_ms, cfg.resp_freq_hz, cfg.resp_amp_ms,
                      total_ms=total_s * 1000.0 - 500.0)
    beat_ms = 500.0 + np.concatenate([[0.0], np.cumsum(rr)])
    ppg = np.zeros(n)
    sig = PULSE_SIGMA_MS
    for bt in beat_ms:
        lo = max(0, int((bt - 4 * sig) * cfg.fs / 1000.0))
        hi = min(n, int((bt + 4 * sig) * cfg.fs / 1000.0) + 1)
        ppg[lo:hi] += np.exp(-0.5 * ((t_ms[lo:hi] - bt) / sig) ** 2)
    if cfg.ppg_noise_std > 0:
        ppg += rng.normal(0.0, cfg.ppg_noise_std, n)

    markers = [EventMarker(t_ms=100, kind=MarkerKind.EXP_START)]
    for a in annotations:
        # Marker timestamps mimic hand-recorded delays: hints, not boundaries.
        markers.append(EventMarker(t_ms=int(t_ms[a.b1]) + int(rng.integers(-5, 6)) * 50,
                                   kind=MarkerKind.DRAW))
        markers.append(EventMarker(t_ms=int(t_ms[a.b3]) + int(rng.integers(-5, 6)) * 50,
                                   kind=MarkerKind.RELEASE))
    markers.append(EventMarker(t_ms=int(t_ms[-1]) - 100, kind=MarkerKind.EXP_END))
    markers.sort(key=lambda m: m.t_ms)

    if cfg.stress_regime == "low":
        report = int(rng.integers(1, 4))
    else:
        report = int(rng.integers(4, 6))

    session = SessionRecording(
        subject_id=subject_id,
        round_id=round_id if round_id is not None else f"synth-{cfg.seed:04d}",
        acc=tuple(AccSample(int(t), float(x), float(y), float(z))
                  for t, x, y, z in zip(t_ms, ax, ay, az)),
        ppg=tuple(PpgSample(int(t), float(v)) for t, v in zip(t_ms, ppg)),
        markers=tuple(markers),
        stress_report=report,
    )
    return session, annotations, RRSeries(intervals_ms=rr)


LOW_REGIME = dict(hr_bpm=65.0, rr_jitter_ms=60.0, resp_freq_hz=0.25, resp_amp_ms=40.0)
HIGH_REGIME = dict(hr_bpm=95.0, rr_jitter_ms=15.0, resp_freq_hz=0.25, resp_amp_ms=8.0)


def gen_stress_cohort(n_per_class: int, seed: int, duration_s: float = 64.0):
    """Interval series of two physiological regimes: relaxed (slow, variable,
    strongly respiration-modulated) and stressed (fast, flattened).

    Returns [(RRSeries, label)] with n low-stress (0) then n high-stress (1).
    """
    if n_per_class < 1:
        raise ValueError(f"n_per_class must be >= 1, got {n_per_class}")
    rng = np.random.default_rng(seed)
    out = []
    for label, regime in ((0, LOW_REGIME), (1, HIGH_REGIME)):
        for _ in range(n_per_class):
            base = 60000.0 / (regime["hr_bpm"] + rng.normal(0.0, 3.0))
            rr = _rr_sequence(rng, base, regime["rr_jitter_ms"], regime["resp_freq_hz"],
                              regime["resp_amp_ms"], total_ms=duration_s * 1000.0)
            out.append((RRSeries(intervals_ms=rr), label))
    return out
