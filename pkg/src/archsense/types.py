"""Shared domain model: recordings, event markers, shot annotations, phase segments.

All types are immutable value objects; series invariants (strictly increasing
timestamps, marker ordering, index bounds) are enforced at construction time
so downstream code can rely on them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class MarkerKind(enum.Enum):
    EXP_START = "ExpStart"
    EXP_END = "ExpEnd"
    DRAW = "Draw"
    RELEASE = "Release"


class Phase(enum.Enum):
    DRAW = "Draw"
    AIM = "Aim"
    RELEASE = "Release"


@dataclass(frozen=True, slots=True)
class AccSample:
    """One accelerometer reading: milliseconds since session start + raw axis values."""

    t_ms: int
    ax: float
    ay: float
    az: float


@dataclass(frozen=True, slots=True)
class PpgSample:
    """One optical pulse reading (raw, dimensionless)."""

    t_ms: int
    value: float


@dataclass(frozen=True, slots=True)
class EventMarker:
    """Tablet-recorded event. Timestamps are navigation hints only, never phase boundaries."""

    t_ms: int
    kind: MarkerKind


def _check_monotonic(t_ms, name: str) -> None:
    prev = None
    for i, t in enumerate(t_ms):
        if prev is not None and t <= prev:
            raise ValueError(f"{name} timestamps not strictly increasing at index {i}: {prev} -> {t}")
        prev = t


@dataclass(frozen=True)
class SessionRecording:
    """One athlete round: synchronized accelerometer + pulse series, markers, self-report.

    stress_report is the round-level 1..5 rating, or None when the athlete
    gave none (one report per round; the three arrows of a round share it).
    """

    subject_id: str
    round_id: str
    acc: tuple[AccSample, ...]
    ppg: tuple[PpgSample, ...]
    markers: tuple[EventMarker, ...]
    stress_report: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "acc", tuple(self.acc))
        object.__setattr__(self, "ppg", tuple(self.ppg))
        object.__setattr__(self, "markers", tuple(self.markers))
        _check_monotonic((s.t_ms for s in self.acc), "acc")
        _check_monotonic((s.t_ms for s in self.ppg), "ppg")
        if self.stress_report is not None and not 1 <= self.stress_report <= 5:
            raise ValueError(f"stress_report must be in 1..5, got {self.stress_report}")
        if self.acc and self.ppg:
            a0, a1 = self.acc[0].t_ms, self.acc[-1].t_ms
            p0, p1 = self.ppg[0].t_ms, self.ppg[-1].t_ms
            if a1 < p0 or p1 < a0:
                raise ValueError("acc and ppg series do not overlap in time")
        self._check_marker_order()

    def _check_marker_order(self) -> None:
        starts = [m.t_ms for m in self.markers if m.kind is MarkerKind.EXP_START]
        ends = [m.t_ms for m in self.markers if m.kind is MarkerKind.EXP_END]
        inner = [m.t_ms for m in self.markers if m.kind in (MarkerKind.DRAW, MarkerKind.RELEASE)]
        if inner and starts and min(inner) < min(starts):
            raise ValueError("a Draw/Release marker precedes ExpStart")
        if inner and ends and max(inner) > max(ends):
            raise ValueError("a Draw/Release marker follows ExpEnd")

    def acc_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Columnar view (t_ms, ax, ay, az) of the accelerometer series."""
        n = len(self.acc)
        t = np.empty(n, dtype=np.int64)
        ax = np.empty(n)
        ay = np.empty(n)
        az = np.empty(n)
        for i, s in enumerate(self.acc):
            t[i] = s.t_ms
            ax[i] = s.ax
            ay[i] = s.ay
            az[i] = s.az
        return t, ax, ay, az

    def ppg_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Columnar view (t_ms, value) of the pulse series."""
        n = len(self.ppg)
        t = np.empty(n, dtype=np.int64)
        v = np.empty(n)
        for i, s in enumerate(self.ppg):
            t[i] = s.t_ms
            v[i] = s.value
        return t, v

    def draw_marker_indices(self) -> list[int]:
        """Sample indices (into acc) nearest to each Draw marker, in time order."""
        t, _, _, _ = self.acc_arrays()
        out = []
        for m in self.markers:
            if m.kind is MarkerKind.DRAW:
                out.append(int(np.argmin(np.abs(t - m.t_ms))))
        return out


@dataclass(frozen=True, slots=True)
class ShotAnnotation:
    """Four ordered boundary indices into the acc series, one per annotation click.

    b1 = draw start, b2 = draw end / aim start, b3 = aim end / release start,
    b4 = release end. Indices are sample positions, not milliseconds.
    """

    b1: int
    b2: int
    b3: int
    b4: int

    def __post_init__(self):
        if not self.b1 < self.b2 < self.b3 < self.b4:
            raise ValueError(
                f"annotation boundaries must satisfy b1 < b2 < b3 < b4, got "
                f"({self.b1}, {self.b2}, {self.b3}, {self.b4})"
            )
        if self.b1 < 0:
            raise ValueError(f"b1 must be >= 0, got {self.b1}")


@dataclass(frozen=True, slots=True)
class PhaseSegment:
    """Half-open index range [start_idx, end_idx) of one motion phase."""

    phase: Phase
    start_idx: int
    end_idx: int

    def __post_init__(self):
        if not self.start_idx < self.end_idx:
            raise ValueError(f"segment must have start_idx < end_idx, got [{self.start_idx}, {self.end_idx})")


def annotation_to_segments(a: ShotAnnotation) -> list[PhaseSegment]:
    """Expand a four-click annotation into its three contiguous phase segments."""
    return [
        PhaseSegment(Phase.DRAW, a.b1, a.b2),
        PhaseSegment(Phase.AIM, a.b2, a.b3),
        PhaseSegment(Phase.RELEASE, a.b3, a.b4),
    ]


def positive_mask(annotations, series_len: int) -> np.ndarray:
    """Binary vector marking every sample inside some draw-to-release interval [b1, b4).

    Annotations must be non-overlapping and lie within the series.
    """
    mask = np.zeros(series_len, dtype=np.int8)
    for a in sorted(annotations, key=lambda x: x.b1):
        if a.b4 > series_len:
            raise ValueError(f"annotation extends past series end: b4={a.b4} > len={series_len}")
        if mask[a.b1:a.b4].any():
            raise ValueError(f"annotations overlap at [{a.b1}, {a.b4})")
        mask[a.b1:a.b4] = 1
    return mask
