"""Stream-level motion detection: window probabilities, thresholding, merging
consecutive positives into events, and duration validation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .accel import FeatureChannels
from .dataset import WINDOW_LEN, WINDOW_STEP, slide_windows

PROB_THRESHOLD = 0.9
MIN_DURATION_S = 1.0
MAX_DURATION_S = 8.0
IOU_MIN = 0.5


@dataclass(frozen=True)
class DetectedEvent:
    """Half-open sample range of one detected draw-to-release motion."""

    start_idx: int
    end_idx: int
    mean_prob: float

    def __post_init__(self):
        if not self.start_idx < self.end_idx:
            raise ValueError(f"event must have start < end, got [{self.start_idx}, {self.end_idx})")


def predict_stream(
    model,
    channels: FeatureChannels,
    win: int = WINDOW_LEN,
    step: int = WINDOW_STEP,
    threshold: float = PROB_THRESHOLD,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-window binary labels (prob strictly above threshold) plus the raw
    probabilities, over the sliding windows of one session."""
    windows = slide_windows(channels, win, step)
    probs = model.predict_proba(np.stack(windows))
    labels = (probs > threshold).astype(np.int8)
    return labels, probs


def merge_consecutive(
    labels,
    win: int = WINDOW_LEN,
    step: int = WINDOW_STEP,
    probs=None,
) -> list[DetectedEvent]:
    """Each maximal run of positive windows becomes one event covering
    [first window start, last window start + win)."""
    labels = np.asarray(labels).astype(int)
    if probs is not None:
        probs = np.asarray(probs, dtype=float)
        if probs.shape != labels.shape:
            raise ValueError(f"probs shape {probs.shape} != labels shape {labels.shape}")
    events: list[DetectedEvent] = []
    run_start = None
    for w in range(labels.size + 1):
        active = w < labels.size and labels[w] == 1
        if active and run_start is None:
            run_start = w
        elif not active and run_start is not None:
            start_idx = run_start * step
            end_idx = (w - 1) * step + win
            mean_prob = float(probs[run_start:w].mean()) if probs is not None else 0.5
            events.append(DetectedEvent(start_idx=start_idx, end_idx=end_idx, mean_prob=mean_prob))
            run_start = None
    return events


def validate_durations(
    events,
    min_s: float = MIN_DURATION_S,
    max_s: float = MAX_DURATION_S,
    fs: float = 20.0,
) -> list[DetectedEvent]:
    """Keep events whose duration lies in [min_s, max_s] seconds inclusive."""
    if min_s > max_s:
        raise ValueError(f"min_s={min_s} > max_s={max_s}")
    out = []
    for e in events:
        dur_s = (e.end_idx - e.start_idx) / fs
        if min_s <= dur_s <= max_s:
            out.append(e)
    return out


def interval_iou(a: tuple[int, int], b: tuple[int, int]) -> float:
    inter = max(0, min(a[1], b[1]) - max(a[0], b[0]))
    union = max(a[1], b[1]) - min(a[0], b[0])
    return inter / union if union else 0.0


def match_events(detected, truth, iou_min: float = IOU_MIN) -> list[tuple[int, int, float]]:
    """Greedy one-to-one matching of detected events to truth intervals.

    Pairs are taken in descending overlap-over-union order; only pairs at or
    above iou_min count. Returns (detected index, truth index, iou) triples.
    """
    det_iv = [(e.start_idx, e.end_idx) if isinstance(e, DetectedEvent) else (int(e[0]), int(e[1])) for e in detected]
    tru_iv = [(int(t[0]), int(t[1])) for t in truth]
    pairs = []
    for i, d in enumerate(det_iv):
        for j, t in enumerate(tru_iv):
            iou = interval_iou(d, t)
            if iou >= iou_min:
                pairs.append((iou, i, j))
    pairs.sort(key=lambda p: (-p[0], p[1], p[2]))
    used_d: set[int] = set()
    used_t: set[int] = set()
    matches = []
    for iou, i, j in pairs:
        if i in used_d or j in used_t:
            continue
        used_d.add(i)
        used_t.add(j)
        matches.append((i, j, iou))
    return matches
