"""Supervised dataset construction: sliding windows with the majority-overlap
labeling rule, class rebalancing, stratified splitting, and 30 s stress windows
with Likert binarization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .accel import FeatureChannels
from .hrv import HrvFeatureVector, extract_all
from .ppg import RRSeries
from .types import SessionRecording, ShotAnnotation

WINDOW_LEN = 80
WINDOW_STEP = 20
STRESS_WINDOW_S = 30.0


@dataclass(frozen=True)
class WindowSample:
    """One fixed-length 5-channel window with its binary motion label."""

    features: np.ndarray  # (window_len, 5)
    label: int
    origin: tuple[str, int]  # (session id, start index)


@dataclass(frozen=True)
class StressSample:
    """One feature vector with its binary stress label."""

    features: HrvFeatureVector
    label: int
    origin: tuple[str, int]  # (session id, window start ms)


def slide_windows(channels: FeatureChannels, win: int = WINDOW_LEN, step: int = WINDOW_STEP) -> list[np.ndarray]:
    """Overlapping (win, 5) views at offsets 0, step, 2*step, ..."""
    if win < 1 or step < 1:
        raise ValueError(f"win and step must be >= 1, got win={win} step={step}")
    mat = channels.as_matrix()
    n = mat.shape[0]
    if n < win:
        raise ValueError(f"series length {n} shorter than window {win}")
    return [mat[s : s + win] for s in range(0, n - win + 1, step)]


def window_starts(series_len: int, win: int = WINDOW_LEN, step: int = WINDOW_STEP) -> np.ndarray:
    if series_len < win:
        raise ValueError(f"series length {series_len} shorter than window {win}")
    return np.arange(0, series_len - win + 1, step)


def label_window(start: int, win: int, mask: np.ndarray) -> int:
    """1 iff strictly more than half the window's points are inside a shot."""
    if start < 0 or start + win > len(mask):
        raise ValueError(f"window [{start}, {start + win}) outside mask of length {len(mask)}")
    return int(np.sum(mask[start : start + win]) * 2 > win)


def window_samples(
    channels: FeatureChannels,
    annotations: list[ShotAnnotation],
    session_id: str,
    win: int = WINDOW_LEN,
    step: int = WINDOW_STEP,
) -> list[WindowSample]:
    """All labeled windows of one session."""
    from .types import positive_mask

    mask = positive_mask(annotations, len(channels))
    mats = slide_windows(channels, win, step)
    starts = window_starts(len(channels), win, step)
    return [
        WindowSample(features=m, label=label_window(int(s), win, mask), origin=(session_id, int(s)))
        for m, s in zip(mats, starts)
    ]


def rebalance(samples, seed: int):
    """Equalize classes at min(majority, 2 * minority) per class.

    The majority is randomly under-sampled (without replacement) and the
    minority duplicated up to the same count, so no feature values are ever
    fabricated. Already balanced input comes back with unchanged counts.
    """
    samples = list(samples)
    pos = [s for s in samples if s.label == 1]
    neg = [s for s in samples if s.label == 0]
    if not pos or not neg:
        raise ValueError(f"both classes required, got {len(pos)} positive / {len(neg)} negative")
    minority, majority = (pos, neg) if len(pos) <= len(neg) else (neg, pos)
    target = min(len(majority), 2 * len(minority))

    rng = np.random.default_rng(seed)
    kept_major = [majority[i] for i in rng.choice(len(majority), size=target, replace=False)]
    reps, extra = divmod(target, len(minority))
    grown_minor = minority * reps
    if extra:
        grown_minor += [minority[i] for i in rng.choice(len(minority), size=extra, replace=False)]
    out = kept_major + grown_minor
    perm = rng.permutation(len(out))
    return [out[i] for i in perm]


def split_indices(labels, ratio: float = 0.7, seed: int = 0) -> tuple[list[int], list[int]]:
    """Deterministic stratified train/test index split.

    The train size is round(ratio * N) overall, allocated to classes by
    largest remainder so each class lands within one sample of the ratio.
    """
    labels = [int(l) for l in labels]
    if not 0 < ratio < 1:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    if len(labels) < 2:
        raise ValueError(f"need >= 2 samples to split, got {len(labels)}")
    by_label: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        by_label.setdefault(lab, []).append(i)
    if len(by_label) < 2:
        raise ValueError("stratification impossible: only one class present")

    total_train = round(ratio * len(labels))
    classes = sorted(by_label)
    quotas = {lab: ratio * len(by_label[lab]) for lab in classes}
    alloc = {lab: int(np.floor(quotas[lab])) for lab in classes}
    remainder = total_train - sum(alloc.values())
    for lab in sorted(classes, key=lambda l: quotas[l] - alloc[l], reverse=True)[:remainder]:
        alloc[lab] += 1

    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for lab in classes:
        idx = np.array(by_label[lab])
        idx = idx[rng.permutation(len(idx))]
        train_idx.extend(int(i) for i in idx[: alloc[lab]])
        test_idx.extend(int(i) for i in idx[alloc[lab] :])
    train_idx.sort()
    test_idx.sort()
    return train_idx, test_idx


def split(samples, ratio: float = 0.7, seed: int = 0):
    """Stratified sample split; see split_indices."""
    samples = list(samples)
    train_idx, test_idx = split_indices([s.label for s in samples], ratio, seed)
    return [samples[i] for i in train_idx], [samples[i] for i in test_idx]


def binarize_stress(likert: int) -> int:
    """Ratings 1-3 map to low (0), 4-5 to high (1)."""
    if likert not in (1, 2, 3, 4, 5):
        raise ValueError(f"rating must be in 1..5, got {likert}")
    return 1 if likert >= 4 else 0


def stress_windows(
    session: SessionRecording,
    annotations: list[ShotAnnotation],
    rr: RRSeries,
    window_s: float = STRESS_WINDOW_S,
) -> tuple[list[StressSample], int]:
    """One 30 s feature window per annotated shot, anchored at draw start.

    Intervals overlapping the window (including the beats straddling its
    edges) feed the feature extractor, which keeps the spectral span
    requirement satisfiable. Shots whose window leaves the recording, or whose
    in-window series is too sparse for the extractor, are skipped; the second
    return value counts the skips.
    """
    if session.stress_report is None:
        raise ValueError("session has no stress report")
    if rr.peak_indices.size != rr.intervals_ms.size + 1:
        raise ValueError("interval series lacks peak provenance")
    label = binarize_stress(session.stress_report)
    acc_t = np.array([s.t_ms for s in session.acc], dtype=np.int64)
    ppg_t = np.array([s.t_ms for s in session.ppg], dtype=np.int64)
    peak_t = ppg_t[rr.peak_indices]
    recording_end = int(min(acc_t[-1], ppg_t[-1]))

    out: list[StressSample] = []
    skipped = 0
    for a in annotations:
        start_ms = int(acc_t[a.b1])
        end_ms = start_ms + int(window_s * 1000)
        if end_ms > recording_end:
            skipped += 1
            continue
        sel = (peak_t[1:] > start_ms) & (peak_t[:-1] < end_ms)
        try:
            feats = extract_all(rr.intervals_ms[sel])
        except ValueError:
            skipped += 1
            continue
        out.append(StressSample(features=feats, label=label, origin=(session.round_id, start_ms)))
    return out, skipped
