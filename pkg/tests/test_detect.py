import numpy as np
import pytest

from archsense.accel import FeatureChannels
from archsense.detect import (
    DetectedEvent,
    interval_iou,
    match_events,
    merge_consecutive,
    predict_stream,
    validate_durations,
)


class StubModel:
    """Deterministic stand-in emitting a fixed probability per window."""

    def __init__(self, probs):
        self.probs = np.asarray(probs, dtype=float)

    def predict_proba(self, windows):
        assert windows.shape[0] == self.probs.size
        return self.probs


def channels(n):
    z = np.zeros(n)
    return FeatureChannels(ax=z, ay=z, az=z, total=z, smooth_diff=z)


class TestPredictStream:
    def test_all_high(self):
        labels, _ = predict_stream(StubModel([0.95] * 7), channels(200))
        assert labels.tolist() == [1] * 7

    def test_threshold_is_strict(self):
        labels, _ = predict_stream(StubModel([0.9, 0.90001]), channels(100))
        assert labels.tolist() == [0, 1]

    def test_alternating(self):
        labels, _ = predict_stream(StubModel([0.95, 0.1, 0.95, 0.1, 0.95, 0.1, 0.95]), channels(200))
        assert labels.tolist() == [1, 0, 1, 0, 1, 0, 1]

    def test_too_short(self):
        with pytest.raises(ValueError):
            predict_stream(StubModel([]), channels(79))


class TestMergeConsecutive:
    def test_offset_arithmetic(self):
        events = merge_consecutive([0, 1, 1, 0], win=80, step=20)
        assert len(events) == 1
        assert (events[0].start_idx, events[0].end_idx) == (20, 120)

    def test_all_zero(self):
        assert merge_consecutive([0, 0, 0], win=80, step=20) == []

    def test_single_window(self):
        events = merge_consecutive([1], win=80, step=20)
        assert (events[0].start_idx, events[0].end_idx) == (0, 80)

    def test_mean_prob(self):
        events = merge_consecutive([0, 1, 1, 0], win=80, step=20,
                                   probs=[0.1, 0.92, 0.98, 0.2])
        assert events[0].mean_prob == pytest.approx(0.95)

    def test_events_disjoint_and_ordered(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            labels = rng.integers(0, 2, 40)
            events = merge_consecutive(labels, win=80, step=20)
            for a, b in zip(events, events[1:]):
                assert a.end_idx - a.start_idx >= 80
                assert a.start_idx < b.start_idx
                # events from separate runs are separated by >= one step
                assert b.start_idx - (a.end_idx - 80) >= 2 * 20


class TestValidateDurations:
    def test_keeps_typical_shot(self):
        e = DetectedEvent(0, 80, 0.95)  # 4 s at 20 Hz
        assert validate_durations([e]) == [e]

    def test_drops_too_short(self):
        e = DetectedEvent(0, 10, 0.95)  # 0.5 s
        assert validate_durations([e]) == []

    def test_drops_too_long(self):
        e = DetectedEvent(0, 200, 0.95)  # 10 s
        assert validate_durations([e]) == []

    def test_bounds_inclusive(self):
        lo = DetectedEvent(0, 20, 0.9)   # exactly 1 s
        hi = DetectedEvent(0, 160, 0.9)  # exactly 8 s
        assert validate_durations([lo, hi]) == [lo, hi]

    def test_filter_is_subset(self):
        events = [DetectedEvent(i * 300, i * 300 + 20 + 30 * i, 0.9) for i in range(6)]
        out = validate_durations(events)
        assert all(e in events for e in out)

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            validate_durations([], min_s=5.0, max_s=1.0)


class TestMatchEvents:
    def test_identical(self):
        detected = [DetectedEvent(0, 80, 0.9), DetectedEvent(200, 280, 0.9)]
        truth = [(0, 80), (200, 280)]
        matches = match_events(detected, truth)
        assert len(matches) == 2
        assert all(iou == 1.0 for _, _, iou in matches)

    def test_disjoint(self):
        assert match_events([DetectedEvent(0, 80, 0.9)], [(500, 580)]) == []

    def test_low_overlap_unmatched(self):
        assert interval_iou((0, 80), (40, 120)) == pytest.approx(1 / 3)
        assert match_events([DetectedEvent(0, 80, 0.9)], [(40, 120)], iou_min=0.5) == []

    def test_one_to_one(self):
        detected = [DetectedEvent(0, 80, 0.9), DetectedEvent(10, 90, 0.9)]
        truth = [(0, 80)]
        matches = match_events(detected, truth)
        assert len(matches) == 1
        assert matches[0][0] == 0  # the perfect-overlap candidate wins

    def test_threshold_monotonicity(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            starts = np.sort(rng.choice(2000, 8, replace=False)) * 10
            detected = [DetectedEvent(int(s), int(s) + 80, 0.9) for s in starts]
            truth = [(int(s) + rng.integers(-60, 60), int(s) + 80 + rng.integers(-60, 60))
                     for s in starts]
            truth = [(a, b) for a, b in truth if a < b]
            loose = match_events(detected, truth, iou_min=0.3)
            strict = match_events(detected, truth, iou_min=0.7)
            assert len(strict) <= len(loose)
