import numpy as np
import pytest

from archsense.hrv import rmssd
from archsense.synth import SynthConfig, gen_session, gen_stress_cohort
from archsense.types import MarkerKind


class TestGenSession:
    def test_no_shots_pure_noise(self):
        session, anns, rr = gen_session(SynthConfig(n_shots=0, seed=0))
        assert anns == []
        assert len(session.acc) > 0
        assert len(rr.intervals_ms) > 0

    def test_exact_rr_without_jitter(self):
        cfg = SynthConfig(n_shots=1, hr_bpm=60.0, rr_jitter_ms=0.0, resp_amp_ms=0.0, seed=1)
        _, _, rr = gen_session(cfg)
        assert np.all(rr.intervals_ms == 1000.0)

    def test_annotation_bookkeeping(self):
        cfg = SynthConfig(n_shots=30, shot_spacing_s=15.0, seed=2)
        session, anns, _ = gen_session(cfg)
        assert len(anns) == 30
        d = int(round(cfg.draw_s * cfg.fs))
        a = int(round(cfg.aim_s * cfg.fs))
        r = int(round(cfg.release_s * cfg.fs))
        for ann in anns:
            assert (ann.b2 - ann.b1, ann.b3 - ann.b2, ann.b4 - ann.b3) == (d, a, r)
        assert anns[-1].b4 <= len(session.acc)

    def test_overlapping_shots_rejected(self):
        with pytest.raises(ValueError, match="overlap"):
            SynthConfig(n_shots=2, shot_spacing_s=3.0, draw_s=1.5, aim_s=2.0, release_s=0.5)

    def test_markers_present_and_ordered(self):
        session, anns, _ = gen_session(SynthConfig(n_shots=3, seed=3))
        kinds = [m.kind for m in session.markers]
        assert kinds[0] is MarkerKind.EXP_START
        assert kinds[-1] is MarkerKind.EXP_END
        assert kinds.count(MarkerKind.DRAW) == 3
        assert kinds.count(MarkerKind.RELEASE) == 3

    def test_stress_report_matches_regime(self):
        low, _, _ = gen_session(SynthConfig(n_shots=1, stress_regime="low", seed=4))
        high, _, _ = gen_session(SynthConfig(n_shots=1, stress_regime="high", seed=4))
        assert low.stress_report in (1, 2, 3)
        assert high.stress_report in (4, 5)

    def test_boundaries_recoverable_without_noise(self):
        # On a noise-free trace every phase boundary is a step change and the
        # aim plateau is exactly constant, so the changing/quiet runs of the
        # first difference delimit the annotation indices exactly.
        cfg = SynthConfig(n_shots=4, noise_std=0.0, ppg_noise_std=0.0, seed=5)
        session, anns, _ = gen_session(cfg)
        _, ax, ay, az = session.acc_arrays()
        changed = (np.abs(np.diff(ax)) > 1e-12) | (np.abs(np.diff(ay)) > 1e-12) \
                  | (np.abs(np.diff(az)) > 1e-12)
        changed = np.concatenate([[False], changed])
        runs = []
        start = None
        for i, flag in enumerate(changed):
            if flag and start is None:
                start = i
            elif not flag and start is not None:
                runs.append((start, i - 1))
                start = None
        assert len(runs) == 2 * len(anns)
        for k, ann in enumerate(anns):
            draw_run, release_run = runs[2 * k], runs[2 * k + 1]
            assert draw_run == (ann.b1, ann.b2)
            assert release_run == (ann.b3, ann.b4)

    def test_deterministic(self):
        a = gen_session(SynthConfig(n_shots=2, seed=6))
        b = gen_session(SynthConfig(n_shots=2, seed=6))
        assert a[0].acc == b[0].acc
        assert a[1] == b[1]
        np.testing.assert_array_equal(a[2].intervals_ms, b[2].intervals_ms)


class TestStressCohort:
    def test_balanced_labels(self):
        cohort = gen_stress_cohort(10, seed=0)
        labels = [lab for _, lab in cohort]
        assert labels.count(0) == 10 and labels.count(1) == 10

    def test_regimes_separate_on_rmssd(self):
        cohort = gen_stress_cohort(50, seed=1)
        lows = [rmssd(rr) for rr, lab in cohort if lab == 0]
        highs = [rmssd(rr) for rr, lab in cohort if lab == 1]
        wins = sum(1 for lo, hi in zip(lows, highs) if lo > hi)
        assert wins >= 0.95 * 50

    def test_deterministic(self):
        a = gen_stress_cohort(5, seed=2)
        b = gen_stress_cohort(5, seed=2)
        for (rra, la), (rrb, lb) in zip(a, b):
            assert la == lb
            np.testing.assert_array_equal(rra.intervals_ms, rrb.intervals_ms)

    def test_bad_count_rejected(self):
        with pytest.raises(ValueError):
            gen_stress_cohort(0, seed=0)
