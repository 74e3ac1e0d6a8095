"""Batch pipeline stages behind the CLI.

Every stage reads its inputs from disk, writes deterministic artifacts
(write-then-rename; no timestamps), and is reproducible byte-for-byte from
config + seeds.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import detect, metrics, ppg
from .accel import FeatureChannels, build_channels
from .config import PipelineConfig
from .dataset import (
    WindowSample,
    rebalance,
    split_indices,
    stress_windows,
    window_samples,
)
from .ingest import (
    atomic_write_json,
    atomic_write_text,
    load_annotations,
    load_session,
    save_annotations,
    write_session,
)
from .nn import TrainConfig, load_model, lstm_train, mlp_train_arrays, save_model
from .synth import SynthConfig, gen_session
from .types import ShotAnnotation, positive_mask


def list_sessions(cfg: PipelineConfig) -> list[str]:
    root = cfg.data_path
    if not root.is_dir():
        return []
    return sorted(p.name for p in root.iterdir() if (p / "acc.csv").exists())


def train_config(cfg: PipelineConfig) -> TrainConfig:
    return TrainConfig(
        learning_rate=cfg.learning_rate,
        momentum=cfg.momentum,
        epochs=cfg.epochs,
        batch_size=cfg.batch_size,
        seed=cfg.seed,
    )


# --- synth ---------------------------------------------------------------

def stage_synth(cfg: PipelineConfig, n_sessions: int, n_shots: int,
                spacing_s: float = 15.0, noise_std: float = 0.05) -> list[str]:
    """Generate n_sessions synthetic rounds (alternating stress regimes) with
    ground-truth annotation and interval files alongside the raw CSVs."""
    ids = []
    for k in range(n_sessions):
        regime = "low" if k % 2 == 0 else "high"
        scfg = SynthConfig(
            n_shots=n_shots,
            shot_spacing_s=spacing_s,
            noise_std=noise_std,
            stress_regime=regime,
            hr_bpm=65.0 if regime == "low" else 95.0,
            rr_jitter_ms=60.0 if regime == "low" else 15.0,
            resp_amp_ms=40.0 if regime == "low" else 8.0,
            seed=cfg.seed * 10007 + k,
        )
        sid = f"synth-{k:04d}"
        session, annotations, true_rr = gen_session(scfg, subject_id="synth", round_id=sid)
        sdir = cfg.data_path / sid
        write_session(session, sdir)
        save_annotations(sdir / "truth_annotations.json", {sid: annotations})
        atomic_write_json(sdir / "true_rr.json", {"intervals_ms": list(map(float, true_rr.intervals_ms))})
        ids.append(sid)
    return ids


# --- preprocess ----------------------------------------------------------

def stage_preprocess(cfg: PipelineConfig) -> list[str]:
    """Per session: feature channels from the accelerometer and a corrected
    interval series from the pulse channel."""
    done = []
    for sid in list_sessions(cfg):
        session = load_session(cfg.data_path / sid)
        wdir = cfg.work_path / sid
        wdir.mkdir(parents=True, exist_ok=True)

        channels = build_channels(session.acc, cfg.smooth_window)
        _save_npy(wdir / "channels.npy", channels.as_matrix())

        _, values = session.ppg_arrays()
        filtered = ppg.bandpass(values, cfg.fs, cfg.filter_low, cfg.filter_high, cfg.filter_order)
        peaks = ppg.detect_peaks(filtered, cfg.fs)
        rr_obj = None
        if peaks.size >= 2:
            try:
                rr_obj = ppg.correct_rr(ppg.peaks_to_rr(peaks, cfg.fs))
            except ValueError:
                rr_obj = None
        payload = {
            "intervals_ms": [] if rr_obj is None else [float(v) for v in rr_obj.intervals_ms],
            "peak_indices": [] if rr_obj is None else [int(i) for i in rr_obj.peak_indices],
        }
        atomic_write_json(wdir / "rr.json", payload)
        done.append(sid)
    if not done:
        raise FileNotFoundError(f"no sessions found under {cfg.data_dir}")
    return done


def load_channels(cfg: PipelineConfig, sid: str) -> FeatureChannels:
    mat = np.load(cfg.work_path / sid / "channels.npy")
    return FeatureChannels(ax=mat[:, 0], ay=mat[:, 1], az=mat[:, 2],
                           total=mat[:, 3], smooth_diff=mat[:, 4])


def load_rr(cfg: PipelineConfig, sid: str) -> ppg.RRSeries | None:
    payload = json.loads((cfg.work_path / sid / "rr.json").read_text())
    if not payload["intervals_ms"]:
        return None
    return ppg.RRSeries(
        intervals_ms=np.array(payload["intervals_ms"], dtype=float),
        peak_indices=np.array(payload["peak_indices"], dtype=np.int64),
    )


def resolve_annotations(cfg: PipelineConfig) -> dict[str, list[ShotAnnotation]]:
    """The annotation store (human labels) wins; otherwise fall back to the
    per-session ground-truth files written by the generator."""
    store = cfg.work_path / "annotations.json"
    if store.exists():
        return load_annotations(store)
    out: dict[str, list[ShotAnnotation]] = {}
    for sid in list_sessions(cfg):
        truth = cfg.data_path / sid / "truth_annotations.json"
        if truth.exists():
            out.update(load_annotations(truth))
    return out


# --- datasets ------------------------------------------------------------

def stage_build_dataset(cfg: PipelineConfig) -> dict:
    annotations = resolve_annotations(cfg)
    sessions = list_sessions(cfg)
    if not sessions:
        raise FileNotFoundError(f"no sessions found under {cfg.data_dir}")

    windows = []
    labels = []
    origins = []
    for sid in sessions:
        if sid not in annotations:
            continue
        channels = load_channels(cfg, sid)
        for s in window_samples(channels, annotations[sid], sid, cfg.win, cfg.step):
            windows.append(s.features)
            labels.append(s.label)
            origins.append([s.origin[0], s.origin[1]])
    if not windows:
        raise ValueError("no annotated sessions; nothing to window")
    _save_npy(cfg.work_path / "motion_windows.npy", np.stack(windows))
    _save_npy(cfg.work_path / "motion_labels.npy", np.array(labels, dtype=np.int8))
    atomic_write_json(cfg.work_path / "motion_origins.json", origins)

    feats = []
    slabels = []
    sorigins = []
    skipped = 0
    for sid in sessions:
        if sid not in annotations:
            continue
        session = load_session(cfg.data_path / sid)
        rr = load_rr(cfg, sid)
        if session.stress_report is None or rr is None:
            continue
        samples, n_skip = stress_windows(session, annotations[sid], rr, cfg.stress_window_s)
        skipped += n_skip
        for s in samples:
            feats.append(s.features.to_array())
            slabels.append(s.label)
            sorigins.append([s.origin[0], s.origin[1]])
    meta = {
        "n_motion_windows": len(windows),
        "n_motion_positive": int(np.sum(labels)),
        "n_stress_samples": len(feats),
        "n_stress_skipped": skipped,
    }
    if feats:
        _save_npy(cfg.work_path / "stress_features.npy", np.stack(feats))
        _save_npy(cfg.work_path / "stress_labels.npy", np.array(slabels, dtype=np.int8))
        atomic_write_json(cfg.work_path / "stress_origins.json", sorigins)
    atomic_write_json(cfg.work_path / "dataset_meta.json", meta)
    return meta


# --- training ------------------------------------------------------------

def stage_train_motion(cfg: PipelineConfig) -> dict:
    x = np.load(cfg.work_path / "motion_windows.npy")
    y = np.load(cfg.work_path / "motion_labels.npy")
    samples = [WindowSample(features=x[i], label=int(y[i]), origin=("", i)) for i in range(len(y))]
    balanced = rebalance(samples, cfg.seed)
    train, _ = _split_samples(balanced, cfg)
    model = lstm_train(train, train_config(cfg), cfg.lstm_hidden)
    cfg.model_path.mkdir(parents=True, exist_ok=True)
    save_model(model, cfg.model_path / "motion.model", train_config(cfg))
    info = {
        "n_balanced": len(balanced),
        "n_train": len(train),
        "initial_loss": model.loss_history[0],
        "final_loss": model.loss_history[-1],
        "backend": _backend_name(),
    }
    atomic_write_json(cfg.model_path / "motion_train.json", info)
    return info


def _split_samples(samples, cfg: PipelineConfig):
    train_idx, test_idx = split_indices([s.label for s in samples], cfg.split_ratio, cfg.seed)
    return [samples[i] for i in train_idx], [samples[i] for i in test_idx]


def stage_train_stress(cfg: PipelineConfig) -> dict:
    x = np.load(cfg.work_path / "stress_features.npy")
    y = np.load(cfg.work_path / "stress_labels.npy").astype(int)
    train_idx, _ = split_indices(y, cfg.split_ratio, cfg.seed)
    model = mlp_train_arrays(x[train_idx], y[train_idx].astype(float), train_config(cfg), cfg.mlp_hidden)
    cfg.model_path.mkdir(parents=True, exist_ok=True)
    save_model(model, cfg.model_path / "stress.model", train_config(cfg))
    info = {
        "n_train": len(train_idx),
        "initial_loss": model.loss_history[0],
        "final_loss": model.loss_history[-1],
    }
    atomic_write_json(cfg.model_path / "stress_train.json", info)
    return info


# --- evaluation ----------------------------------------------------------

def stage_eval_motion(cfg: PipelineConfig) -> dict:
    model_file = cfg.model_path / "motion.model"
    if not model_file.exists():
        raise FileNotFoundError(f"no trained motion model at {model_file}; run train-motion first")
    model, _ = load_model(model_file, expect_input_dim=5)
    annotations = resolve_annotations(cfg)

    all_pred = []
    all_true = []
    n_events_true = 0
    n_events_detected = 0
    n_matched = 0
    per_session = {}
    for sid in list_sessions(cfg):
        if sid not in annotations:
            continue
        channels = load_channels(cfg, sid)
        labels, probs = detect.predict_stream(model, channels, cfg.win, cfg.step, cfg.threshold)
        events = detect.validate_durations(
            detect.merge_consecutive(labels, cfg.win, cfg.step, probs),
            cfg.min_duration_s, cfg.max_duration_s, cfg.fs,
        )
        mask = positive_mask(annotations[sid], len(channels))
        truth_labels = [
            int(mask[s : s + cfg.win].sum() * 2 > cfg.win)
            for s in range(0, len(channels) - cfg.win + 1, cfg.step)
        ]
        truth_iv = [(a.b1, a.b4) for a in annotations[sid]]
        matches = detect.match_events(events, truth_iv, cfg.iou_min)

        all_pred.extend(int(v) for v in labels)
        all_true.extend(truth_labels)
        n_events_true += len(truth_iv)
        n_events_detected += len(events)
        n_matched += len(matches)
        per_session[sid] = {
            "events_true": len(truth_iv),
            "events_detected": len(events),
            "events_matched": len(matches),
        }

    if not all_true:
        raise ValueError("no annotated sessions to evaluate")
    report = metrics.evaluate(all_pred, all_true)
    out = {
        "window": report.to_dict(),
        "event_recall": n_matched / n_events_true if n_events_true else 0.0,
        "event_precision": n_matched / n_events_detected if n_events_detected else 0.0,
        "n_events_true": n_events_true,
        "n_events_detected": n_events_detected,
        "n_matched": n_matched,
        "per_session": per_session,
    }
    cfg.out_path.mkdir(parents=True, exist_ok=True)
    atomic_write_json(cfg.out_path / "motion_eval.json", out)
    return out


def stage_eval_stress(cfg: PipelineConfig) -> dict:
    model_file = cfg.model_path / "stress.model"
    if not model_file.exists():
        raise FileNotFoundError(f"no trained stress model at {model_file}; run train-stress first")
    model, _ = load_model(model_file, expect_input_dim=11)
    x = np.load(cfg.work_path / "stress_features.npy")
    y = np.load(cfg.work_path / "stress_labels.npy").astype(int)
    _, test_idx = split_indices(y, cfg.split_ratio, cfg.seed)
    probs = model.predict_proba(x[test_idx])
    preds = (probs > 0.5).astype(int)
    report = metrics.evaluate(list(preds), list(y[test_idx]))
    out = {"n_test": len(test_idx), **report.to_dict()}
    cfg.out_path.mkdir(parents=True, exist_ok=True)
    atomic_write_json(cfg.out_path / "stress_eval.json", out)
    return out


def stage_report(cfg: PipelineConfig) -> dict:
    combined = {"config": cfg.to_dict()}
    motion_file = cfg.out_path / "motion_eval.json"
    stress_file = cfg.out_path / "stress_eval.json"
    if motion_file.exists():
        combined["motion"] = json.loads(motion_file.read_text())
    if stress_file.exists():
        combined["stress"] = json.loads(stress_file.read_text())
    if len(combined) == 1:
        raise FileNotFoundError("nothing to report: run eval-motion / eval-stress first")
    cfg.out_path.mkdir(parents=True, exist_ok=True)
    atomic_write_json(cfg.out_path / "report.json", combined)
    atomic_write_text(cfg.out_path / "report.txt", _render_report(combined))
    return combined


def _render_report(combined: dict) -> str:
    lines = ["archsense evaluation report", "=" * 28, ""]
    if "motion" in combined:
        m = combined["motion"]
        w = m["window"]
        lines += [
            "Motion detection",
            f"  events: {m['n_matched']}/{m['n_events_true']} recovered "
            f"(recall {m['event_recall']:.3f}, precision {m['event_precision']:.3f})",
            f"  window accuracy {w['accuracy']:.3f}  precision {w['precision']:.3f}  "
            f"recall {w['recall']:.3f}  f1 {w['f1']:.3f}",
            f"  quantity agreement {w['pqd']:.3f}  sample-level accuracy {w['sla']:.3f}",
            "",
        ]
    if "stress" in combined:
        s = combined["stress"]
        lines += [
            "Stress classification (held-out)",
            f"  n={s['n_test']}  accuracy {s['accuracy']:.3f}  precision {s['precision']:.3f}  "
            f"recall {s['recall']:.3f}  f1 {s['f1']:.3f}",
            "",
        ]
    return "\n".join(lines)


def _backend_name() -> str:
    from .nn import BACKEND
    return BACKEND


def _save_npy(path: Path, arr: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        np.save(fh, arr)
    tmp.replace(path)
