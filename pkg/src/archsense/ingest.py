"""Session directory I/O.

A session directory holds four files: acc.csv (t_ms,ax,ay,az), ppg.csv
(t_ms,value), markers.csv (t_ms,kind) and meta.txt (key: value lines with
subject_id, round_id and an optional stress_report). Parsing errors name the
offending file and line. Writers emit the exact same layout so synthetic and
real data are interchangeable.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

from .types import (
    AccSample,
    EventMarker,
    MarkerKind,
    PpgSample,
    SessionRecording,
    ShotAnnotation,
)

ACC_HEADER = ["t_ms", "ax", "ay", "az"]
PPG_HEADER = ["t_ms", "value"]
MARKER_HEADER = ["t_ms", "kind"]

_KINDS = {k.value: k for k in MarkerKind}


def _read_csv(path: Path, header: list[str]):
    if not path.exists():
        raise FileNotFoundError(f"missing file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows or rows[0] != header:
        raise ValueError(f"{path} line 1: expected header {','.join(header)}")
    return rows[1:]


def _parse_num(raw: str, path: Path, line: int, kind=float):
    try:
        return kind(raw)
    except ValueError:
        raise ValueError(f"{path} line {line}: invalid number {raw!r}") from None


def load_session(session_dir) -> SessionRecording:
    """Parse and validate one session directory."""
    d = Path(session_dir)
    acc = []
    for i, row in enumerate(_read_csv(d / "acc.csv", ACC_HEADER), start=2):
        if len(row) != 4:
            raise ValueError(f"{d / 'acc.csv'} line {i}: expected 4 fields, got {len(row)}")
        acc.append(AccSample(
            t_ms=_parse_num(row[0], d / "acc.csv", i, int),
            ax=_parse_num(row[1], d / "acc.csv", i),
            ay=_parse_num(row[2], d / "acc.csv", i),
            az=_parse_num(row[3], d / "acc.csv", i),
        ))
    ppg = []
    for i, row in enumerate(_read_csv(d / "ppg.csv", PPG_HEADER), start=2):
        if len(row) != 2:
            raise ValueError(f"{d / 'ppg.csv'} line {i}: expected 2 fields, got {len(row)}")
        ppg.append(PpgSample(
            t_ms=_parse_num(row[0], d / "ppg.csv", i, int),
            value=_parse_num(row[1], d / "ppg.csv", i),
        ))
    markers = []
    for i, row in enumerate(_read_csv(d / "markers.csv", MARKER_HEADER), start=2):
        if len(row) != 2:
            raise ValueError(f"{d / 'markers.csv'} line {i}: expected 2 fields, got {len(row)}")
        if row[1] not in _KINDS:
            raise ValueError(f"{d / 'markers.csv'} line {i}: unknown marker kind {row[1]!r}")
        markers.append(EventMarker(t_ms=_parse_num(row[0], d / "markers.csv", i, int),
                                   kind=_KINDS[row[1]]))

    meta = _load_meta(d / "meta.txt")
    for key in ("subject_id", "round_id"):
        if key not in meta:
            raise ValueError(f"{d / 'meta.txt'}: missing key {key!r}")
    stress = meta.get("stress_report")
    try:
        return SessionRecording(
            subject_id=meta["subject_id"],
            round_id=meta["round_id"],
            acc=tuple(acc),
            ppg=tuple(ppg),
            markers=tuple(markers),
            stress_report=int(stress) if stress is not None else None,
        )
    except ValueError as exc:
        raise ValueError(f"{d}: {exc}") from exc


def _load_meta(path: Path) -> dict[str, str]:
    if not path.exists():
        raise FileNotFoundError(f"missing file: {path}")
    meta = {}
    for i, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ValueError(f"{path} line {i}: expected 'key: value'")
        key, value = line.split(":", 1)
        meta[key.strip()] = value.strip()
    return meta


def _fmt(x: float) -> str:
    # repr keeps the exact double; locale-independent.
    return repr(float(x))


def write_session(session: SessionRecording, session_dir) -> None:
    """Write a session directory (atomically per file)."""
    d = Path(session_dir)
    d.mkdir(parents=True, exist_ok=True)
    acc_lines = [",".join(ACC_HEADER)]
    acc_lines += [f"{s.t_ms},{_fmt(s.ax)},{_fmt(s.ay)},{_fmt(s.az)}" for s in session.acc]
    atomic_write_text(d / "acc.csv", "\n".join(acc_lines) + "\n")

    ppg_lines = [",".join(PPG_HEADER)]
    ppg_lines += [f"{s.t_ms},{_fmt(s.value)}" for s in session.ppg]
    atomic_write_text(d / "ppg.csv", "\n".join(ppg_lines) + "\n")

    marker_lines = [",".join(MARKER_HEADER)]
    marker_lines += [f"{m.t_ms},{m.kind.value}" for m in session.markers]
    atomic_write_text(d / "markers.csv", "\n".join(marker_lines) + "\n")

    meta_lines = [f"subject_id: {session.subject_id}", f"round_id: {session.round_id}"]
    if session.stress_report is not None:
        meta_lines.append(f"stress_report: {session.stress_report}")
    atomic_write_text(d / "meta.txt", "\n".join(meta_lines) + "\n")


def atomic_write_text(path, text: str) -> None:
    """Write-then-rename so readers never observe a partial file."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def atomic_write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def load_annotations(path) -> dict[str, list[ShotAnnotation]]:
    """Read an annotation store: a JSON array of {session_id, b1..b4} objects."""
    raw = json.loads(Path(path).read_text())
    out: dict[str, list[ShotAnnotation]] = {}
    for entry in raw:
        out.setdefault(entry["session_id"], []).append(
            ShotAnnotation(b1=entry["b1"], b2=entry["b2"], b3=entry["b3"], b4=entry["b4"])
        )
    return out


def save_annotations(path, per_session: dict[str, list[ShotAnnotation]],
                     source: str | None = None) -> None:
    entries = []
    for sid in sorted(per_session):
        for a in per_session[sid]:
            entry = {"session_id": sid, "b1": a.b1, "b2": a.b2, "b3": a.b3, "b4": a.b4}
            if source is not None:
                entry["source"] = source
            entries.append(entry)
    atomic_write_json(path, entries)
