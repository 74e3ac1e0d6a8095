"""HTTP JSON API behind the waveform annotation frontend.

Plain request/response endpoints over preprocessed sessions: list sessions,
fetch a waveform slice (default view: 150 samples before to 300 after a Draw
marker), post four-click annotations, and export the store. Any frontend that
speaks this JSON can drive the labeling workflow.
"""

from __future__ import annotations

import threading
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import PipelineConfig
from .ingest import load_annotations, load_session, save_annotations
from .pipeline import list_sessions, load_channels
from .types import MarkerKind, SessionRecording, ShotAnnotation

SLICE_BEFORE = 150
SLICE_AFTER = 300

CHANNEL_NAMES = ("ax", "ay", "az", "total", "smooth_diff")


class AnnotationIn(BaseModel):
    b1: int
    b2: int
    b3: int
    b4: int
    source: str = "human"


class _Store:
    """Annotation store with serialized writes; the JSON file is the truth."""

    def __init__(self, path: Path):
        self.path = path
        self.lock = threading.Lock()
        self.by_session: dict[str, list[ShotAnnotation]] = {}
        if path.exists():
            self.by_session = load_annotations(path)

    def add(self, sid: str, annotation: ShotAnnotation) -> None:
        with self.lock:
            self.by_session.setdefault(sid, []).append(annotation)
            save_annotations(self.path, self.by_session)

    def get(self, sid: str) -> list[ShotAnnotation]:
        with self.lock:
            return list(self.by_session.get(sid, []))

    def export(self) -> list[dict]:
        with self.lock:
            out = []
            for sid in sorted(self.by_session):
                for a in self.by_session[sid]:
                    out.append({"session_id": sid, "b1": a.b1, "b2": a.b2, "b3": a.b3, "b4": a.b4})
            return out


def create_app(cfg: PipelineConfig, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="archsense annotation API")
    store = _Store(cfg.work_path / "annotations.json")
    session_cache: dict[str, SessionRecording] = {}
    channel_cache: dict[str, np.ndarray] = {}

    def get_session(sid: str) -> SessionRecording:
        if sid not in session_cache:
            sdir = cfg.data_path / sid
            if not (sdir / "acc.csv").exists():
                raise HTTPException(status_code=404, detail=f"unknown session {sid!r}")
            session_cache[sid] = load_session(sdir)
        return session_cache[sid]

    def get_matrix(sid: str) -> np.ndarray:
        if sid not in channel_cache:
            try:
                channel_cache[sid] = load_channels(cfg, sid).as_matrix()
            except FileNotFoundError:
                raise HTTPException(
                    status_code=404,
                    detail=f"session {sid!r} not preprocessed; run the preprocess stage",
                ) from None
        return channel_cache[sid]

    @app.get("/api/sessions")
    def sessions():
        out = []
        for sid in list_sessions(cfg):
            session = get_session(sid)
            out.append({
                "session_id": sid,
                "subject_id": session.subject_id,
                "round_id": session.round_id,
                "n_samples": len(session.acc),
                "n_draw_markers": sum(1 for m in session.markers if m.kind is MarkerKind.DRAW),
            })
        return out

    @app.get("/api/sessions/{sid}/markers")
    def markers(sid: str):
        session = get_session(sid)
        t, _, _, _ = session.acc_arrays()
        return [
            {"t_ms": m.t_ms, "kind": m.kind.value, "idx": int(np.argmin(np.abs(t - m.t_ms)))}
            for m in session.markers
        ]

    @app.get("/api/sessions/{sid}/slice")
    def waveform_slice(sid: str, draw: int = 0, before: int = SLICE_BEFORE, after: int = SLICE_AFTER,
                       center: int | None = None):
        """Waveform slice around the draw-th Draw marker (or an explicit center)."""
        session = get_session(sid)
        mat = get_matrix(sid)
        if center is None:
            draws = session.draw_marker_indices()
            if not draws:
                raise HTTPException(status_code=404, detail=f"session {sid!r} has no Draw markers")
            if not 0 <= draw < len(draws):
                raise HTTPException(status_code=404,
                                    detail=f"draw index {draw} out of range (0..{len(draws) - 1})")
            center = draws[draw]
        start = max(0, int(center) - before)
        end = min(mat.shape[0], int(center) + after)
        t, _, _, _ = session.acc_arrays()
        in_range = [
            {"t_ms": m.t_ms, "kind": m.kind.value, "idx": int(np.argmin(np.abs(t - m.t_ms)))}
            for m in session.markers
            if start <= np.argmin(np.abs(t - m.t_ms)) < end
        ]
        return {
            "session_id": sid,
            "start": start,
            "end": end,
            "center": int(center),
            "t_ms": [int(v) for v in t[start:end]],
            "channels": {name: [float(v) for v in mat[start:end, k]]
                         for k, name in enumerate(CHANNEL_NAMES)},
            "markers": in_range,
        }

    @app.post("/api/sessions/{sid}/annotations")
    def post_annotation(sid: str, body: AnnotationIn):
        session = get_session(sid)
        try:
            annotation = ShotAnnotation(b1=body.b1, b2=body.b2, b3=body.b3, b4=body.b4)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        if body.b4 > len(session.acc):
            raise HTTPException(
                status_code=422,
                detail=f"b4={body.b4} outside series of length {len(session.acc)}",
            )
        store.add(sid, annotation)
        return {"session_id": sid, "b1": annotation.b1, "b2": annotation.b2,
                "b3": annotation.b3, "b4": annotation.b4}

    @app.get("/api/sessions/{sid}/annotations")
    def get_annotations(sid: str):
        get_session(sid)
        return [{"session_id": sid, "b1": a.b1, "b2": a.b2, "b3": a.b3, "b4": a.b4}
                for a in store.get(sid)]

    @app.get("/api/annotations")
    def export_annotations():
        return store.export()

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def serve(cfg: PipelineConfig, host: str = "127.0.0.1", port: int = 8765,
          static_dir: str | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(cfg, static_dir), host=host, port=port, log_level="warning")
