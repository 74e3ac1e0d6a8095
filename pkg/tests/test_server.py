import pytest
from fastapi.testclient import TestClient

from archsense import pipeline
from archsense.config import PipelineConfig
from archsense.server import create_app


@pytest.fixture(scope="module")
def server_cfg(tmp_path_factory):
    root = tmp_path_factory.mktemp("srv")
    cfg = PipelineConfig(
        data_dir=str(root / "data"),
        work_dir=str(root / "work"),
        model_dir=str(root / "models"),
        out_dir=str(root / "out"),
    )
    pipeline.stage_synth(cfg, n_sessions=2, n_shots=3)
    pipeline.stage_preprocess(cfg)
    return cfg


@pytest.fixture(scope="module")
def client(server_cfg):
    return TestClient(create_app(server_cfg))


class TestSessions:
    def test_list(self, client):
        sessions = client.get("/api/sessions").json()
        assert len(sessions) == 2
        assert sessions[0]["session_id"] == "synth-0000"
        assert sessions[0]["n_draw_markers"] == 3

    def test_unknown_session_404(self, client):
        r = client.get("/api/sessions/nope/slice")
        assert r.status_code == 404


class TestSlice:
    def test_default_window_geometry(self, client):
        r = client.get("/api/sessions/synth-0000/slice", params={"draw": 1})
        assert r.status_code == 200
        payload = r.json()
        assert payload["end"] - payload["start"] == 450
        assert len(payload["t_ms"]) == 450
        for name in ("ax", "ay", "az", "total", "smooth_diff"):
            assert len(payload["channels"][name]) == 450
        # window is [center-150, center+300)
        assert payload["center"] - payload["start"] == 150
        assert payload["end"] - payload["center"] == 300

    def test_markers_inside_slice(self, client):
        payload = client.get("/api/sessions/synth-0000/slice", params={"draw": 0}).json()
        kinds = [m["kind"] for m in payload["markers"]]
        assert "Draw" in kinds
        for m in payload["markers"]:
            assert payload["start"] <= m["idx"] < payload["end"]

    def test_out_of_range_draw_404(self, client):
        assert client.get("/api/sessions/synth-0000/slice", params={"draw": 99}).status_code == 404

    def test_clamped_at_recording_start(self, client):
        payload = client.get("/api/sessions/synth-0000/slice", params={"center": 10}).json()
        assert payload["start"] == 0


class TestAnnotations:
    def test_post_get_round_trip(self, client):
        body = {"b1": 10, "b2": 40, "b3": 100, "b4": 115}
        r = client.post("/api/sessions/synth-0000/annotations", json=body)
        assert r.status_code == 200
        stored = client.get("/api/sessions/synth-0000/annotations").json()
        assert {k: stored[-1][k] for k in body} == body

    def test_out_of_order_422_names_invariant(self, client):
        r = client.post("/api/sessions/synth-0000/annotations",
                        json={"b1": 40, "b2": 10, "b3": 100, "b4": 115})
        assert r.status_code == 422
        assert "b1 < b2 < b3 < b4" in r.json()["detail"]

    def test_out_of_bounds_422(self, client):
        r = client.post("/api/sessions/synth-0000/annotations",
                        json={"b1": 10, "b2": 40, "b3": 100, "b4": 10_000_000})
        assert r.status_code == 422
        assert "length" in r.json()["detail"]

    def test_unknown_session_404(self, client):
        r = client.post("/api/sessions/ghost/annotations",
                        json={"b1": 1, "b2": 2, "b3": 3, "b4": 4})
        assert r.status_code == 404

    def test_export_all(self, client):
        client.post("/api/sessions/synth-0001/annotations",
                    json={"b1": 5, "b2": 6, "b3": 7, "b4": 8})
        exported = client.get("/api/annotations").json()
        sids = {e["session_id"] for e in exported}
        assert {"synth-0000", "synth-0001"} <= sids

    def test_store_is_the_pipeline_input(self, client, server_cfg):
        # Annotations posted through the API land in the same store file the
        # dataset builder reads.
        from archsense.ingest import load_annotations

        store = load_annotations(server_cfg.work_path / "annotations.json")
        posted = client.get("/api/sessions/synth-0000/annotations").json()
        assert len(store["synth-0000"]) == len(posted)
