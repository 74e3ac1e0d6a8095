import pytest

from archsense.ingest import (
    load_annotations,
    load_session,
    save_annotations,
    write_session,
)
from archsense.synth import SynthConfig, gen_session
from archsense.types import ShotAnnotation


@pytest.fixture()
def session_dir(tmp_path):
    session, _, _ = gen_session(SynthConfig(n_shots=2, seed=17), round_id="r17")
    d = tmp_path / "r17"
    write_session(session, d)
    return d, session


class TestRoundTrip:
    def test_lossless(self, session_dir):
        d, session = session_dir
        loaded = load_session(d)
        assert loaded.subject_id == session.subject_id
        assert loaded.round_id == session.round_id
        assert loaded.stress_report == session.stress_report
        assert loaded.acc == session.acc
        assert loaded.ppg == session.ppg
        assert loaded.markers == session.markers

    def test_annotation_store_round_trip(self, tmp_path):
        path = tmp_path / "annotations.json"
        anns = {"r1": [ShotAnnotation(1, 2, 3, 4), ShotAnnotation(10, 20, 30, 40)],
                "r2": [ShotAnnotation(5, 6, 7, 8)]}
        save_annotations(path, anns)
        assert load_annotations(path) == anns


class TestErrors:
    def test_missing_file(self, session_dir):
        d, _ = session_dir
        (d / "ppg.csv").unlink()
        with pytest.raises(FileNotFoundError, match="ppg.csv"):
            load_session(d)

    def test_unknown_marker_kind_names_line(self, session_dir):
        d, _ = session_dir
        lines = (d / "markers.csv").read_text().splitlines()
        lines[2] = lines[2].rsplit(",", 1)[0] + ",Drow"
        (d / "markers.csv").write_text("\n".join(lines) + "\n")
        with pytest.raises(ValueError, match=r"markers.csv line 3.*Drow"):
            load_session(d)

    def test_decreasing_timestamp_rejected(self, session_dir):
        d, _ = session_dir
        lines = (d / "acc.csv").read_text().splitlines()
        first_data = lines[1].split(",")
        lines.insert(2, ",".join([first_data[0]] + first_data[1:]))
        (d / "acc.csv").write_text("\n".join(lines) + "\n")
        with pytest.raises(ValueError, match="increasing"):
            load_session(d)

    def test_bad_number_names_line(self, session_dir):
        d, _ = session_dir
        lines = (d / "acc.csv").read_text().splitlines()
        lines[5] = lines[5].rsplit(",", 1)[0] + ",abc"
        (d / "acc.csv").write_text("\n".join(lines) + "\n")
        with pytest.raises(ValueError, match="line 6"):
            load_session(d)

    def test_missing_header(self, session_dir):
        d, _ = session_dir
        lines = (d / "ppg.csv").read_text().splitlines()
        (d / "ppg.csv").write_text("\n".join(lines[1:]) + "\n")
        with pytest.raises(ValueError, match="header"):
            load_session(d)

    def test_missing_meta_key(self, session_dir):
        d, _ = session_dir
        (d / "meta.txt").write_text("subject_id: x\n")
        with pytest.raises(ValueError, match="round_id"):
            load_session(d)
