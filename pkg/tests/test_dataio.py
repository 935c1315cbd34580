"""Canonical CSV: round-trips, validation errors with line numbers."""

import numpy as np
import pytest

from portcanyon.angular import AngularScan
from portcanyon.dataio import (
    CANONICAL_HEADER,
    file_sha256,
    ingest,
    provenance_line,
    write_scans,
    write_table,
)
from portcanyon.errors import GridError, IngestError
from portcanyon.synth import SynthConfig, build_layout, generate_campaign

GRID = np.radians(360.0 * np.arange(12) / 12)


def make_scan(seed=0, **kwargs):
    rng = np.random.default_rng(seed)
    defaults = dict(
        tx="TX1_63", x=5.0, y=3.5, angles=GRID,
        gains=rng.lognormal(-14.0, 1.0, GRID.size),
    )
    defaults.update(kwargs)
    return AngularScan(**defaults)


def write_csv(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestWriter:
    def test_layout_of_written_file(self, tmp_path):
        path = tmp_path / "scan.csv"
        write_scans(path, [make_scan()], seed=7)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# portcanyon ")
        assert "seed=7" in lines[0]
        assert lines[1] == CANONICAL_HEADER
        assert len(lines) == 2 + GRID.size

    def test_single_360_row_scan(self, tmp_path):
        angles = np.radians(np.arange(360.0))
        rng = np.random.default_rng(1)
        scan = AngularScan(
            tx="TX2", x=1.0, y=3.5, angles=angles,
            gains=rng.lognormal(-14, 1, 360),
        )
        path = tmp_path / "one.csv"
        write_scans(path, [scan])
        back = ingest(path)
        assert len(back) == 1
        assert back[0].angles.size == 360

    def test_deterministic_bytes(self, tmp_path):
        scans = [make_scan(), make_scan(seed=1, x=9.0)]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_scans(a, scans, seed=3)
        write_scans(b, scans, seed=3)
        assert a.read_bytes() == b.read_bytes()
        assert file_sha256(a) == file_sha256(b)


class TestRoundTrip:
    def test_scan_round_trip_precision(self, tmp_path):
        scans = [make_scan(seed=s, x=float(s)) for s in range(1, 4)]
        path = tmp_path / "rt.csv"
        write_scans(path, scans)
        back = ingest(path)
        assert len(back) == len(scans)
        for orig, rec in zip(scans, back):
            assert rec.key == orig.key
            assert np.allclose(rec.angles, orig.angles, atol=1e-12)
            assert np.allclose(rec.gains, orig.gains, rtol=1e-12)

    def test_campaign_round_trip(self, tmp_path):
        layout = build_layout("nonuniform")
        cfg = SynthConfig(seed=5, n_angles=24)
        scans = generate_campaign(layout, cfg, vehicle_mode="dense")
        path = tmp_path / "campaign.csv"
        write_scans(path, scans, seed=cfg.seed)
        back = ingest(path)
        assert [s.key for s in back] == [s.key for s in scans]
        for orig, rec in zip(scans, back):
            assert np.allclose(rec.gains, orig.gains, rtol=1e-12)


class TestIngestValidation:
    def header(self):
        return [provenance_line(), CANONICAL_HEADER]

    def rows_for(self, n=12, tx="TX2", x="1.0", y="3.5"):
        return [
            f"{tx},{x},{y},{k * 360.0 / n},-60.0,absent,uniform" for k in range(n)
        ]

    def test_minimal_valid_file(self, tmp_path):
        path = tmp_path / "ok.csv"
        write_csv(path, self.header() + self.rows_for())
        scans = ingest(path)
        assert len(scans) == 1
        assert scans[0].tx == "TX2"

    def test_missing_header(self, tmp_path):
        path = tmp_path / "nohdr.csv"
        write_csv(path, self.rows_for())
        with pytest.raises(IngestError, match="header"):
            ingest(path)

    def test_wrong_column_count_reports_line(self, tmp_path):
        rows = self.rows_for()
        rows[3] = "TX2,1.0,3.5,90.0,-60.0,absent"
        path = tmp_path / "cols.csv"
        write_csv(path, self.header() + rows)
        with pytest.raises(IngestError, match="line 6"):
            ingest(path)

    def test_bad_number_reports_line(self, tmp_path):
        rows = self.rows_for()
        rows[0] = "TX2,1.0,3.5,zero,-60.0,absent,uniform"
        path = tmp_path / "num.csv"
        write_csv(path, self.header() + rows)
        with pytest.raises(IngestError, match="line 3.*phi_deg"):
            ingest(path)

    def test_non_finite_gain_rejected(self, tmp_path):
        rows = self.rows_for()
        rows[2] = "TX2,1.0,3.5,60.0,nan,absent,uniform"
        path = tmp_path / "nan.csv"
        write_csv(path, self.header() + rows)
        with pytest.raises(IngestError, match="finite"):
            ingest(path)

    def test_duplicate_angle_reports_line(self, tmp_path):
        rows = self.rows_for() + ["TX2,1.0,3.5,0.0,-58.0,absent,uniform"]
        path = tmp_path / "dup.csv"
        write_csv(path, self.header() + rows)
        with pytest.raises(IngestError, match=f"line {2 + 13}.*duplicate"):
            ingest(path)

    def test_unknown_tokens_rejected(self, tmp_path):
        rows = self.rows_for()
        rows[1] = "TX2,1.0,3.5,30.0,-60.0,parked,uniform"
        path = tmp_path / "tok.csv"
        write_csv(path, self.header() + rows)
        with pytest.raises(IngestError, match="vehicle_state"):
            ingest(path)
        rows = self.rows_for()
        rows[1] = "TX2,1.0,3.5,30.0,-60.0,absent,stacked"
        write_csv(path, self.header() + rows)
        with pytest.raises(IngestError, match="stacking"):
            ingest(path)

    def test_non_uniform_grid_names_scan_key(self, tmp_path):
        rows = self.rows_for()
        rows[5] = "TX2,1.0,3.5,151.0,-60.0,absent,uniform"
        path = tmp_path / "grid.csv"
        write_csv(path, self.header() + rows)
        with pytest.raises(GridError, match="TX2"):
            ingest(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_csv(path, self.header())
        with pytest.raises(IngestError, match="no measurement rows"):
            ingest(path)


def test_write_table_format(tmp_path):
    path = tmp_path / "table.csv"
    write_table(
        path, ("a", "b", "count"), [(1.5, "x", 3), (2.5, "y", 4)], input_hash="ff"
    )
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#") and "input_sha256=ff" in lines[0]
    assert lines[1] == "a,b,count"
    assert lines[2] == "1.5,x,3"
