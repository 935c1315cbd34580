"""Canonical measurement CSV: schema, writer and validating reader.

One row per (tx, point, angle, vehicle state); synthetic and real data use
the same file format so every downstream statistic runs on either.  Angles
are serialized in degrees and gains in dB at full double precision
(shortest round-tripping decimal), so a write/ingest cycle reproduces the
dataset to within one or two floating-point ulps.

Every emitted file starts with a '#' provenance comment (tool version, seed,
input hash) followed by the header row; files are written atomically.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import os
import tempfile
from collections import defaultdict

import numpy as np

from . import __version__
from .angular import AngularScan, Stacking, VehicleState
from .errors import GridError, IngestError

__all__ = [
    "CANONICAL_HEADER",
    "scan_rows",
    "write_scans",
    "ingest",
    "write_table",
    "provenance_line",
    "file_sha256",
]

CANONICAL_FIELDS = (
    "tx_id", "x_m", "y_m", "phi_deg", "gain_db", "vehicle_state", "stacking",
)
CANONICAL_HEADER = ",".join(CANONICAL_FIELDS)

_VEHICLE_TOKENS = {v.value for v in VehicleState}
_STACKING_TOKENS = {s.value for s in Stacking}


def provenance_line(seed=None, input_hash=None) -> str:
    seed_txt = "na" if seed is None else str(seed)
    hash_txt = "na" if input_hash is None else input_hash
    return f"# portcanyon {__version__}; seed={seed_txt}; input_sha256={hash_txt}"


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _atomic_write_text(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value: float) -> str:
    return repr(float(value))


def scan_rows(scan: AngularScan):
    """Yield canonical CSV rows (tuples of strings) for one scan."""
    phi_deg = np.degrees(scan.angles)
    gain_db = 10.0 * np.log10(scan.gains)
    for phi, gain in zip(phi_deg, gain_db):
        yield (
            scan.tx,
            _fmt(scan.x),
            _fmt(scan.y),
            _fmt(phi),
            _fmt(gain),
            scan.vehicle_state.value,
            scan.stacking.value,
        )


def write_scans(path, scans, seed=None, input_hash=None) -> None:
    """Write scans to the canonical CSV, atomically and deterministically."""
    buf = io.StringIO()
    buf.write(provenance_line(seed=seed, input_hash=input_hash) + "\n")
    buf.write(CANONICAL_HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    for scan in scans:
        writer.writerows(scan_rows(scan))
    _atomic_write_text(path, buf.getvalue())


def _parse_float(token: str, column: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise IngestError(f"line {line_no}: {column} is not a number: {token!r}")
    if not math.isfinite(value):
        raise IngestError(f"line {line_no}: {column} must be finite, got {token!r}")
    return value


def ingest(path) -> list[AngularScan]:
    """Read and validate a canonical measurement CSV into scans.

    Rows are grouped by (tx, x, y, vehicle state, stacking) and sorted by
    angle; duplicate angles within a group and malformed rows are rejected
    with their line number, and each group's grid must be uniform over one
    full rotation.
    """
    groups: dict[tuple, dict[float, float]] = defaultdict(dict)
    order: list[tuple] = []

    with open(path, "r", encoding="utf-8", newline="") as fh:
        line_no = 0
        header_seen = False
        for row in csv.reader(fh):
            line_no += 1
            if not row:
                continue
            if row[0].startswith("#"):
                continue
            if not header_seen:
                if row != list(CANONICAL_FIELDS):
                    raise IngestError(
                        f"line {line_no}: header must be exactly {CANONICAL_HEADER!r}"
                    )
                header_seen = True
                continue
            if len(row) != len(CANONICAL_FIELDS):
                raise IngestError(
                    f"line {line_no}: expected {len(CANONICAL_FIELDS)} columns, got {len(row)}"
                )
            tx_id, x_s, y_s, phi_s, gain_s, vehicle_s, stacking_s = row
            if not tx_id:
                raise IngestError(f"line {line_no}: empty tx_id")
            x = _parse_float(x_s, "x_m", line_no)
            y = _parse_float(y_s, "y_m", line_no)
            phi = _parse_float(phi_s, "phi_deg", line_no)
            gain = _parse_float(gain_s, "gain_db", line_no)
            if vehicle_s not in _VEHICLE_TOKENS:
                raise IngestError(f"line {line_no}: unknown vehicle_state {vehicle_s!r}")
            if stacking_s not in _STACKING_TOKENS:
                raise IngestError(f"line {line_no}: unknown stacking {stacking_s!r}")
            key = (tx_id, x, y, vehicle_s, stacking_s)
            if key not in groups:
                order.append(key)
            if phi in groups[key]:
                raise IngestError(
                    f"line {line_no}: duplicate angle {phi} deg for scan {key}"
                )
            groups[key][phi] = gain

    if not header_seen:
        raise IngestError("file has no header row")
    if not order:
        raise IngestError("file contains no measurement rows")

    scans = []
    for key in order:
        tx_id, x, y, vehicle_s, stacking_s = key
        by_angle = groups[key]
        phis = np.array(sorted(by_angle))
        gains_db = np.array([by_angle[p] for p in phis])
        try:
            scan = AngularScan(
                tx=tx_id,
                x=x,
                y=y,
                angles=np.radians(phis),
                gains=10.0 ** (gains_db / 10.0),
                vehicle_state=VehicleState(vehicle_s),
                stacking=Stacking(stacking_s),
            )
        except GridError as exc:
            raise GridError(f"scan {key}: {exc}") from exc
        scans.append(scan)
    return scans


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return _fmt(value)


def write_table(path, columns, rows, seed=None, input_hash=None) -> None:
    """Write a plot-ready CSV table with the provenance comment and header."""
    buf = io.StringIO()
    buf.write(provenance_line(seed=seed, input_hash=input_hash) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(c) for c in row])
    _atomic_write_text(path, buf.getvalue())
