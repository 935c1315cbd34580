"""Spatial autocorrelation of fixed-beam channel gain along a dense RX line.

Gains are correlated in the dB domain, since that is the scale link
adaptation and beam refinement react to.  Each line is a set of scans at
uniformly spaced positions along the canyon (nominally 15 points, 0.1 m
apart); the per-line, per-angle autocorrelation is the lagged autocovariance
of the zero-mean dB gain sequence, normalized by its lag-0 value so it
starts at 1 and stays within [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import GRID_MATCH_TOL, AngularScan, to_db
from .errors import DomainError, GridError, PairingError

__all__ = [
    "DenseLine",
    "AutocorrResult",
    "line_mean",
    "zero_mean",
    "autocorrelation",
    "averaged_correlation",
]

POSITION_SPACING_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DenseLine:
    """Uniformly spaced X positions with one scan per position.

    All scans must share tx, y, vehicle state, stacking and angle grid;
    positions must be strictly increasing with uniform spacing.
    """

    positions: np.ndarray
    scans: tuple[AngularScan, ...]

    def __post_init__(self) -> None:
        positions = np.asarray(self.positions, dtype=float)
        scans = tuple(self.scans)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "scans", scans)
        if positions.ndim != 1 or positions.size < 2:
            raise DomainError("a dense line needs at least 2 positions")
        if len(scans) != positions.size:
            raise DomainError(
                f"{positions.size} positions but {len(scans)} scans"
            )
        steps = np.diff(positions)
        if not np.all(steps > 0.0):
            raise DomainError("positions must be strictly increasing")
        if np.max(np.abs(steps - steps[0])) > POSITION_SPACING_TOL:
            raise DomainError("positions must be uniformly spaced")
        for pos, scan in zip(positions, scans):
            if abs(scan.x - pos) > POSITION_SPACING_TOL:
                raise DomainError(
                    f"scan at x={scan.x} assigned to line position {pos}"
                )
        ref = scans[0]
        for scan in scans[1:]:
            if (scan.tx, scan.y, scan.vehicle_state, scan.stacking) != (
                ref.tx, ref.y, ref.vehicle_state, ref.stacking,
            ):
                raise PairingError(
                    f"scan {scan.key} does not belong to the line of {ref.key}"
                )
            if scan.angles.size != ref.angles.size or np.max(
                np.abs(scan.angles - ref.angles)
            ) > GRID_MATCH_TOL:
                raise GridError("scans on a dense line must share one angle grid")

    @property
    def spacing_m(self) -> float:
        return float(self.positions[1] - self.positions[0])

    @property
    def angles(self) -> np.ndarray:
        return self.scans[0].angles

    def gains_db(self, phi: float) -> np.ndarray:
        """Per-position dB gain at grid angle phi (off-grid -> GridError)."""
        idx = _grid_index(self.angles, phi)
        return np.array([to_db(scan.gains[idx]) for scan in self.scans])


def _grid_index(angles: np.ndarray, phi: float) -> int:
    hits = np.nonzero(np.abs(angles - phi) <= GRID_MATCH_TOL)[0]
    if hits.size != 1:
        raise GridError(f"angle {phi} rad is not on the scan grid")
    return int(hits[0])


@dataclass(frozen=True, eq=False)
class AutocorrResult:
    """Normalized per-lag autocorrelation; degenerate marks a zero-variance line."""

    values: np.ndarray
    degenerate: bool = False


def line_mean(line: DenseLine, phi: float) -> float:
    """Mean dB gain over the line's positions at one grid angle."""
    return float(np.mean(line.gains_db(phi)))


def zero_mean(line: DenseLine, phi: float) -> np.ndarray:
    """Per-position dB gain minus the line mean; sums to 0."""
    db = line.gains_db(phi)
    return db - np.mean(db)


def autocorrelation(line: DenseLine, phi: float) -> AutocorrResult:
    """Normalized lagged autocovariance of the zero-mean dB gains.

    r[k] = sum_j z[j] * z[j+k] normalized by r[0], for lags k = 0..N-1, so
    r[0] = 1 and |r[k]| <= 1.  A constant line has zero variance; it is
    returned as r = [1, 0, ..., 0] with the degenerate flag set.
    """
    z = zero_mean(line, phi)
    raw = np.correlate(z, z, mode="full")[z.size - 1:]
    if raw[0] == 0.0:
        values = np.zeros(z.size)
        values[0] = 1.0
        return AutocorrResult(values=values, degenerate=True)
    return AutocorrResult(values=raw / raw[0], degenerate=False)


def averaged_correlation(lines) -> tuple[np.ndarray, np.ndarray]:
    """Autocorrelation averaged over all grid angles and all lines.

    Every line contributes the mean of its per-angle normalized curves
    (rectangle rule over the uniform angle grid); lines are then averaged
    with equal weight.  Both reductions are plain means, so the order does
    not matter.

    Returns:
        (lag_m, correlation): lag axis in metres and the averaged curve.
    """
    lines = list(lines)
    if not lines:
        raise DomainError("averaged_correlation needs at least one line")
    n_pos = lines[0].positions.size
    spacing = lines[0].spacing_m
    for line in lines[1:]:
        if line.positions.size != n_pos or abs(line.spacing_m - spacing) > POSITION_SPACING_TOL:
            raise DomainError("all lines must share position count and spacing")

    per_line = np.empty((len(lines), n_pos))
    for i, line in enumerate(lines):
        curves = np.stack(
            [autocorrelation(line, phi).values for phi in line.angles]
        )
        per_line[i] = curves.mean(axis=0)
    return spacing * np.arange(n_pos), per_line.mean(axis=0)
