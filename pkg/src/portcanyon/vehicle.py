"""Statistics of the channel-gain change caused by a vehicle in the canyon.

Purely statistical: per-angle dB differences between a baseline scan and the
matching scan with the vehicle present, a Gaussian fit of the pooled
differences, and an empirical-vs-fitted CDF comparison.  No scattering model
of the vehicle is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import GRID_MATCH_TOL, AngularScan, VehicleState, to_db
from .errors import DomainError, GridError, InsufficientDataError, PairingError
from .stats import gaussian_cdf, ks_gap

__all__ = [
    "GaussianFitResult",
    "DeltaCdfReport",
    "vehicle_delta",
    "fit_gaussian",
    "delta_cdf_report",
    "delta_angle_stats",
]


@dataclass(frozen=True)
class GaussianFitResult:
    """Maximum-likelihood Gaussian parameters (population sigma, 1/N)."""

    mu_db: float
    sigma_db: float
    sample_count: int

    def __post_init__(self) -> None:
        if self.sigma_db < 0.0:
            raise DomainError(f"sigma must be >= 0, got {self.sigma_db}")


@dataclass(frozen=True, eq=False)
class DeltaCdfReport:
    """Empirical and fitted-Gaussian CDFs of pooled gain differences.

    Both CDFs are tabulated on the sorted sample values; sup_gap is the
    Kolmogorov distance between them (vertical, in probability).
    """

    values_db: np.ndarray
    empirical: np.ndarray
    gaussian: np.ndarray
    sup_gap: float
    fit: GaussianFitResult


def vehicle_delta(base: AngularScan, with_vehicle: AngularScan) -> np.ndarray:
    """Per-angle gain difference baseline minus vehicle, in dB.

    The two scans must describe the same link: same tx and RX position and
    the same angle grid; the baseline must have no vehicle and the other
    scan must have one.
    """
    if base.vehicle_state is not VehicleState.ABSENT:
        raise PairingError(f"baseline scan has vehicle_state={base.vehicle_state.value}")
    if with_vehicle.vehicle_state is VehicleState.ABSENT:
        raise PairingError("second scan must have a vehicle present")
    if (base.tx, base.x, base.y, base.stacking) != (
        with_vehicle.tx, with_vehicle.x, with_vehicle.y, with_vehicle.stacking,
    ):
        raise PairingError(
            f"scans describe different links: {base.key} vs {with_vehicle.key}"
        )
    if base.angles.size != with_vehicle.angles.size or np.max(
        np.abs(base.angles - with_vehicle.angles)
    ) > GRID_MATCH_TOL:
        raise GridError("paired scans must share one angle grid")
    return to_db(base.gains) - to_db(with_vehicle.gains)


def fit_gaussian(samples) -> GaussianFitResult:
    """ML Gaussian fit of dB samples: mean and population (1/N) std deviation."""
    arr = np.asarray(samples, dtype=float).ravel()
    if arr.size < 2:
        raise InsufficientDataError(
            f"Gaussian fit needs at least 2 samples, got {arr.size}"
        )
    return GaussianFitResult(
        mu_db=float(np.mean(arr)),
        sigma_db=float(np.std(arr)),
        sample_count=int(arr.size),
    )


def delta_angle_stats(delta_matrix, db_bin_width: float = 1.0):
    """Per-angle mean and histogram of a (n_pairs, n_angles) delta matrix.

    Deltas are already in dB, so the mean is a plain arithmetic mean per
    angle; histogram edges are aligned to multiples of the bin width.

    Returns:
        (mean_db, bin_edges_db, counts) with counts shaped (n_angles, n_bins).
    """
    matrix = np.atleast_2d(np.asarray(delta_matrix, dtype=float))
    if db_bin_width <= 0.0:
        raise DomainError(f"bin width must be > 0, got {db_bin_width}")
    mean_db = matrix.mean(axis=0)
    lo = np.floor(matrix.min() / db_bin_width) * db_bin_width
    hi = np.ceil(matrix.max() / db_bin_width) * db_bin_width
    if hi <= lo:
        hi = lo + db_bin_width
    n_bins = int(round((hi - lo) / db_bin_width))
    edges = lo + db_bin_width * np.arange(n_bins + 1)
    counts = np.empty((matrix.shape[1], n_bins), dtype=int)
    for i in range(matrix.shape[1]):
        counts[i], _ = np.histogram(matrix[:, i], bins=edges)
    return mean_db, edges, counts


def delta_cdf_report(deltas) -> DeltaCdfReport:
    """Fit a Gaussian to pooled deltas and compare CDFs.

    Returns both CDFs on the sorted sample grid plus the sup (Kolmogorov)
    gap; a small gap says the vehicle effect is well described as additive
    Gaussian dB noise.
    """
    arr = np.sort(np.asarray(deltas, dtype=float).ravel())
    fit = fit_gaussian(arr)
    empirical = np.arange(1, arr.size + 1, dtype=float) / arr.size
    gaussian = gaussian_cdf(arr, fit.mu_db, fit.sigma_db)
    gap = ks_gap(arr, fit.mu_db, fit.sigma_db)
    return DeltaCdfReport(
        values_db=arr,
        empirical=empirical,
        gaussian=np.asarray(gaussian, dtype=float),
        sup_gap=gap,
        fit=fit,
    )
