"""Small shared statistics helpers: empirical CDFs and Gaussian CDF."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import InsufficientDataError

__all__ = ["EmpiricalCdf", "empirical_cdf", "gaussian_cdf", "ks_gap"]


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """Right-continuous empirical CDF: P(X <= values[i]) = probs[i]."""

    values: np.ndarray  # sorted ascending
    probs: np.ndarray   # k/n for k = 1..n

    @property
    def n(self) -> int:
        return len(self.values)

    def quantile(self, p: float) -> float:
        """Smallest sample value whose CDF reaches p (0 < p <= 1)."""
        if not 0.0 < p <= 1.0:
            raise ValueError(f"p must be in (0, 1], got {p}")
        idx = int(np.searchsorted(self.probs, p, side="left"))
        return float(self.values[min(idx, self.n - 1)])

    def median(self) -> float:
        return self.quantile(0.5)


def empirical_cdf(samples) -> EmpiricalCdf:
    """Build the empirical CDF of a 1-D sample."""
    values = np.sort(np.asarray(samples, dtype=float).ravel())
    if values.size == 0:
        raise InsufficientDataError("empirical CDF needs at least one sample")
    probs = np.arange(1, values.size + 1, dtype=float) / values.size
    return EmpiricalCdf(values=values, probs=probs)


def gaussian_cdf(x, mu: float, sigma: float):
    """Normal CDF; degenerates to a unit step at mu when sigma == 0."""
    x = np.asarray(x, dtype=float)
    if sigma == 0.0:
        return (x >= mu).astype(float)
    z = (x - mu) / (sigma * math.sqrt(2.0))
    return 0.5 * (1.0 + special.erf(z))


def ks_gap(samples, mu: float, sigma: float) -> float:
    """Kolmogorov sup-gap between a sample's empirical CDF and N(mu, sigma^2).

    Evaluates both one-sided gaps at every sample point, which attains the
    supremum for a continuous reference CDF.
    """
    values = np.sort(np.asarray(samples, dtype=float).ravel())
    n = values.size
    if n == 0:
        raise InsufficientDataError("KS gap needs at least one sample")
    ref = gaussian_cdf(values, mu, sigma)
    upper = np.arange(1, n + 1) / n - ref
    lower = ref - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))
