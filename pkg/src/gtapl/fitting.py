"""Least-squares recovery of log-distance parameters from scatter data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError, PartialDataError, RankDeficiencyError
from .params import LinkType, ModelParams


@dataclass(frozen=True)
class MeasurementSample:
    distance_m: float
    path_loss_db: float
    link: LinkType

    def __post_init__(self):
        if not self.distance_m > 0:
            raise DomainError(f"distance must be positive, got {self.distance_m}")
        if not math.isfinite(self.path_loss_db):
            raise DomainError("path loss must be finite")


@dataclass(frozen=True)
class FitResult:
    params: ModelParams
    n_samples: int
    residual_rms_db: float
    distance_range: tuple[float, float]


def fit_arrays(distance_m, path_loss_db) -> FitResult:
    """OLS of path loss against ``10*log10(d)``.

    Uses mean-centred normal equations; the shadowing variance is the mean
    squared residual (divisor n).
    """
    d = np.asarray(distance_m, dtype=float)
    y = np.asarray(path_loss_db, dtype=float)
    if d.shape != y.shape or d.ndim != 1:
        raise ValueError("distance and path loss must be 1-D arrays of equal length")
    n = d.size
    if n < 2:
        raise InsufficientDataError(f"need at least 2 samples, got {n}")
    if np.any(~(d > 0)):
        raise DomainError("distances must be positive")

    x = 10.0 * np.log10(d)
    x_mean = x.mean()
    y_mean = y.mean()
    dx = x - x_mean
    sxx = np.dot(dx, dx)
    if sxx == 0.0:
        raise RankDeficiencyError("all distances are identical; slope is undetermined")
    beta = np.dot(dx, y - y_mean) / sxx
    alpha = y_mean - beta * x_mean
    resid = y - (alpha + beta * x)
    sigma_sq = float(np.dot(resid, resid) / n)
    return FitResult(
        params=ModelParams(float(alpha), float(beta), sigma_sq),
        n_samples=n,
        residual_rms_db=math.sqrt(sigma_sq),
        distance_range=(float(d.min()), float(d.max())),
    )


def fit_log_distance(samples: Iterable[MeasurementSample], link: LinkType) -> FitResult:
    chosen = [s for s in samples if s.link is link]
    if len(chosen) < 2:
        raise InsufficientDataError(
            f"need at least 2 {link.value} samples, got {len(chosen)}"
        )
    return fit_arrays(
        [s.distance_m for s in chosen], [s.path_loss_db for s in chosen]
    )


def fit_scenario(samples: Sequence[MeasurementSample]) -> tuple[FitResult, FitResult]:
    """Fit LOS and NLOS samples separately; returns ``(los, nlos)``."""
    samples = list(samples)
    present = {s.link for s in samples}
    for link in (LinkType.LOS, LinkType.NLOS):
        if link not in present:
            raise PartialDataError(link)
    return fit_log_distance(samples, LinkType.LOS), fit_log_distance(samples, LinkType.NLOS)


def fit_report(
    results: tuple[FitResult, FitResult],
    reference: tuple[ModelParams, ModelParams] | None = None,
) -> str:
    """Render fitted ``(los, nlos)`` triples, optionally against reference values."""
    header = ["link", "param", "fitted"]
    if reference is not None:
        header += ["reference", "abs_dev"]
    rows = [header]
    for i, (link, fit) in enumerate(zip((LinkType.LOS, LinkType.NLOS), results)):
        for name in ("alpha", "beta", "sigma_sq"):
            value = getattr(fit.params, name)
            row = [link.value, name, f"{value:.2f}"]
            if reference is not None:
                ref = getattr(reference[i], name)
                row += [f"{ref:.2f}", f"{abs(value - ref):.2f}"]
            rows.append(row)
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in rows]
    for link, fit in zip((LinkType.LOS, LinkType.NLOS), results):
        lo, hi = fit.distance_range
        lines.append(
            f"{link.value}: n={fit.n_samples} rms={fit.residual_rms_db:.2f} dB "
            f"d=[{lo:.1f}, {hi:.1f}] m"
        )
    return "\n".join(lines)
