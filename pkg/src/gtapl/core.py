"""Ground-to-air path-loss equations.

All quantities are logarithmic: powers in dBm, gains and losses in dB,
distances in meters.  Functions accept scalars or numpy arrays where that
is cheap to support; scalars come back as plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError
from .params import (
    FIT_RANGE_M,
    Environment,
    FrequencyBand,
    ModelParams,
    scenario_params,
)

DEFAULT_UAV_HEIGHT_M = 120.0
DEFAULT_TX_HEIGHT_M = 1.7
DEFAULT_TX_POWER_DBM = 40.0


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class LinkGeometry:
    r_2d: float
    h_d: float = DEFAULT_UAV_HEIGHT_M
    h_r: float = DEFAULT_TX_HEIGHT_M

    def __post_init__(self):
        if not self.r_2d >= 0:
            raise GeometryError(f"r_2d must be >= 0, got {self.r_2d}")
        if not self.h_r >= 0:
            raise GeometryError(f"h_r must be >= 0, got {self.h_r}")
        if not self.h_d > self.h_r:
            raise GeometryError(
                f"UAV height h_d={self.h_d} must exceed transmitter height h_r={self.h_r}"
            )

    @property
    def d_3d(self) -> float:
        return math.hypot(self.r_2d, self.h_d - self.h_r)


@dataclass(frozen=True)
class BlockerField:
    """Human-blocker statistics. ``lambda_density`` is in blockers per m^2."""

    lambda_density: float = 0.0
    g_b: float = 0.5
    h_b: float = 1.8

    def __post_init__(self):
        if not self.lambda_density >= 0:
            raise DomainError("lambda_density must be >= 0")
        if not self.g_b >= 0:
            raise DomainError("g_b must be >= 0")
        if not self.h_b > 0:
            raise DomainError("h_b must be > 0")


@dataclass(frozen=True)
class LinkBudget:
    p_t: float
    p_r: float
    g_t: float = 0.0
    g_r: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.p_t, self.p_r, self.g_t, self.g_r)):
            raise DomainError("link budget terms must be finite")


def in_fit_range(d_3d) -> bool:
    """True when every distance lies inside the range the tables were fitted on."""
    d = np.asarray(d_3d, dtype=float)
    return bool(np.all((d >= FIT_RANGE_M[0]) & (d <= FIT_RANGE_M[1])))


def mean_path_loss(params: ModelParams, d_3d):
    d = np.asarray(d_3d, dtype=float)
    if np.any(~(d > 0)):
        raise DomainError("distance must be positive")
    return _out(params.alpha + params.beta * 10.0 * np.log10(d))


def sample_path_loss(params: ModelParams, d_3d, rng: np.random.Generator, size=None):
    """Mean path loss plus Gaussian shadowing drawn from ``rng``."""
    mean = mean_path_loss(params, d_3d)
    if size is None:
        size = np.shape(mean) or None
    zeta = rng.normal(0.0, params.sigma, size=size)
    return _out(mean + zeta)


def path_loss_from_budget(budget: LinkBudget) -> float:
    return math.fsum((budget.p_t, -budget.p_r, budget.g_t, budget.g_r))


def received_power(p_t: float, g_t: float, g_r: float, path_loss: float) -> float:
    return math.fsum((p_t, g_t, g_r, -path_loss))


def _check_heights(h_d, h_r, blockers: BlockerField):
    if not h_d > h_r:
        raise GeometryError(f"UAV height {h_d} must exceed transmitter height {h_r}")
    # an empty field cannot block, whatever the heights
    if blockers.lambda_density > 0 and not h_d > blockers.h_b:
        raise GeometryError(f"UAV height {h_d} must exceed blocker height {blockers.h_b}")


def los_probability_array(r_2d, h_d: float, h_r: float, blockers: BlockerField):
    _check_heights(h_d, h_r, blockers)
    r = np.asarray(r_2d, dtype=float)
    if np.any(~(r >= 0)):
        raise GeometryError("r_2d must be >= 0")
    exponent = -blockers.lambda_density * blockers.g_b * (
        r * (blockers.h_b - h_r) / (h_d - h_r)
    )
    # blockers shorter than the transmitter give a positive exponent
    return _out(np.minimum(np.exp(exponent), 1.0))


def los_probability(geometry: LinkGeometry, blockers: BlockerField) -> float:
    return los_probability_array(geometry.r_2d, geometry.h_d, geometry.h_r, blockers)


def average_path_loss(p_los, pl_los, pl_nlos):
    p = np.asarray(p_los, dtype=float)
    if np.any(~((p >= 0) & (p <= 1))):
        raise DomainError("LOS probability must lie in [0, 1]")
    lo = np.minimum(pl_los, pl_nlos)
    hi = np.maximum(pl_los, pl_nlos)
    # clip only removes rounding overshoot; the exact value is always in [lo, hi]
    return _out(np.clip(p * pl_los + (1.0 - p) * pl_nlos, lo, hi))


@dataclass(frozen=True)
class ScenarioPathLoss:
    mean: float
    p_los: float
    pl_los: float
    pl_nlos: float
    d_3d: float
    extrapolated: bool


def scenario_path_loss(
    environment: Environment,
    band: FrequencyBand,
    geometry: LinkGeometry,
    blockers: BlockerField | None = None,
) -> ScenarioPathLoss:
    """LOS/NLOS-averaged path loss for one link, with every intermediate.

    ``extrapolated`` is set when the 3D distance falls outside the range
    the tables were fitted on.
    """
    blockers = blockers or BlockerField()
    los, nlos = scenario_params(environment, band)
    d = geometry.d_3d
    p = los_probability(geometry, blockers)
    pl_l = mean_path_loss(los, d)
    pl_n = mean_path_loss(nlos, d)
    return ScenarioPathLoss(
        mean=average_path_loss(p, pl_l, pl_n),
        p_los=p,
        pl_los=pl_l,
        pl_nlos=pl_n,
        d_3d=d,
        extrapolated=not in_fit_range(d),
    )
