"""Path-loss rasters and Monte Carlo outage maps for a UAV above a ground grid."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import core
from .errors import DomainError, GeometryError
from .params import Environment, FrequencyBand, ModelParams, scenario_params

MEAN = "mean_path_loss_db"
OUTAGE = "outage_probability"


@dataclass(frozen=True)
class GridSpec:
    x_min: float = -350.0
    x_max: float = 350.0
    y_min: float = -350.0
    y_max: float = 350.0
    cell_size: float = 10.0
    uav_position: tuple[float, float, float] = (0.0, 0.0, core.DEFAULT_UAV_HEIGHT_M)
    h_r: float = core.DEFAULT_TX_HEIGHT_M

    def __post_init__(self):
        object.__setattr__(self, "uav_position", tuple(float(v) for v in self.uav_position))
        if len(self.uav_position) != 3:
            raise DomainError("uav_position must be (x, y, h_d)")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise DomainError("grid extent must be non-empty")
        if not self.cell_size > 0:
            raise DomainError("cell_size must be > 0")
        if not self.h_r >= 0:
            raise GeometryError("h_r must be >= 0")
        if not self.uav_position[2] > self.h_r:
            raise GeometryError("UAV height must exceed transmitter height")

    @property
    def h_d(self) -> float:
        return self.uav_position[2]

    @property
    def shape(self) -> tuple[int, int]:
        """``(ny, nx)``; rows run along y."""
        return _count(self.y_min, self.y_max, self.cell_size), _count(
            self.x_min, self.x_max, self.cell_size
        )

    @property
    def n_cells(self) -> int:
        ny, nx = self.shape
        return ny * nx

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-centre coordinates as two ``(ny, nx)`` arrays."""
        ny, nx = self.shape
        xs = self.x_min + (np.arange(nx) + 0.5) * self.cell_size
        ys = self.y_min + (np.arange(ny) + 0.5) * self.cell_size
        return np.meshgrid(xs, ys)

    def horizontal_distance(self) -> np.ndarray:
        x, y = self.centers()
        return np.hypot(x - self.uav_position[0], y - self.uav_position[1])


def _count(lo: float, hi: float, step: float) -> int:
    # guard against 1000/10 landing on 100.00000000000001
    return max(1, math.ceil((hi - lo) / step - 1e-9))


@dataclass(frozen=True)
class OutageSpec:
    max_path_loss_db: float = 130.0
    n_trials: int = 1000
    seed: int = 0

    def __post_init__(self):
        if int(self.n_trials) != self.n_trials or self.n_trials < 1:
            raise DomainError("n_trials must be a positive integer")
        if not math.isfinite(self.max_path_loss_db):
            raise DomainError("max_path_loss_db must be finite")


@dataclass(frozen=True, eq=False)
class RasterLayer:
    grid: GridSpec
    values: np.ndarray
    statistic: str

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise DomainError(
                f"raster shape {self.values.shape} does not match grid {self.grid.shape}"
            )


def _mean_fields(grid: GridSpec, environment, band, blockers, params):
    los, nlos = params or scenario_params(environment, band)
    r = grid.horizontal_distance()
    d = np.hypot(r, grid.h_d - grid.h_r)
    p = core.los_probability_array(r, grid.h_d, grid.h_r, blockers)
    return p, core.mean_path_loss(los, d), core.mean_path_loss(nlos, d), los, nlos


def mean_coverage_map(
    grid: GridSpec,
    environment: Environment,
    band: FrequencyBand,
    blockers: core.BlockerField | None = None,
    params: tuple[ModelParams, ModelParams] | None = None,
) -> RasterLayer:
    """Cell-centre LOS/NLOS-averaged mean path loss.

    ``params`` replaces the table ``(los, nlos)`` pair, e.g. with a fresh fit.
    """
    blockers = blockers or core.BlockerField()
    p, pl_l, pl_n, _, _ = _mean_fields(grid, environment, band, blockers, params)
    return RasterLayer(grid, core.average_path_loss(p, pl_l, pl_n), MEAN)


def cell_outage(
    p_los: float,
    los_mean: float,
    los_sigma_sq: float,
    nlos_mean: float,
    nlos_sigma_sq: float,
    threshold: float,
    n_trials: int,
    rng: np.random.Generator,
) -> float:
    """Fraction of trials whose path loss exceeds ``threshold``.

    Each trial draws the LOS state with probability ``p_los`` and then
    Gaussian shadowing with that link type's variance.
    """
    u = rng.random(n_trials)
    z = rng.standard_normal(n_trials)
    los = u < p_los
    pl = np.where(
        los,
        los_mean + math.sqrt(los_sigma_sq) * z,
        nlos_mean + math.sqrt(nlos_sigma_sq) * z,
    )
    return np.count_nonzero(pl > threshold) / n_trials


def cell_rng(seed: int, cell_index: int) -> np.random.Generator:
    """Independent stream per (seed, cell); trial k uses the k-th draws."""
    return np.random.default_rng([int(seed), int(cell_index)])


def outage_map(
    grid: GridSpec,
    environment: Environment,
    band: FrequencyBand,
    blockers: core.BlockerField | None,
    spec: OutageSpec,
    workers: int = 1,
    params: tuple[ModelParams, ModelParams] | None = None,
) -> RasterLayer:
    """Monte Carlo outage fraction per cell.

    Cell ``i`` always draws from ``cell_rng(spec.seed, i)``, so the raster
    does not depend on ``workers`` or evaluation order.
    """
    blockers = blockers or core.BlockerField()
    p, pl_l, pl_n, los, nlos = _mean_fields(grid, environment, band, blockers, params)
    p, pl_l, pl_n = p.ravel(), pl_l.ravel(), pl_n.ravel()
    out = np.empty(p.size)

    def run(indices):
        for i in indices:
            out[i] = cell_outage(
                p[i], pl_l[i], los.sigma_sq, pl_n[i], nlos.sigma_sq,
                spec.max_path_loss_db, spec.n_trials, cell_rng(spec.seed, i),
            )

    if workers <= 1:
        run(range(p.size))
    else:
        chunks = np.array_split(np.arange(p.size), workers * 4)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, chunks))
    return RasterLayer(grid, out.reshape(grid.shape), OUTAGE)


def analytic_outage(mean_pl: float, sigma_sq: float, threshold: float) -> float:
    """P(mean_pl + zeta > threshold) for zeta ~ N(0, sigma_sq)."""
    if sigma_sq < 0:
        raise DomainError("sigma_sq must be >= 0")
    if sigma_sq == 0:
        return 1.0 if mean_pl > threshold else 0.0
    return 0.5 * math.erfc((threshold - mean_pl) / math.sqrt(2.0 * sigma_sq))


def link_budget_threshold(p_t: float, g_t: float, g_r: float, sensitivity: float) -> float:
    """Largest path loss that still delivers ``sensitivity`` dBm at the receiver."""
    return math.fsum((p_t, g_t, g_r, -sensitivity))
