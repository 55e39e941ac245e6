"""Serialization: scenario config JSON, measurement CSV, raster CSV/PPM, tables."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import DEFAULT_TX_POWER_DBM, BlockerField
from .coverage import GridSpec, OutageSpec, RasterLayer, link_budget_threshold
from .errors import DomainError, GTAError
from .fitting import MeasurementSample
from .params import (
    PARAMETER_TABLE,
    Environment,
    FrequencyBand,
    LinkType,
    ModelParams,
    Scenario,
)

MEASUREMENT_HEADER = ("distance_m", "path_loss_db", "link_type")
RASTER_HEADER = ("x_m", "y_m", "value")


class DataFileError(GTAError):
    """Malformed input file; ``problems`` holds ``(line, message)`` pairs."""

    def __init__(self, path, problems):
        self.problems = list(problems)
        detail = "; ".join(f"line {n}: {msg}" for n, msg in self.problems)
        super().__init__(f"{path}: {detail}")


class ConfigError(GTAError):
    pass


# -- scenario config ---------------------------------------------------------


@dataclass
class ScenarioConfig:
    environment: Environment = Environment.URBAN
    band: FrequencyBand = FrequencyBand.F28GHZ
    h_d: float = 120.0
    h_r: float = 1.7
    blockers: BlockerField = field(default_factory=BlockerField)
    p_t: float = DEFAULT_TX_POWER_DBM
    g_t: float = 0.0
    g_r: float = 0.0
    sensitivity: float = -90.0
    x_min: float = -350.0
    x_max: float = 350.0
    y_min: float = -350.0
    y_max: float = 350.0
    cell_size: float = 10.0
    uav_x: float = 0.0
    uav_y: float = 0.0
    n_trials: int = 1000
    seed: int = 0
    # None means: derive from the link budget
    max_path_loss_db: float | None = None
    # None means: use the embedded tables
    model: tuple[ModelParams, ModelParams] | None = None

    def grid(self) -> GridSpec:
        return GridSpec(
            self.x_min, self.x_max, self.y_min, self.y_max, self.cell_size,
            (self.uav_x, self.uav_y, self.h_d), self.h_r,
        )

    def threshold(self) -> float:
        if self.max_path_loss_db is not None:
            return self.max_path_loss_db
        return link_budget_threshold(self.p_t, self.g_t, self.g_r, self.sensitivity)

    def outage(self) -> OutageSpec:
        return OutageSpec(self.threshold(), self.n_trials, self.seed)

    def to_dict(self) -> dict:
        return {
            "environment": self.environment.value,
            "band_ghz": self.band.value,
            "geometry": {"h_d": self.h_d, "h_r": self.h_r},
            "blockers": {
                "lambda_density": self.blockers.lambda_density,
                "g_b": self.blockers.g_b,
                "h_b": self.blockers.h_b,
            },
            "link_budget": {
                "p_t": self.p_t, "g_t": self.g_t, "g_r": self.g_r,
                "sensitivity": self.sensitivity,
            },
            "grid": {
                "x_min": self.x_min, "x_max": self.x_max,
                "y_min": self.y_min, "y_max": self.y_max,
                "cell_size": self.cell_size, "uav_x": self.uav_x, "uav_y": self.uav_y,
            },
            "outage": {
                "n_trials": self.n_trials, "seed": self.seed,
                "max_path_loss_db": self.max_path_loss_db,
            },
            "model": None if self.model is None else {
                "los": vars(self.model[0]), "nlos": vars(self.model[1]),
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        top = _section(data, "config", {
            "environment", "band_ghz", "geometry", "blockers", "link_budget",
            "grid", "outage", "model",
        })
        kw = {}
        try:
            if "environment" in top:
                kw["environment"] = Environment.parse(top["environment"])
            if "band_ghz" in top:
                kw["band"] = FrequencyBand.parse(top["band_ghz"])
            kw.update(_floats(top, "geometry", {"h_d", "h_r"}))
            kw.update(_floats(top, "link_budget", {"p_t", "g_t", "g_r", "sensitivity"}))
            kw.update(_floats(top, "grid", {
                "x_min", "x_max", "y_min", "y_max", "cell_size", "uav_x", "uav_y",
            }))
            blockers = _floats(top, "blockers", {"lambda_density", "g_b", "h_b"})
            kw["blockers"] = BlockerField(**blockers)
            outage = _section(top.get("outage", {}), "outage",
                              {"n_trials", "seed", "max_path_loss_db"})
            for key in ("n_trials", "seed"):
                if key in outage:
                    value = outage[key]
                    if isinstance(value, bool) or not isinstance(value, int):
                        raise ConfigError(f"outage.{key} must be an integer")
                    kw[key] = value
            if outage.get("max_path_loss_db") is not None:
                kw["max_path_loss_db"] = _num(outage["max_path_loss_db"], "outage.max_path_loss_db")
            if top.get("model") is not None:
                model = _section(top["model"], "model", {"los", "nlos"})
                pair = []
                for key in ("los", "nlos"):
                    terms = _floats(model, key, {"alpha", "beta", "sigma_sq"})
                    if len(terms) != 3:
                        raise ConfigError(f"model.{key} needs alpha, beta and sigma_sq")
                    pair.append(ModelParams(**terms))
                kw["model"] = tuple(pair)
            cfg = cls(**kw)
            # surface geometry/grid/outage invariant violations at parse time
            cfg.grid()
            cfg.outage()
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        return cfg

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ScenarioConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def _section(data, name, allowed):
    if not isinstance(data, dict):
        raise ConfigError(f"{name} must be a JSON object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {name}: {', '.join(unknown)}")
    return data


def _num(value, where) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{where} must be finite")
    return value


def _floats(top, name, allowed) -> dict:
    sec = _section(top.get(name, {}), name, allowed)
    return {k: _num(v, f"{name}.{k}") for k, v in sec.items()}


def load_config(path) -> ScenarioConfig:
    return ScenarioConfig.loads(Path(path).read_text(encoding="utf-8"))


# -- measurement CSV ---------------------------------------------------------


def read_measurements(path) -> list[MeasurementSample]:
    """Parse a ``distance_m,path_loss_db,link_type`` file.

    All bad rows are collected and reported together with their line
    numbers. An empty file yields an empty list.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return []
        if tuple(h.strip().lower() for h in header) != MEASUREMENT_HEADER:
            raise DataFileError(path, [(1, "header must be " + ",".join(MEASUREMENT_HEADER))])
        samples, problems = [], []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                problems.append((line, f"expected 3 fields, got {len(row)}"))
                continue
            try:
                d = float(row[0])
                pl = float(row[1])
            except ValueError:
                problems.append((line, "non-numeric distance or path loss"))
                continue
            try:
                samples.append(MeasurementSample(d, pl, LinkType.parse(row[2])))
            except DomainError as exc:
                problems.append((line, str(exc)))
    if problems:
        raise DataFileError(path, problems)
    return samples


def write_measurements(path, samples) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MEASUREMENT_HEADER)
        for s in samples:
            w.writerow((repr(float(s.distance_m)), repr(float(s.path_loss_db)), s.link.value))


# -- rasters -----------------------------------------------------------------


def raster_csv(layer: RasterLayer) -> str:
    """Row-major (y outer, x inner) CSV with full float precision."""
    x, y = layer.grid.centers()
    lines = [",".join(RASTER_HEADER)]
    for xv, yv, v in zip(x.ravel(), y.ravel(), layer.values.ravel()):
        lines.append(f"{float(xv)!r},{float(yv)!r},{float(v)!r}")
    return "\n".join(lines) + "\n"


def write_raster_csv(path, layer: RasterLayer) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(raster_csv(layer))


def read_raster_csv(path, grid: GridSpec, statistic: str) -> RasterLayer:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != RASTER_HEADER:
        raise DataFileError(path, [(1, "header must be " + ",".join(RASTER_HEADER))])
    x, y = grid.centers()
    body = rows[1:]
    if len(body) != grid.n_cells:
        raise DataFileError(path, [(len(rows), f"expected {grid.n_cells} rows, got {len(body)}")])
    values = np.empty(grid.n_cells)
    for i, (row, xv, yv) in enumerate(zip(body, x.ravel(), y.ravel())):
        try:
            rx, ry, v = (float(c) for c in row)
        except ValueError:
            raise DataFileError(path, [(i + 2, "malformed raster row")]) from None
        if rx != xv or ry != yv:
            raise DataFileError(path, [(i + 2, "coordinates do not match the grid")])
        values[i] = v
    return RasterLayer(grid, values.reshape(grid.shape), statistic)


def color_ramp(values: np.ndarray) -> np.ndarray:
    """Linear blue (min) to red (max) ramp; returns uint8 RGB of shape (..., 3)."""
    lo, hi = float(np.min(values)), float(np.max(values))
    t = np.zeros_like(values, dtype=float) if hi == lo else (values - lo) / (hi - lo)
    rgb = np.stack([t * 255.0, np.zeros_like(t), (1.0 - t) * 255.0], axis=-1)
    return np.rint(rgb).astype(np.uint8)


def write_ppm(path, layer: RasterLayer) -> None:
    """Binary P6 pixmap, one pixel per cell, north (max y) at the top."""
    rgb = color_ramp(layer.values)[::-1]
    ny, nx = layer.values.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(rgb.tobytes())


# -- tables ------------------------------------------------------------------


def render_tables(environments=None, bands=None, links=None) -> str:
    """Parameter tables laid out one block per band, NLOS rows above LOS."""
    envs = [e for e in Environment if environments is None or e in environments]
    out = []
    for band in FrequencyBand:
        if bands is not None and band not in bands:
            continue
        rows = [["param", "link"] + [e.label for e in envs]]
        for link in (LinkType.NLOS, LinkType.LOS):
            if links is not None and link not in links:
                continue
            for name in ("alpha", "beta", "sigma_sq"):
                rows.append([name, link.value] + [
                    f"{getattr(PARAMETER_TABLE[Scenario(e, band, link)], name):.2f}"
                    for e in envs
                ])
        widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
        out.append(f"{band.label}")
        out.extend("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows)
        out.append("")
    return "\n".join(out)
