"""Scenario keys and the embedded ground-to-air parameter tables.

Each (environment, band, link) combination maps to one fitted
log-distance triple ``(alpha, beta, sigma_sq)``.  ``sigma_sq`` is the
shadowing variance in dB^2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError


class Environment(enum.Enum):
    SUBURBAN = "suburban"
    URBAN = "urban"
    DENSE_URBAN = "dense-urban"
    HIGH_RISE = "high-rise"

    @property
    def label(self) -> str:
        return _ENV_LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "Environment":
        key = text.strip().lower().replace("_", "").replace("-", "").replace(" ", "")
        for env in cls:
            if env.value.replace("-", "") == key:
                return env
        raise DomainError(
            f"unknown environment {text!r}; valid values: "
            + ", ".join(e.value for e in cls)
        )


_ENV_LABELS = {
    Environment.SUBURBAN: "Suburban",
    Environment.URBAN: "Urban",
    Environment.DENSE_URBAN: "Dense-Urban",
    Environment.HIGH_RISE: "High-rise",
}


class FrequencyBand(enum.Enum):
    F28GHZ = 28
    F73GHZ = 73

    @property
    def carrier_ghz(self) -> float:
        return float(self.value)

    @property
    def label(self) -> str:
        return f"{self.value} GHz"

    @classmethod
    def parse(cls, text) -> "FrequencyBand":
        key = str(text).strip().lower()
        if key.endswith("ghz"):
            key = key[:-3].strip()
        try:
            value = float(key)
        except ValueError:
            value = None
        for band in cls:
            if value == band.value:
                return band
        raise DomainError(
            f"unknown frequency band {text!r}; valid values: "
            + ", ".join(str(b.value) for b in cls)
        )


class LinkType(enum.Enum):
    LOS = "LOS"
    NLOS = "NLOS"

    @classmethod
    def parse(cls, text: str) -> "LinkType":
        key = str(text).strip().upper()
        try:
            return cls(key)
        except ValueError:
            raise DomainError(
                f"unknown link type {text!r}; valid values: LOS, NLOS"
            ) from None


@dataclass(frozen=True)
class ModelParams:
    """Floating-intercept log-distance model ``alpha + beta*10*log10(d)``."""

    alpha: float
    beta: float
    sigma_sq: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("alpha and beta must be finite")
        if not math.isfinite(self.sigma_sq) or self.sigma_sq < 0:
            raise DomainError(f"sigma_sq must be >= 0, got {self.sigma_sq}")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma_sq)


@dataclass(frozen=True)
class Scenario:
    environment: Environment
    band: FrequencyBand
    link: LinkType


# Fitted distance range of the tables, meters.
FIT_RANGE_M = (200.0, 500.0)

# (alpha, beta, sigma_sq), columns: suburban, urban, dense-urban, high-rise
_RAW = {
    (FrequencyBand.F28GHZ, LinkType.NLOS): (
        (113.63, 1.16, 2.58),
        (97.81, 1.87, 1.69),
        (98.05, 1.86, 0.59),
        (66.25, 3.30, 4.48),
    ),
    (FrequencyBand.F28GHZ, LinkType.LOS): (
        (84.64, 1.55, 0.12),
        (82.54, 1.68, 0.79),
        (78.58, 1.85, 0.49),
        (88.76, 1.68, 2.47),
    ),
    (FrequencyBand.F73GHZ, LinkType.NLOS): (
        (115.40, 1.43, 2.74),
        (100.83, 2.09, 1.90),
        (105.37, 1.91, 0.46),
        (102.10, 2.22, 6.61),
    ),
    (FrequencyBand.F73GHZ, LinkType.LOS): (
        (93.63, 1.52, 0.16),
        (90.86, 1.69, 0.84),
        (85.71, 1.90, 0.42),
        (85.49, 1.92, 0.57),
    ),
}

PARAMETER_TABLE: dict[Scenario, ModelParams] = {
    Scenario(env, band, link): ModelParams(*column[i])
    for (band, link), column in _RAW.items()
    for i, env in enumerate(Environment)
}


def lookup_params(scenario: Scenario) -> ModelParams:
    return PARAMETER_TABLE[scenario]


def scenario_params(
    environment: Environment, band: FrequencyBand
) -> tuple[ModelParams, ModelParams]:
    """Return the ``(los, nlos)`` parameter pair for one environment/band."""
    return (
        PARAMETER_TABLE[Scenario(environment, band, LinkType.LOS)],
        PARAMETER_TABLE[Scenario(environment, band, LinkType.NLOS)],
    )


def all_scenarios() -> list[Scenario]:
    return [
        Scenario(env, band, link)
        for band in FrequencyBand
        for link in (LinkType.NLOS, LinkType.LOS)
        for env in Environment
    ]
