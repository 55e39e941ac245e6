"""Ground-to-air millimetre-wave path-loss model for UAV receivers."""

from .core import (
    BlockerField,
    LinkBudget,
    LinkGeometry,
    ScenarioPathLoss,
    average_path_loss,
    in_fit_range,
    los_probability,
    mean_path_loss,
    path_loss_from_budget,
    received_power,
    sample_path_loss,
    scenario_path_loss,
)
from .coverage import (
    GridSpec,
    OutageSpec,
    RasterLayer,
    analytic_outage,
    link_budget_threshold,
    mean_coverage_map,
    outage_map,
)
from .errors import (
    DomainError,
    GeometryError,
    GTAError,
    InsufficientDataError,
    PartialDataError,
    RankDeficiencyError,
)
from .fitting import FitResult, MeasurementSample, fit_log_distance, fit_report, fit_scenario
from .params import (
    FIT_RANGE_M,
    Environment,
    FrequencyBand,
    LinkType,
    ModelParams,
    Scenario,
    lookup_params,
)

__version__ = "0.1.0"
