"""Schedule repair after resource breakdowns."""

from ._core import (
    INFINITE,
    ConfigError,
    Error,
    InapplicableEvent,
    InfeasibleScenario,
    InvalidNominalOps,
    NoFeasibleSlot,
    breakdown_probability,
    delay_risk_q,
    earliest_start,
    idle_intervals,
    initial_schedule,
    metrics_columns,
    metrics_csv,
    minifab_json,
    run_trials,
)

__all__ = [
    "INFINITE",
    "ConfigError",
    "Error",
    "InapplicableEvent",
    "InfeasibleScenario",
    "InvalidNominalOps",
    "NoFeasibleSlot",
    "breakdown_probability",
    "delay_risk_q",
    "earliest_start",
    "idle_intervals",
    "initial_schedule",
    "metrics_columns",
    "metrics_csv",
    "minifab_json",
    "run_trials",
]
