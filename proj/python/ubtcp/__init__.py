"""Python access to the ubtcp simulator."""

from ._core import (
    ConfigError,
    config_keys,
    decide,
    estimated_ssthresh,
    run_scenario,
    scenario_names,
    stability_index,
    vegas_diff,
)

__all__ = [
    "ConfigError",
    "config_keys",
    "decide",
    "estimated_ssthresh",
    "run_scenario",
    "scenario_names",
    "stability_index",
    "vegas_diff",
]
