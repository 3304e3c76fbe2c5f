"""Frequency-hopping mmWave uplink outage simulator."""

from ._core import (
    ConfigError,
    Diversity,
    InvalidParameter,
    PlacementInfeasible,
    Profile,
    PropagationParams,
    Term,
    alpha,
    beta_for_rate,
    code_rate,
    conditional_outage,
    estimate_outage,
    nakagami_m,
    path_loss,
    run_cli,
    run_sweep,
    shadow_sigma,
    typical_link_length,
)

__all__ = [
    "ConfigError",
    "Diversity",
    "InvalidParameter",
    "PlacementInfeasible",
    "Profile",
    "PropagationParams",
    "Term",
    "alpha",
    "beta_for_rate",
    "code_rate",
    "conditional_outage",
    "estimate_outage",
    "nakagami_m",
    "path_loss",
    "run_cli",
    "run_sweep",
    "shadow_sigma",
    "typical_link_length",
]
