"""Oligopoly pass-through, incidence and marginal cost of public funds."""

from ._core import (
    ConfigError,
    OligoError,
    UndefinedRatio,
    figure,
    hetero_linear_passthrough,
    incidence,
    linear_closed_form,
    mc_adval,
    mc_unit,
    rho_v_from_rho_t,
    run_cli,
    solve,
    sweep,
    validate,
)

__all__ = [
    "ConfigError",
    "OligoError",
    "UndefinedRatio",
    "figure",
    "hetero_linear_passthrough",
    "incidence",
    "linear_closed_form",
    "mc_adval",
    "mc_unit",
    "rho_v_from_rho_t",
    "run_cli",
    "solve",
    "sweep",
    "validate",
]
