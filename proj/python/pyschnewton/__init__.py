"""Planar rotating Schrodinger-Newton minimization lab."""

from ._core import (
    ConfigError,
    FieldFileError,
    RadialProfile,
    energy,
    energy_constant,
    gn_quotient,
    grid_critical_mass,
    ground_state,
    load_field,
    minimize,
    run,
    save_field,
    set_quiet,
    trial_bound,
)

__all__ = [
    "ConfigError",
    "FieldFileError",
    "RadialProfile",
    "energy",
    "energy_constant",
    "gn_quotient",
    "grid_critical_mass",
    "ground_state",
    "load_field",
    "minimize",
    "run",
    "save_field",
    "set_quiet",
    "trial_bound",
]
