"""Flux, displacement energy and Hofer-like lengths on flat tori."""

from ._tori import (
    ConfigError,
    ExperimentConfig,
    FlatTorus,
    FormatError,
    Isotopy,
    PreconditionError,
    compose,
    concat_left,
    concat_right,
    energy,
    example_flow,
    flux,
    identity_path,
    inverse,
    iterate,
    lengths,
    load_config,
    load_isotopy,
    parse_config,
    run_scenario,
    run_verify,
    save_isotopy,
    scenario_names,
    winding,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "FlatTorus",
    "FormatError",
    "Isotopy",
    "PreconditionError",
    "compose",
    "concat_left",
    "concat_right",
    "energy",
    "example_flow",
    "flux",
    "identity_path",
    "inverse",
    "iterate",
    "lengths",
    "load_config",
    "load_isotopy",
    "parse_config",
    "run_scenario",
    "run_verify",
    "save_isotopy",
    "scenario_names",
    "winding",
]
