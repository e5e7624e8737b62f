"""Python bindings for the ring dispersion simulator and checker."""

from ._core import (
    ConfigurationError,
    Scenario,
    ScenarioError,
    TraceError,
    check_invariants,
    gen_chain,
    gen_multi_source,
    gen_single_source,
    load_scenario,
    parse_scenario,
    run,
    search,
    sweep,
    validate_trace,
)

__all__ = [
    "ConfigurationError",
    "Scenario",
    "ScenarioError",
    "TraceError",
    "check_invariants",
    "gen_chain",
    "gen_multi_source",
    "gen_single_source",
    "load_scenario",
    "parse_scenario",
    "run",
    "search",
    "sweep",
    "validate_trace",
]
