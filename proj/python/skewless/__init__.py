"""Skewless clock synchronization: stability analysis, simulation and tuning."""

from ._skewless import (
    ConfigError,
    Edge,
    ProtocolParams,
    Topology,
    check_theorem2,
    client_server,
    default_params,
    experiment6_topology,
    h2_gradient,
    h2_norm,
    hermite_biehler_stable,
    leader_loop,
    load_config,
    optimize,
    predict_fixed_point,
    simulate,
    simulate_preset,
    tau_bound_topology_free,
    tau_max_for,
    wheel_topology,
)

__all__ = [
    "ConfigError",
    "Edge",
    "ProtocolParams",
    "Topology",
    "check_theorem2",
    "client_server",
    "default_params",
    "experiment6_topology",
    "h2_gradient",
    "h2_norm",
    "hermite_biehler_stable",
    "leader_loop",
    "load_config",
    "optimize",
    "predict_fixed_point",
    "simulate",
    "simulate_preset",
    "tau_bound_topology_free",
    "tau_max_for",
    "wheel_topology",
]
