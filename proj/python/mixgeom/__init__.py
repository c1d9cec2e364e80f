"""Interferometric and Bures geometry of mixed quantum states."""

from ._mixgeom import (
    Decomposition,
    MetricValue,
    MixgeomError,
    bloch_point,
    bures_metric,
    bures_weight,
    chern_number,
    decompose,
    dist_base,
    dist_base_bruteforce,
    gibbs,
    integrands,
    interferometric_metric,
    max_port_probability,
    metric_scan,
    per_momentum_oracle,
    port_probability,
    simulate_chain,
    thermal_factors,
)

__all__ = [
    "Decomposition",
    "MetricValue",
    "MixgeomError",
    "bloch_point",
    "bures_metric",
    "bures_weight",
    "chern_number",
    "decompose",
    "dist_base",
    "dist_base_bruteforce",
    "gibbs",
    "integrands",
    "interferometric_metric",
    "max_port_probability",
    "metric_scan",
    "per_momentum_oracle",
    "port_probability",
    "simulate_chain",
    "thermal_factors",
]
