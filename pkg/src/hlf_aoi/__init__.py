"""Age-of-information analysis for ledger-backed wireless monitoring networks.

Submodules:
    specfun  -- special functions (incomplete gammas, Kummer 1F1, Ci/Si)
    uplink   -- stochastic-geometry uplink model and transmission latency
    latency  -- commit-pipeline simulator and Gamma latency fitting
    aoi      -- AoI violation probability: series, quadrature, Monte Carlo
    config   -- unit-aware TOML run configuration
    cli      -- command-line front end
"""

from .aoi import (AoiModel, AoiQuery, SamplePathSummary, model_for_stp,
                  physical_sample_path_mc, sweep_target_stp,
                  violation_probability, violation_probability_mc,
                  violation_probability_quadrature,
                  violation_probability_series)
from .config import ConfigError, RunConfig, load_config
from .latency import (GammaParams, LatencyDist, PipelineConfig, TxRecord,
                      consensus_latency_samples, fit_gamma_mle, ks_distance,
                      read_latency_samples, run_pipeline, sample_gamma,
                      write_latency_csv)
from .specfun import ConvergenceError, DomainError, EvalPolicy
from .uplink import (NetworkConfig, UplinkDerived, composite_m, derive_uplink,
                     mean_target_rate, stp_at_distance, target_rate_at_distance,
                     transmission_latency)

__version__ = "0.1.0"

__all__ = [
    "AoiModel", "AoiQuery", "SamplePathSummary", "model_for_stp",
    "physical_sample_path_mc", "sweep_target_stp", "violation_probability",
    "violation_probability_mc", "violation_probability_quadrature",
    "violation_probability_series",
    "ConfigError", "RunConfig", "load_config",
    "GammaParams", "LatencyDist", "PipelineConfig", "TxRecord",
    "consensus_latency_samples", "fit_gamma_mle", "ks_distance",
    "read_latency_samples", "run_pipeline", "sample_gamma", "write_latency_csv",
    "ConvergenceError", "DomainError", "EvalPolicy",
    "NetworkConfig", "UplinkDerived", "composite_m", "derive_uplink",
    "mean_target_rate", "stp_at_distance", "target_rate_at_distance",
    "transmission_latency",
    "__version__",
]
