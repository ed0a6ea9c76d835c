"""Critical domain lengths and wash-out probabilities for drifting benthic
populations, with Monte Carlo cross-checks of every analytic quantity."""

from ._core import (
    BbmReport,
    CheckRule,
    CloneCheckReport,
    CloneTestFunction,
    CurveRow,
    EstimateWithError,
    LevyModel,
    LineageStats,
    PersistenceVerdict,
    PopulationEvent,
    PopulationTrajectory,
    RegimeParams,
    SimConfig,
    ValidationCheck,
    ValidationReport,
    asymptotic_critical_length,
    brownian,
    clone_model_check,
    critical_curve,
    critical_length_brownian_closed_form,
    critical_length_round_trip_residual,
    deterministic,
    estimate_extinction_probability,
    estimate_mean_passage_time,
    estimate_washout,
    inverse_laplace_exponent,
    laplace_exponent,
    mean_passage_time,
    passage_time_transform,
    persistence_verdict,
    population_lineage_stats,
    run_validation_suite,
    simulate_bbm_kesten,
    simulate_population,
    validate_model,
    washout_probability,
    with_exponential_jumps,
    with_fixed_jumps,
)

__all__ = [
    "BbmReport",
    "CheckRule",
    "CloneCheckReport",
    "CloneTestFunction",
    "CurveRow",
    "EstimateWithError",
    "LevyModel",
    "LineageStats",
    "PersistenceVerdict",
    "PopulationEvent",
    "PopulationTrajectory",
    "RegimeParams",
    "SimConfig",
    "ValidationCheck",
    "ValidationReport",
    "asymptotic_critical_length",
    "brownian",
    "clone_model_check",
    "critical_curve",
    "critical_length_brownian_closed_form",
    "critical_length_round_trip_residual",
    "deterministic",
    "estimate_extinction_probability",
    "estimate_mean_passage_time",
    "estimate_washout",
    "inverse_laplace_exponent",
    "laplace_exponent",
    "mean_passage_time",
    "passage_time_transform",
    "persistence_verdict",
    "population_lineage_stats",
    "run_validation_suite",
    "simulate_bbm_kesten",
    "simulate_population",
    "validate_model",
    "washout_probability",
    "with_exponential_jumps",
    "with_fixed_jumps",
]

__version__ = "0.1.0"
