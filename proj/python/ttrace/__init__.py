"""Tardos fingerprinting codes, collusion attacks and accusation decoders."""

from ._core import (
    arcsine_cdf,
    brute_force_lik,
    estimate_roc,
    forge,
    gauss_chebyshev,
    generalized_max,
    generate_code,
    guilty_symbol_lik,
    informed_score,
    innocent_symbol_lik,
    map_blind_score,
    mutual_information,
    optimize_wca,
    run_monte_carlo,
    sample_bias_vector,
    sample_coalition,
    strategy_theta,
    tally,
    tardos_score,
    tardos_weight,
)

__all__ = [
    "arcsine_cdf",
    "brute_force_lik",
    "estimate_roc",
    "forge",
    "gauss_chebyshev",
    "generalized_max",
    "generate_code",
    "guilty_symbol_lik",
    "informed_score",
    "innocent_symbol_lik",
    "map_blind_score",
    "mutual_information",
    "optimize_wca",
    "run_monte_carlo",
    "sample_bias_vector",
    "sample_coalition",
    "strategy_theta",
    "tally",
    "tardos_score",
    "tardos_weight",
]
