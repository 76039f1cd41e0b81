"""Gift-economy simulation with pairwise social-credit ledgers."""

from ._giftsim import (
    AnalysisError,
    Config,
    MissingCurveError,
    Scenario,
    Trace,
    YieldCurve,
    alternating_map,
    alternating_trade,
    canonical_equilibrium,
    detect_cycle,
    distribution_report,
    intersection_point,
    is_admissible,
    measured_contraction,
    multi_recipient,
    parse_scenario,
    repeated_gift,
    run,
    simultaneous_trade,
    theoretical_contraction,
    ucr,
    ultimate_distribution,
)


def load_scenario(path):
    with open(path, encoding="utf-8") as f:
        return parse_scenario(f.read())


__all__ = [
    "AnalysisError",
    "Config",
    "MissingCurveError",
    "Scenario",
    "Trace",
    "YieldCurve",
    "alternating_map",
    "alternating_trade",
    "canonical_equilibrium",
    "detect_cycle",
    "distribution_report",
    "intersection_point",
    "is_admissible",
    "load_scenario",
    "measured_contraction",
    "multi_recipient",
    "parse_scenario",
    "repeated_gift",
    "run",
    "simultaneous_trade",
    "theoretical_contraction",
    "ucr",
    "ultimate_distribution",
]
