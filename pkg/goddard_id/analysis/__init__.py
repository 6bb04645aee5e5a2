"""Comparison, convergence and sweep analyses of solved runs"""
from .compare import PROFILES, ComparisonReport, resample, compare
from .convergence import SMOOTH_START, ConvergenceReport, integrate, convergence_study
from .sweep import SWEEP_COLUMNS, sweep_table, refinement_gap

__all__ = [
    "PROFILES",
    "ComparisonReport",
    "resample",
    "compare",

    "SMOOTH_START",
    "ConvergenceReport",
    "integrate",
    "convergence_study",

    "SWEEP_COLUMNS",
    "sweep_table",
    "refinement_gap",
]
