"""Simulation of the single-step structured quantum search for 1-SAT, with
the two-spin NMR pulse sequences and readout tomography used to run it."""

from .hogg_operators import build_Gamma, build_R, build_U, build_W
from .hogg_search import SearchResult, VerificationReport, run_search, run_search_density, sweep, verify_result
from .sat_core import Assignment, Clause, Formula, Literal, conflicts, enumerate_solutions, hamming, parse_formula

__all__ = [
    "Assignment", "Clause", "Formula", "Literal", "SearchResult", "VerificationReport",
    "build_Gamma", "build_R", "build_U", "build_W", "conflicts", "enumerate_solutions",
    "hamming", "parse_formula", "run_search", "run_search_density", "sweep", "verify_result",
]
