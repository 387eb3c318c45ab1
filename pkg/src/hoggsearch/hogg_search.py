"""Prepare, phase by conflicts, mix: the single-step search and its checks."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .hogg_operators import build_R, cached_U, to_pairs
from .quantum_state import apply_unitary, conjugate, density, probabilities, uniform_superposition
from .sat_core import Assignment, Clause, Formula, Literal, enumerate_solutions, format_formula

DECODE_THRESHOLD = 1e-6
VERIFY_TOL = 1e-10
MAX_SWEEP_N = 10


@dataclass(frozen=True)
class SearchResult:
    formula: Formula
    final_state: np.ndarray
    probabilities: dict[str, float]
    decoded_solutions: tuple[Assignment, ...]
    guaranteed: bool

    def to_json(self) -> dict:
        return {
            "formula": format_formula(self.formula),
            "n": self.formula.n,
            "m": self.formula.m,
            "guaranteed": self.guaranteed,
            "amplitudes": to_pairs(self.final_state),
            "probabilities": self.probabilities,
            "decoded_solutions": [a.bits for a in self.decoded_solutions],
        }


@dataclass(frozen=True)
class VerificationReport:
    """``passed`` is None when the oracle finds no solutions (nothing to check)."""

    passed: bool | None
    oracle_solutions: frozenset[Assignment]
    max_offsolution_probability: float
    solution_probability_spread: float

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "oracle_solutions": sorted(a.bits for a in self.oracle_solutions),
            "max_offsolution_probability": self.max_offsolution_probability,
            "solution_probability_spread": self.solution_probability_spread,
        }


def has_guarantee(f: Formula) -> bool:
    """Satisfiable 1-SAT with one clause per distinct variable."""
    return f.m >= 1 and f.is_one_sat() and f.has_distinct_clause_variables()


def search_operator(f: Formula) -> np.ndarray:
    """Dense U R for formula ``f``."""
    return cached_U(f.n, f.m) * build_R(f)[None, :]


def run_search(f: Formula) -> SearchResult:
    if f.m == 0:
        raise ValueError("formula has no clauses")
    psi = uniform_superposition(f.n)
    psi = apply_unitary(build_R(f), psi)
    psi = apply_unitary(cached_U(f.n, f.m), psi)
    probs = probabilities(psi)
    decoded = tuple(Assignment(b) for b, p in probs.items() if p > DECODE_THRESHOLD)
    return SearchResult(f, psi, probs, decoded, has_guarantee(f))


def run_search_density(f: Formula) -> np.ndarray:
    """(UR) rho_i (UR)^dagger with rho_i the uniform-superposition projector."""
    if f.m == 0:
        raise ValueError("formula has no clauses")
    rho = density(uniform_superposition(f.n))
    return conjugate(search_operator(f), rho)


def verify_result(f: Formula, result: SearchResult) -> VerificationReport:
    """Compare a result with the brute-force solution set.

    The spread is the largest deviation of a solution probability from 1/|S|.
    """
    oracle = enumerate_solutions(f)
    p = np.abs(np.asarray(result.final_state)) ** 2
    on = np.zeros(p.shape[0], dtype=bool)
    for a in oracle:
        on[a.index] = True
    off_max = float(p[~on].max()) if (~on).any() else 0.0
    if not oracle:
        return VerificationReport(None, oracle, off_max, 0.0)
    spread = float(np.max(np.abs(p[on] - 1 / len(oracle))))
    passed = off_max <= VERIFY_TOL and spread <= VERIFY_TOL
    return VerificationReport(passed, oracle, off_max, spread)


def satisfiable_one_sat_formulas(n: int):
    """Every 1-SAT formula with at most one clause per variable, at least one clause.

    Each variable is absent, positive or negated; 3**n - 1 formulas in a fixed order.
    """
    for choice in itertools.product((0, 1, -1), repeat=n):
        if not any(choice):
            continue
        clauses = tuple(
            Clause((Literal(v, sign < 0),)) for v, sign in enumerate(choice, start=1) if sign
        )
        yield Formula(n, clauses)


@dataclass
class SweepReport:
    n: int
    total: int = 0
    passed: int = 0
    worst_offsolution_probability: float = 0.0
    worst_solution_spread: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def summary(self) -> str:
        return f"{self.passed}/{self.total} passed"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "total": self.total,
            "passed": self.passed,
            "worst_offsolution_probability": self.worst_offsolution_probability,
            "worst_solution_spread": self.worst_solution_spread,
            "failures": list(self.failures),
        }


def sweep(n: int) -> SweepReport:
    if not 1 <= n <= MAX_SWEEP_N:
        raise ValueError(f"sweep needs 1 <= n <= {MAX_SWEEP_N}, got {n}")
    report = SweepReport(n)
    for f in satisfiable_one_sat_formulas(n):
        check = verify_result(f, run_search(f))
        report.total += 1
        report.worst_offsolution_probability = max(
            report.worst_offsolution_probability, check.max_offsolution_probability
        )
        report.worst_solution_spread = max(
            report.worst_solution_spread, check.solution_probability_spread
        )
        if check.passed:
            report.passed += 1
        else:
            report.failures.append(format_formula(f))
    return report
