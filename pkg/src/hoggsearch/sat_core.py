"""k-SAT formulas over bit-string assignments.

Variable 1 is the most significant bit of an assignment; bit value 1 means
the variable is true. ``"10"`` therefore reads V1 = true, V2 = false.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

MAX_ENUMERATION_N = 24


class FormulaError(ValueError):
    """Raised for malformed formula text or structurally invalid formulas."""


@dataclass(frozen=True)
class Literal:
    variable: int
    negated: bool = False

    def __post_init__(self):
        if self.variable < 1:
            raise FormulaError(f"variable index must be >= 1, got {self.variable}")

    def value(self, bit: int) -> bool:
        return bool(bit) != self.negated

    def __str__(self):
        return f"-{self.variable}" if self.negated else str(self.variable)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise FormulaError("empty clause")

    def __len__(self):
        return len(self.literals)

    def __str__(self):
        return " ".join(str(lit) for lit in self.literals)


@dataclass(frozen=True)
class Formula:
    n: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.n < 1:
            raise FormulaError(f"n must be >= 1, got {self.n}")
        for clause in self.clauses:
            for lit in clause.literals:
                if lit.variable > self.n:
                    raise FormulaError(f"variable {lit.variable} out of range for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def is_one_sat(self) -> bool:
        return all(len(c) == 1 for c in self.clauses)

    def is_k_sat(self, k: int) -> bool:
        return all(len(c) == k for c in self.clauses)

    def has_distinct_clause_variables(self) -> bool:
        """True when no variable appears in more than one clause (or twice in one)."""
        seen = [lit.variable for c in self.clauses for lit in c.literals]
        return len(seen) == len(set(seen))

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True, order=True)
class Assignment:
    bits: str

    def __post_init__(self):
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {self.bits!r}")

    @classmethod
    def from_index(cls, index: int, n: int) -> Assignment:
        return cls(format(index, f"0{n}b"))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        return int(self.bits, 2)

    def value(self, variable: int) -> int:
        return int(self.bits[variable - 1])

    def __str__(self):
        return self.bits


def as_assignment(s: Assignment | str) -> Assignment:
    return s if isinstance(s, Assignment) else Assignment(s)


def one_sat(n: int, literals: list[int]) -> Formula:
    """Build a 1-SAT formula from signed variable indices, e.g. ``one_sat(2, [1, -2])``."""
    return Formula(n, tuple(Clause((Literal(abs(v), v < 0),)) for v in literals))


_N_PREFIX = re.compile(r"^\s*n\s*=\s*(\S+)\s*;(.*)$", re.DOTALL)


def parse_formula(text: str) -> Formula:
    """Parse ``"[n=K;] c1, c2, ..."`` where each clause is signed integers.

    ``"1, -2 3"`` is V1 AND (NOT V2 OR V3). Without the ``n=`` prefix the
    variable count is the largest index mentioned.
    """
    if not text or not text.strip():
        raise FormulaError("empty formula")
    declared = None
    match = _N_PREFIX.match(text)
    if match:
        try:
            declared = int(match.group(1))
        except ValueError:
            raise FormulaError(f"bad variable count {match.group(1)!r}") from None
        text = match.group(2)
    if not text.strip():
        raise FormulaError("formula has no clauses")

    clauses = []
    for chunk in text.split(","):
        tokens = chunk.split()
        if not tokens:
            raise FormulaError("empty clause")
        literals = []
        for tok in tokens:
            try:
                v = int(tok)
            except ValueError:
                raise FormulaError(f"bad literal {tok!r}") from None
            if v == 0:
                raise FormulaError("variable index 0 is not allowed")
            literals.append(Literal(abs(v), v < 0))
        clauses.append(Clause(tuple(literals)))

    top = max(lit.variable for c in clauses for lit in c.literals)
    n = top if declared is None else declared
    if n < top:
        raise FormulaError(f"variable {top} out of range for n={n}")
    return Formula(n, tuple(clauses))


def format_formula(f: Formula) -> str:
    return f"n={f.n}; " + ", ".join(str(c) for c in f.clauses)


def _check_length(f: Formula, s: Assignment):
    if s.n != f.n:
        raise ValueError(f"assignment has {s.n} bits, formula has n={f.n}")


def conflicts(f: Formula, s: Assignment | str) -> int:
    """Number of clauses of ``f`` that are false under ``s``."""
    s = as_assignment(s)
    _check_length(f, s)
    return sum(
        not any(lit.value(s.value(lit.variable)) for lit in clause.literals)
        for clause in f.clauses
    )


def assignment_bits(n: int) -> np.ndarray:
    """(2**n, n) array of 0/1; row s holds assignment s, column v-1 holds variable v."""
    idx = np.arange(2**n)
    shifts = np.arange(n - 1, -1, -1)
    return (idx[:, None] >> shifts) & 1


def conflict_vector(f: Formula) -> np.ndarray:
    """Conflict counts for every assignment, indexed in lexicographic basis order."""
    bits = assignment_bits(f.n).astype(bool)
    counts = np.zeros(2**f.n, dtype=np.int64)
    for clause in f.clauses:
        satisfied = np.zeros(2**f.n, dtype=bool)
        for lit in clause.literals:
            col = bits[:, lit.variable - 1]
            satisfied |= ~col if lit.negated else col
        counts += ~satisfied
    return counts


def enumerate_solutions(f: Formula) -> frozenset[Assignment]:
    """Brute-force every assignment and keep the conflict-free ones."""
    if f.n > MAX_ENUMERATION_N:
        raise ValueError(f"n={f.n} exceeds the enumeration limit {MAX_ENUMERATION_N}")
    clauses = [[(lit.variable - 1, lit.negated) for lit in c.literals] for c in f.clauses]
    solutions = set()
    for bits in itertools.product((0, 1), repeat=f.n):
        if all(any(bits[v] != neg for v, neg in clause) for clause in clauses):
            solutions.add(Assignment("".join(map(str, bits))))
    return frozenset(solutions)


def hamming(r: Assignment | str, s: Assignment | str) -> int:
    r, s = as_assignment(r), as_assignment(s)
    if r.n != s.n:
        raise ValueError(f"length mismatch: {r.n} vs {s.n}")
    return sum(a != b for a, b in zip(r.bits, s.bits))


def popcount(x: np.ndarray) -> np.ndarray:
    """Element-wise Hamming weight of a non-negative integer array."""
    x = np.asarray(x, dtype=np.uint64)
    count = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        count += (x & np.uint64(1)).astype(np.int64)
        x = x >> np.uint64(1)
    return count


def hamming_matrix(n: int) -> np.ndarray:
    """d[r, s] = Hamming distance between basis indices r and s."""
    idx = np.arange(2**n, dtype=np.uint64)
    return popcount(idx[:, None] ^ idx[None, :])
