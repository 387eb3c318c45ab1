import numpy as np
import pytest
from hypothesis import strategies as st

from hoggsearch.sat_core import Clause, Formula, Literal


@st.composite
def formulas(draw, max_n=5, max_m=6, max_k=3):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    clauses = []
    for _ in range(m):
        k = draw(st.integers(1, max_k))
        lits = draw(st.lists(st.tuples(st.integers(1, n), st.booleans()), min_size=k, max_size=k))
        clauses.append(Clause(tuple(Literal(v, neg) for v, neg in lits)))
    return Formula(n, tuple(clauses))


@st.composite
def satisfiable_one_sat(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    signs = draw(st.lists(st.sampled_from((0, 1, -1)), min_size=n, max_size=n).filter(any))
    return Formula(n, tuple(Clause((Literal(v, s < 0),)) for v, s in enumerate(signs, 1) if s))


def random_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (z + z.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20260)
