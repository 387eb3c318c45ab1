"""Operators of the single-step structured search: R, Gamma, W and U.

Diagonal operators are returned as 1-D complex arrays of their diagonal,
dense operators as 2-D arrays. Basis index ``s`` is the assignment whose
bit string is ``format(s, f"0{n}b")``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .sat_core import Formula, conflict_vector, hamming_matrix, popcount

MAX_DENSE_N = 12

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _check_nm(n: int, m: int):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")


def build_R(f: Formula) -> np.ndarray:
    """Conflict phase for each assignment.

    sqrt(2) cos((2c - 1) pi/4) for even m, i**c for odd m.
    """
    if f.m == 0:
        raise ValueError("R is undefined for a formula with no clauses")
    c = conflict_vector(f)
    if f.m % 2 == 0:
        return (np.sqrt(2) * np.cos((2 * c - 1) * np.pi / 4)).astype(complex)
    return 1j ** c


def build_Gamma(n: int, m: int) -> np.ndarray:
    _check_nm(n, m)
    weight = popcount(np.arange(2**n))
    if m % 2 == 0:
        return (np.sqrt(2) * np.cos((m - 2 * weight - 1) * np.pi / 4)).astype(complex)
    return 1j ** weight * np.exp(-1j * m * np.pi / 4)


def build_W(n: int) -> np.ndarray:
    """n-fold tensor power of the Hadamard gate."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > MAX_DENSE_N:
        raise ValueError(f"n={n} too large for a dense operator (max {MAX_DENSE_N})")
    w = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        w = np.kron(w, _HADAMARD)
    return w


def walsh_hadamard(v: np.ndarray) -> np.ndarray:
    """Apply build_W(n) to a length-2**n vector in O(n 2**n)."""
    v = np.array(v, dtype=complex)
    size = v.shape[0]
    if size & (size - 1) or size == 0:
        raise ValueError("length must be a power of two")
    h = 1
    while h < size:
        v = v.reshape(-1, 2, h)
        v = np.stack((v[:, 0] + v[:, 1], v[:, 0] - v[:, 1]), axis=1).reshape(size)
        h *= 2
    return v / np.sqrt(size)


def _U_elementwise(n: int, m: int) -> np.ndarray:
    d = hamming_matrix(n)
    if m % 2 == 0:
        u = 2 ** (-(n - 1) / 2) * np.cos((n - m + 1 - 2 * d) * np.pi / 4)
        return u.astype(complex)
    return 2 ** (-n / 2) * np.exp(1j * (n - m) * np.pi / 4) * (-1j) ** d


def _U_decomposition(n: int, m: int) -> np.ndarray:
    w = build_W(n)
    return w @ (build_Gamma(n, m)[:, None] * w)


def build_U(n: int, m: int, method: str = "elementwise") -> np.ndarray:
    """Mixing operator whose entries depend only on Hamming distance.

    ``method="elementwise"`` evaluates the closed form per entry;
    ``method="decomposition"`` multiplies W . Gamma . W.
    """
    _check_nm(n, m)
    if n > MAX_DENSE_N:
        raise ValueError(f"n={n} too large for a dense operator (max {MAX_DENSE_N})")
    if method == "elementwise":
        return _U_elementwise(n, m)
    if method == "decomposition":
        return _U_decomposition(n, m)
    raise ValueError(f"unknown method {method!r}")


@lru_cache(maxsize=256)
def cached_U(n: int, m: int) -> np.ndarray:
    u = build_U(n, m)
    u.setflags(write=False)
    return u


def is_unitary(u: np.ndarray, atol: float = 1e-12) -> bool:
    u = np.asarray(u)
    if u.ndim == 1:
        return bool(np.all(np.abs(np.abs(u) - 1) <= atol))
    eye = np.eye(u.shape[0])
    return bool(np.max(np.abs(u @ u.conj().T - eye)) <= atol)


def unitarity_error(u: np.ndarray) -> float:
    """Max-norm distance of U U^dagger from the identity (dense or diagonal)."""
    u = np.asarray(u)
    if u.ndim == 1:
        return float(np.max(np.abs(np.abs(u) ** 2 - 1)))
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))


def to_pairs(a: np.ndarray) -> list:
    """Nested lists of [re, im] pairs, same shape as ``a``."""
    a = np.asarray(a, dtype=complex)
    return np.stack((a.real, a.imag), axis=-1).tolist()


def from_pairs(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]
