"""State vectors and NMR deviation matrices.

Basis order is lexicographic on bit strings (00, 01, 10, 11 for two qubits).
Deviation matrices are Hermitian but carry arbitrary trace and scale.
"""
from __future__ import annotations

import numpy as np

from .hogg_operators import is_unitary, walsh_hadamard


def basis_state(bits: str) -> np.ndarray:
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int(bits, 2)] = 1
    return psi


def uniform_superposition(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return walsh_hadamard(basis_state("0" * n))


def apply_unitary(u: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Act with a dense operator or a diagonal (given as a 1-D array) on ``psi``."""
    u = np.asarray(u)
    psi = np.asarray(psi)
    if u.shape[-1] != psi.shape[0]:
        raise ValueError(f"dimension mismatch: operator {u.shape} vs state {psi.shape}")
    if u.ndim == 1:
        return u * psi
    return u @ psi


def probabilities(psi: np.ndarray) -> dict[str, float]:
    psi = np.asarray(psi)
    n = int(np.log2(psi.shape[0]))
    p = np.abs(psi) ** 2
    return {format(i, f"0{n}b"): float(p[i]) for i in range(psi.shape[0])}


def density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def conjugate(u: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """U rho U^dagger; a 1-D ``u`` is read as a diagonal."""
    u = np.asarray(u)
    if u.ndim == 1:
        return u[:, None] * rho * u.conj()[None, :]
    return u @ rho @ u.conj().T


def is_hermitian(rho: np.ndarray, atol: float = 1e-10) -> bool:
    rho = np.asarray(rho)
    return bool(np.max(np.abs(rho - rho.conj().T), initial=0.0) <= atol)


def temporal_average(populations) -> np.ndarray:
    """Effective pure state from thermal populations [p00, p01, p10, p11].

    Averages the three cyclic permutations of (p01, p10, p11) and removes the
    identity background, leaving (p00 - w)|00><00| with w the mean of the
    three permuted populations.
    """
    p = np.asarray(populations, dtype=float)
    if p.shape != (4,):
        raise ValueError("temporal averaging is defined here for two qubits (4 populations)")
    if not np.all(np.isfinite(p)):
        raise ValueError("populations must be finite")
    rest = p[1:]
    experiments = [np.diag(np.concatenate(([p[0]], np.roll(rest, k)))) for k in range(3)]
    averaged = sum(experiments) / 3
    w = rest.sum() / 3
    return (averaged - w * np.eye(4)).astype(complex)


def fidelity_up_to_global_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-8) -> float:
    """|tr(A^dagger B)| / dim, which is 1 exactly when A = e^{i phi} B."""
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim == 1:
        a = np.diag(a)
    if b.ndim == 1:
        b = np.diag(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if not (is_unitary(a, atol) and is_unitary(b, atol)):
        raise ValueError("fidelity_up_to_global_phase expects unitary arguments")
    return float(min(1.0, abs(np.trace(a.conj().T @ b)) / a.shape[0]))


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-12) -> bool:
    """Entry-wise comparison after removing the relative phase of the largest entry."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) == 0:
        return bool(np.max(np.abs(a)) <= atol)
    phase = a[k] / b[k]
    if abs(abs(phase) - 1) > atol:
        return False
    return bool(np.max(np.abs(a - phase * b)) <= atol)
