"""Nine-setting readout tomography of a two-spin deviation matrix.

Line model: after readout rotation P, sigma = P rho P^dagger and each spin's
doublet line reads one single-quantum coherence of sigma with unit gain,

    spin-1 line, partner bit t: sigma[(0t), (1t)]
    spin-2 line, partner bit t: sigma[(t0), (t1)]

The identity component of rho never produces a line, so the 16 real
Hermitian parameters are observed through a rank-15 map. The unobservable
direction is the trace; :func:`reconstruct` returns the traceless
least-squares solution unless a trace is supplied, and
:func:`effective_pure` fixes the background the way an effective pure state
is defined (smallest eigenvalue zero).
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hogg_operators import to_pairs
from .nmr_sim import DEFAULT_CONVENTIONS, Conventions, RFPulse, SpinSystem, event_unitary
from .quantum_state import is_hermitian

READOUT_CHOICES = ("E", "x", "y")
LINE_LABELS = ("spin1_partner0", "spin1_partner1", "spin2_partner0", "spin2_partner1")
# (row, col) of sigma read by each line, lexicographic two-qubit basis
LINE_ELEMENTS = ((0, 2), (1, 3), (0, 1), (2, 3))
RANK_TOL = 1e-9


def readout_settings() -> list[tuple[str, str]]:
    """(spin-1 pulse, spin-2 pulse) pairs in the listed run order E1E2 ... y1y2."""
    return list(itertools.product(READOUT_CHOICES, repeat=2))


def setting_label(setting: tuple[str, str]) -> str:
    return "".join(f"{p}{k}" for k, p in enumerate(setting, start=1))


def readout_unitary(setting: tuple[str, str], conventions: Conventions = DEFAULT_CONVENTIONS) -> np.ndarray:
    system = SpinSystem(2)
    u = np.eye(4, dtype=complex)
    for spin, choice in enumerate(setting, start=1):
        if choice not in READOUT_CHOICES:
            raise ValueError(f"readout pulse must be one of {READOUT_CHOICES}, got {choice!r}")
        if choice != "E":
            u = event_unitary(RFPulse(spin, choice, 90.0), system, conventions) @ u
    return u


def forward_signals(rho: np.ndarray, setting: tuple[str, str], conventions: Conventions = DEFAULT_CONVENTIONS) -> np.ndarray:
    """The four complex line intensities, ordered as LINE_LABELS."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 deviation matrix, got {rho.shape}")
    p = readout_unitary(setting, conventions)
    sigma = p @ rho @ p.conj().T
    return np.array([sigma[r, c] for r, c in LINE_ELEMENTS])


@dataclass(frozen=True)
class TomographyDataset:
    settings: tuple[tuple[str, str], ...]
    lines: np.ndarray  # (9, 4) complex
    sigma_noise: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if len(self.settings) != len(set(self.settings)):
            raise ValueError("duplicate readout settings")
        if np.shape(self.lines) != (len(self.settings), 4):
            raise ValueError(f"lines must have shape ({len(self.settings)}, 4)")
        if not np.all(np.isfinite(self.lines)):
            raise ValueError("line intensities must be finite")

    def __add__(self, other: TomographyDataset) -> TomographyDataset:
        if self.settings != other.settings:
            raise ValueError("datasets use different readout settings")
        return TomographyDataset(self.settings, self.lines + other.lines)

    def __rmul__(self, alpha: float) -> TomographyDataset:
        return TomographyDataset(self.settings, alpha * self.lines)

    def to_json(self) -> dict:
        return {
            "settings": [list(s) for s in self.settings],
            "line_labels": list(LINE_LABELS),
            "lines": to_pairs(self.lines),
            "sigma_noise": self.sigma_noise,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> TomographyDataset:
        lines = np.asarray(data["lines"], dtype=float)
        return cls(
            tuple(tuple(s) for s in data["settings"]),
            lines[..., 0] + 1j * lines[..., 1],
            data.get("sigma_noise"),
            data.get("seed"),
        )

    def to_csv(self) -> str:
        """Columns: setting_id, setting, line_id, line, re, im."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["setting_id", "setting", "line_id", "line", "re", "im"])
        for i, setting in enumerate(self.settings):
            for j, label in enumerate(LINE_LABELS):
                z = self.lines[i, j]
                w.writerow([i, setting_label(setting), j, label, repr(float(z.real)), repr(float(z.imag))])
        return buf.getvalue()


def simulate_dataset(rho: np.ndarray, sigma_noise: float = 0.0, seed: int = 0,
                     conventions: Conventions = DEFAULT_CONVENTIONS) -> TomographyDataset:
    """Exact line intensities plus Gaussian noise of std sigma_noise * max|line|.

    Noise is drawn independently for the real and imaginary part of every line.
    """
    if sigma_noise < 0:
        raise ValueError("sigma_noise must be non-negative")
    if not is_hermitian(rho):
        raise ValueError("deviation matrix must be Hermitian")
    settings = tuple(readout_settings())
    lines = np.array([forward_signals(rho, s, conventions) for s in settings])
    if sigma_noise > 0:
        rng = np.random.default_rng(seed)
        scale = sigma_noise * np.max(np.abs(lines))
        noise = rng.normal(0.0, scale, size=(lines.shape[0], lines.shape[1], 2))
        lines = lines + noise[..., 0] + 1j * noise[..., 1]
    return TomographyDataset(settings, lines, sigma_noise, seed)


def hermitian_basis() -> list[np.ndarray]:
    """16 Hermitian matrices: E_ii, then (E_ij + E_ji) and i(E_ij - E_ji) for i < j."""
    basis = []
    for i in range(4):
        e = np.zeros((4, 4), dtype=complex)
        e[i, i] = 1
        basis.append(e)
    for i, j in itertools.combinations(range(4), 2):
        e = np.zeros((4, 4), dtype=complex)
        e[i, j] = e[j, i] = 1
        basis.append(e)
        e = np.zeros((4, 4), dtype=complex)
        e[i, j], e[j, i] = 1j, -1j
        basis.append(e)
    return basis


def _observations(lines: np.ndarray) -> np.ndarray:
    lines = np.asarray(lines)
    return np.concatenate((lines.real, lines.imag), axis=-1).reshape(-1)


def _from_params(params: np.ndarray) -> np.ndarray:
    return sum(p * b for p, b in zip(params, hermitian_basis()))


@lru_cache(maxsize=16)
def _design(conventions: Conventions, settings: tuple) -> np.ndarray:
    cols = []
    for b in hermitian_basis():
        cols.append(_observations([forward_signals(b, s, conventions) for s in settings]))
    a = np.array(cols).T
    a.setflags(write=False)
    return a


def design_matrix(conventions: Conventions = DEFAULT_CONVENTIONS, settings=None) -> np.ndarray:
    """(72, 16) real map from Hermitian parameters to stacked line observations."""
    settings = tuple(readout_settings()) if settings is None else tuple(settings)
    return _design(conventions, settings)


@dataclass(frozen=True)
class Observability:
    rank: int
    null_space: tuple[np.ndarray, ...]  # as 4x4 Hermitian matrices, unit Frobenius norm

    @property
    def only_trace_unobserved(self) -> bool:
        """True when the sole blind direction is the identity matrix."""
        if self.rank != 15 or len(self.null_space) != 1:
            return False
        v = self.null_space[0]
        return bool(np.max(np.abs(v - v[0, 0] * np.eye(4))) < 1e-9)


def observability(conventions: Conventions = DEFAULT_CONVENTIONS, settings=None) -> Observability:
    a = design_matrix(conventions, settings)
    _, sv, vt = np.linalg.svd(a)
    rank = int(np.sum(sv > RANK_TOL * sv[0]))
    null = []
    for row in vt[rank:]:
        m = _from_params(row)
        null.append(m / np.linalg.norm(m))
    return Observability(rank, tuple(null))


def reconstruct(dataset: TomographyDataset, conventions: Conventions = DEFAULT_CONVENTIONS,
                trace: float | None = None) -> np.ndarray:
    """Linear least-squares deviation matrix from a full nine-setting dataset.

    The trace is invisible to the readout, so the fit is the minimum-norm
    (traceless) solution; pass ``trace`` to pin the identity component.
    """
    expected = readout_settings()
    if sorted(dataset.settings) != sorted(expected) or len(dataset.settings) != 9:
        raise ValueError("reconstruction needs all nine readout settings")
    obs = observability(conventions, dataset.settings)
    if obs.rank < 16 and not obs.only_trace_unobserved:
        raise ValueError(f"readout map has rank {obs.rank}; blind directions beyond the trace")
    a = design_matrix(conventions, dataset.settings)
    params, *_ = np.linalg.lstsq(a, _observations(dataset.lines), rcond=None)
    rho = _from_params(params)
    rho = (rho + rho.conj().T) / 2
    if trace is not None:
        rho = rho + (trace - np.trace(rho).real) / 4 * np.eye(4)
    return rho


def effective_pure(rho: np.ndarray) -> np.ndarray:
    """Shift by a multiple of the identity so the smallest eigenvalue is zero."""
    rho = np.asarray(rho, dtype=complex)
    lowest = np.linalg.eigvalsh(rho)[0]
    return rho - lowest * np.eye(rho.shape[0])


def modulus_table(rho: np.ndarray) -> np.ndarray:
    """Entry-wise modulus; rows and columns 0..3 stand for |00>, |01>, |10>, |11>."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {rho.shape}")
    return np.abs(rho)


def normalized(table: np.ndarray) -> np.ndarray:
    top = np.max(table)
    return table / top if top > 0 else np.zeros_like(table)


def max_spurious(measured: np.ndarray, theory: np.ndarray, tol: float = 1e-9) -> float:
    """Largest max-normalized modulus where the theoretical table is zero."""
    mt, tt = normalized(modulus_table(measured)), normalized(modulus_table(theory))
    zero = tt <= tol
    return float(mt[zero].max()) if zero.any() else 0.0


def table_csv(table: np.ndarray) -> str:
    """4x4 grid; header ``index,0,1,2,3`` and row label in the first column."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", 0, 1, 2, 3])
    for i, row in enumerate(table):
        w.writerow([i] + [repr(float(x)) for x in row])
    return buf.getvalue()
