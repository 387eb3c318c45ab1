"""Ideal RF pulses and J-coupling delays on a weakly coupled two-spin system.

Rotating frame, on resonance: chemical shifts are ignored and only the
2 pi J Iz Iz coupling acts during delays. Delay durations are stored as
multiples of 1/J, so no physical units enter the matrices.

The conventions the pulse listings leave implicit (rotation sense, coupling
sign, which pulse subscript addresses which qubit) are explicit
:class:`Conventions` values; :func:`convention_search` tries all of them.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .quantum_state import fidelity_up_to_global_phase

VALIDATION_THRESHOLD = 1 - 1e-10

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
AXES = ("x", "-x", "y", "-y")
ANGLES = (90.0, 180.0)


@dataclass(frozen=True)
class SpinSystem:
    spins: int = 2
    J: float | None = 215.0  # 1H-13C one-bond coupling in chloroform, Hz

    def __post_init__(self):
        if self.spins < 1:
            raise ValueError("need at least one spin")
        if self.J is not None and self.J <= 0:
            raise ValueError("J must be positive")


@dataclass(frozen=True)
class RFPulse:
    spin: int  # pulse subscript, 1-based
    axis: str
    degrees: float = 90.0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.degrees not in ANGLES:
            raise ValueError(f"pulse angle must be 90 or 180 degrees, got {self.degrees}")
        if self.spin < 1:
            raise ValueError("spin subscript must be >= 1")

    def __str__(self):
        return f"{self.axis}{self.spin}/{self.degrees:g}"


@dataclass(frozen=True)
class Delay:
    duration: float  # in units of 1/J

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("delay duration must be positive")

    def __str__(self):
        return f"d/{self.duration:g}"


@dataclass(frozen=True)
class Conventions:
    """pulse_sign: rotation exp(pulse_sign * i * angle * I_axis).
    coupling_sign: delay exp(coupling_sign * i * 2 pi J t Iz Iz).
    label_map: label_map[k - 1] is the qubit addressed by pulse subscript k
    (qubit 0 is the high, leftmost bit).
    """

    pulse_sign: int = -1
    coupling_sign: int = -1
    label_map: tuple[int, ...] = (0, 1)

    def __post_init__(self):
        if self.pulse_sign not in (-1, 1) or self.coupling_sign not in (-1, 1):
            raise ValueError("signs must be -1 or +1")
        if sorted(self.label_map) != list(range(len(self.label_map))):
            raise ValueError(f"label_map must be a permutation, got {self.label_map}")

    def label(self) -> str:
        sign = {-1: "-", 1: "+"}
        return f"pulse{sign[self.pulse_sign]} coupling{sign[self.coupling_sign]} map{''.join(str(q + 1) for q in self.label_map)}"


DEFAULT_CONVENTIONS = Conventions()

ALL_CONVENTIONS = tuple(
    Conventions(p, c, lm)
    for p, c, lm in itertools.product((-1, 1), (-1, 1), ((0, 1), (1, 0)))
)


@dataclass(frozen=True)
class PulseSequence:
    events: tuple

    @classmethod
    def parse(cls, text: str) -> PulseSequence:
        """Read ``"y1/90 x1/90 -y1/90 d/0.5 ..."`` (axis+subscript/degrees, d/<t*J>)."""
        events = []
        for tok in text.split():
            if tok.startswith("d/"):
                try:
                    events.append(Delay(float(tok[2:])))
                except ValueError as exc:
                    raise ValueError(f"bad delay {tok!r}: {exc}") from None
                continue
            match = re.fullmatch(r"(-?[xy])(\d+)/([0-9.]+)", tok)
            if not match:
                raise ValueError(f"bad pulse token {tok!r}")
            axis, spin, deg = match.groups()
            events.append(RFPulse(int(spin), axis, float(deg)))
        if not events:
            raise ValueError("empty pulse sequence")
        return cls(tuple(events))

    def __str__(self):
        return " ".join(str(e) for e in self.events)

    def __len__(self):
        return len(self.events)


def rotation(axis: str, degrees: float, pulse_sign: int = -1) -> np.ndarray:
    """Single-spin exp(pulse_sign * i * theta * sigma_axis / 2) in closed form."""
    theta = np.deg2rad(degrees)
    sign = -1.0 if axis.startswith("-") else 1.0
    sigma = sign * _PAULI[axis[-1]]
    return np.cos(theta / 2) * np.eye(2) + pulse_sign * 1j * np.sin(theta / 2) * sigma


def _embed(op: np.ndarray, qubit: int, spins: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for q in range(spins):
        out = np.kron(out, op if q == qubit else np.eye(2))
    return out


def delay_unitary(duration: float, coupling_sign: int = -1) -> np.ndarray:
    """exp(coupling_sign * i * 2 pi (duration) Iz Iz) for two spins; diagonal."""
    zz = np.array([1, -1, -1, 1]) / 4
    return np.diag(np.exp(coupling_sign * 1j * 2 * np.pi * duration * zz))


def event_unitary(event, system: SpinSystem = SpinSystem(), conventions: Conventions = DEFAULT_CONVENTIONS) -> np.ndarray:
    if isinstance(event, RFPulse):
        if event.spin > system.spins:
            raise ValueError(f"pulse on spin {event.spin} but system has {system.spins} spins")
        if len(conventions.label_map) != system.spins:
            raise ValueError("label_map size does not match the spin count")
        qubit = conventions.label_map[event.spin - 1]
        return _embed(rotation(event.axis, event.degrees, conventions.pulse_sign), qubit, system.spins)
    if isinstance(event, Delay):
        if system.J is None:
            raise ValueError("delay needs a coupling constant J")
        if system.spins != 2:
            raise ValueError("J-coupling delays are modelled for two spins only")
        return delay_unitary(event.duration, conventions.coupling_sign)
    raise TypeError(f"not a pulse event: {event!r}")


def sequence_unitary(seq: PulseSequence, system: SpinSystem = SpinSystem(), conventions: Conventions = DEFAULT_CONVENTIONS) -> np.ndarray:
    """Time-ordered product; later events multiply on the left."""
    if not seq.events:
        raise ValueError("empty pulse sequence")
    u = np.eye(2**system.spins, dtype=complex)
    for event in seq.events:
        u = event_unitary(event, system, conventions) @ u
    return u


BUILTIN_SEQUENCES = {
    "R_V1andV2": "y1/90 x1/90 -y1/90 d/0.5 y2/90 x2/90 -y2/90",
    "R_V2": "y1/90 x1/90 -y1/90",
    "Gamma_m2": "y1/90 -x1/90 -y1/90 d/0.5 y2/90 -x2/90 -y2/90",
    # third pulse is +y1 as listed, unlike the other composites
    "Gamma_m1": "y1/90 x1/90 y1/90 y2/90 -x2/90 -y2/90",
    "Hadamard": "y1/90 x1/180",
}

BUILTIN_TARGETS = {
    "R_V1andV2": np.array([-1, 1, 1, 1], dtype=complex),
    "R_V2": np.array([1j, 1, 1j, 1], dtype=complex),
    "Gamma_m2": np.array([1, 1, 1, -1], dtype=complex),
    "Gamma_m1": np.array([1, 1j, 1j, -1], dtype=complex),
    "Hadamard": np.kron(np.array([[1, 1], [1, -1]]) / np.sqrt(2), np.eye(2)).astype(complex),
}


def builtin_sequence(name: str) -> PulseSequence:
    try:
        return PulseSequence.parse(BUILTIN_SEQUENCES[name])
    except KeyError:
        raise ValueError(f"unknown sequence {name!r}; known: {sorted(BUILTIN_SEQUENCES)}") from None


def builtin_target(name: str) -> np.ndarray:
    try:
        return BUILTIN_TARGETS[name].copy()
    except KeyError:
        raise ValueError(f"unknown target {name!r}; known: {sorted(BUILTIN_TARGETS)}") from None


@dataclass(frozen=True)
class ConventionReport:
    sequence: str
    entries: tuple[tuple[Conventions, float], ...]
    threshold: float = VALIDATION_THRESHOLD

    @property
    def validating(self) -> tuple[Conventions, ...]:
        return tuple(c for c, fid in self.entries if fid >= self.threshold)

    def table(self) -> str:
        lines = [f"sequence: {self.sequence}", f"{'conventions':<28} fidelity"]
        for c, fid in self.entries:
            mark = "  *" if fid >= self.threshold else ""
            lines.append(f"{c.label():<28} {fid!r}{mark}")
        lines.append(f"{len(self.validating)}/{len(self.entries)} combinations validate")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "sequence": self.sequence,
            "threshold": self.threshold,
            "entries": [
                {
                    "pulse_sign": c.pulse_sign,
                    "coupling_sign": c.coupling_sign,
                    "label_map": list(c.label_map),
                    "fidelity": fid,
                    "validates": fid >= self.threshold,
                }
                for c, fid in self.entries
            ],
            "validating_count": len(self.validating),
        }


def convention_search(seq: PulseSequence, target: np.ndarray, system: SpinSystem = SpinSystem()) -> ConventionReport:
    """Phase-insensitive fidelity of ``seq`` against ``target`` under all 8 conventions."""
    target = np.asarray(target, dtype=complex)
    dim = target.shape[0]
    if dim != 2**system.spins or system.spins != 2:
        raise ValueError("convention search is defined for two-spin targets (dimension 4)")
    entries = tuple(
        (c, fidelity_up_to_global_phase(sequence_unitary(seq, system, c), target))
        for c in ALL_CONVENTIONS
    )
    return ConventionReport(str(seq), entries)
