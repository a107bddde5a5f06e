"""Pauli-frame bookkeeping for teleported gates.

A frame is the Pauli operator still owed to the register: the true state is
``F |psi>`` where ``|psi>`` is what the gates alone would give. Pushing a frame
past a gate uses ``G F = F' G'``; Clifford gates leave ``G`` alone and rewrite
``F``, while ``T`` and ``TDG`` keep ``F`` and swap with each other whenever the
qubit carries an X component (``T X = X T^dagger`` up to phase).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .circuit import CircuitError, Gate

LEGAL_PATTERNS = ("XZZX", "ZXXZ")

# label -> (x, z)
_LABEL_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "ZX": (1, 1), "XZ": (1, 1), "Y": (1, 1)}

# results (r1, r2, r3, r4) -> (XZZX column, ZXXZ column), transcribed verbatim
CORRECTION_TABLE: dict[tuple[int, int, int, int], tuple[str, str]] = {
    (0, 0, 0, 0): ("I", "I"),
    (1, 0, 0, 0): ("Z", "X"),
    (0, 1, 0, 0): ("X", "Z"),
    (1, 1, 0, 0): ("ZX", "ZX"),
    (0, 0, 0, 1): ("Z", "X"),
    (1, 0, 0, 1): ("I", "I"),
    (0, 1, 0, 1): ("ZX", "ZX"),
    (1, 1, 0, 1): ("X", "Z"),
    (0, 0, 1, 0): ("X", "Z"),
    (1, 0, 1, 0): ("XZ", "XZ"),
    (0, 1, 1, 0): ("I", "I"),
    (1, 1, 1, 0): ("Z", "X"),
    (0, 0, 1, 1): ("XZ", "XZ"),
    (1, 0, 1, 1): ("X", "Z"),
    (0, 1, 1, 1): ("Z", "X"),
    (1, 1, 1, 1): ("I", "I"),
}


def label_bits(label: str) -> tuple[int, int]:
    try:
        return _LABEL_BITS[label.upper()]
    except KeyError:
        raise ValueError(f"unknown Pauli label {label!r}") from None


def bits_label(x: int, z: int) -> str:
    return {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "ZX"}[(int(x), int(z))]


@dataclass(frozen=True)
class MeasurementPattern:
    """Four teleportation measurement bases plus their outcomes, in qubit order."""

    bases: str
    results: tuple[int, int, int, int]

    def __post_init__(self):
        bases = self.bases.upper()
        if bases not in LEGAL_PATTERNS:
            raise ValueError(f"basis sequence must be one of {LEGAL_PATTERNS}, got {self.bases!r}")
        results = tuple(int(r) for r in self.results)
        if len(results) != 4 or set(results) - {0, 1}:
            raise ValueError(f"need four 0/1 results, got {self.results!r}")
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "results", results)

    @classmethod
    def from_bits(cls, bases: str, bits: str) -> MeasurementPattern:
        return cls(bases, tuple(int(b) for b in bits))


def correction_for(pattern: MeasurementPattern) -> str:
    """Tabulated correction for ``pattern``; XZ and ZX are the same Pauli up to phase."""
    column = LEGAL_PATTERNS.index(pattern.bases)
    label = CORRECTION_TABLE[pattern.results][column]
    return "ZX" if label == "XZ" else label


@dataclass(frozen=True)
class PauliFrame:
    """Per-qubit (x, z) flags; qubit 1 is ``x[0]``."""

    x: tuple[bool, ...]
    z: tuple[bool, ...]

    def __post_init__(self):
        if len(self.x) != len(self.z):
            raise ValueError("x and z flag vectors differ in length")
        object.__setattr__(self, "x", tuple(bool(v) for v in self.x))
        object.__setattr__(self, "z", tuple(bool(v) for v in self.z))

    @classmethod
    def identity(cls, n: int) -> PauliFrame:
        return cls((False,) * n, (False,) * n)

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> PauliFrame:
        bits = [label_bits(s) for s in labels]
        return cls(tuple(b[0] for b in bits), tuple(b[1] for b in bits))

    def __len__(self) -> int:
        return len(self.x)

    def label(self, qubit: int) -> str:
        self._check(qubit)
        return {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}[self.x[qubit - 1], self.z[qubit - 1]]

    @property
    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    def compose(self, other: PauliFrame) -> PauliFrame:
        if len(other) != len(self):
            raise ValueError("frames of different size")
        return PauliFrame(
            tuple(a ^ b for a, b in zip(self.x, other.x)),
            tuple(a ^ b for a, b in zip(self.z, other.z)),
        )

    def with_flags(self, qubit: int, x: bool, z: bool) -> PauliFrame:
        self._check(qubit)
        xs, zs = list(self.x), list(self.z)
        xs[qubit - 1], zs[qubit - 1] = bool(x), bool(z)
        return PauliFrame(tuple(xs), tuple(zs))

    def _check(self, qubit: int):
        if not 1 <= qubit <= len(self):
            raise CircuitError(f"qubit {qubit} outside a {len(self)}-qubit frame")

    def to_dict(self) -> dict[str, str]:
        return {str(q): self.label(q) for q in range(1, len(self) + 1)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def frame_update(frame: PauliFrame, qubit: int, correction: str) -> PauliFrame:
    """XOR a correction label (I, X, Z, ZX/XZ/Y) into one qubit's flags."""
    x, z = label_bits(correction)
    frame._check(qubit)
    return frame.with_flags(qubit, frame.x[qubit - 1] ^ bool(x), frame.z[qubit - 1] ^ bool(z))


_SUBSTITUTE = {"T": "TDG", "TDG": "T"}


def conjugate_through(frame: PauliFrame, g: Gate, substitute: bool = True) -> tuple[PauliFrame, Gate]:
    """Return ``(F', G')`` with ``G F = F' G'`` up to global phase.

    With ``substitute=False`` a T-type gate is passed through unchanged, which is
    only correct when the qubit carries no X flag; the caller owns that error.
    """
    kind = g.kind
    for q in g.qubits:
        frame._check(q)
    if kind in ("I", "X", "Y", "Z"):
        return frame, g
    if kind == "CNOT":
        c, t = g.qubits
        xs, zs = list(frame.x), list(frame.z)
        xs[t - 1] ^= xs[c - 1]
        zs[c - 1] ^= zs[t - 1]
        return PauliFrame(tuple(xs), tuple(zs)), g
    (q,) = g.qubits
    x, z = frame.x[q - 1], frame.z[q - 1]
    if kind == "H":
        return frame.with_flags(q, z, x), g
    if kind in ("S", "SDG"):
        return frame.with_flags(q, x, z ^ x), g
    if kind in _SUBSTITUTE:
        if x and substitute:
            return frame, Gate(_SUBSTITUTE[kind], g.qubits)
        return frame, g
    raise CircuitError(f"cannot push a frame through {kind}")


def apply_frame_to_bits(frame: PauliFrame, bits: str) -> str:
    """Undo the X flags on Z-basis readout bits; Z flags do not touch them."""
    if len(bits) != len(frame):
        raise ValueError(f"{len(bits)} bits against a {len(frame)}-qubit frame")
    return "".join(str(int(b == "1") ^ int(x)) for b, x in zip(bits, frame.x))
