"""Gate set, circuit IR, device constraints and the dense-matrix oracle.

Qubits are labelled 1..n. Bitstrings and amplitude indices put qubit 1 in the
most significant position, so ``"10000"`` means qubit 1 is set.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

SINGLE_QUBIT_KINDS = ("I", "X", "Y", "Z", "H", "S", "SDG", "T", "TDG")
GATE_KINDS = SINGLE_QUBIT_KINDS + ("CNOT",)
MEASURE_BASES = ("Z", "X")
MAX_UNITARY_QUBITS = 10

_W = np.exp(1j * np.pi / 4)
GATE_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
    "T": np.diag([1, _W]).astype(complex),
    "TDG": np.diag([1, np.conj(_W)]).astype(complex),
}

INVERSE_KIND = {"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T"}


class CircuitError(ValueError):
    pass


class CircuitParseError(CircuitError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        arity = 2 if kind == "CNOT" else 1
        if len(self.qubits) != arity:
            raise CircuitError(f"{kind} takes {arity} operand(s), got {self.qubits}")
        if any(q < 1 for q in self.qubits):
            raise CircuitError(f"qubit labels are 1-based, got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError("CNOT control and target must differ")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind == "CNOT"

    def inverse(self) -> Gate:
        return Gate(INVERSE_KIND.get(self.kind, self.kind), self.qubits)

    def relabel(self, mapping) -> Gate:
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits))

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.qubits)])


def gate(kind: str, *qubits: int) -> Gate:
    return Gate(kind, qubits)


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def cz(a: int, b: int) -> list[Gate]:
    """CZ(a, b) compiled as H(b) CNOT(a, b) H(b)."""
    return [gate("H", b), cnot(a, b), gate("H", b)]


@dataclass(frozen=True)
class Circuit:
    qubit_count: int
    gates: tuple[Gate, ...] = ()
    measure: tuple[str | None, ...] = field(default=None)

    def __post_init__(self):
        if self.qubit_count < 1:
            raise CircuitError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        measure = self.measure
        if measure is None:
            measure = (None,) * self.qubit_count
        elif isinstance(measure, dict):
            measure = tuple(measure.get(q) for q in range(1, self.qubit_count + 1))
        measure = tuple(m.upper() if m else None for m in measure)
        if len(measure) != self.qubit_count:
            raise CircuitError("measurement tags must cover every qubit")
        if any(m not in (None, *MEASURE_BASES) for m in measure):
            raise CircuitError(f"measurement basis must be Z or X, got {measure}")
        object.__setattr__(self, "measure", measure)
        for g in self.gates:
            if max(g.qubits) > self.qubit_count:
                raise CircuitError(f"{g} is outside a {self.qubit_count}-qubit register")

    @property
    def has_measurements(self) -> bool:
        return any(self.measure)

    def extend(self, gates: Iterable[Gate]) -> Circuit:
        if self.has_measurements:
            raise CircuitError("cannot append gates after terminal measurements")
        return Circuit(self.qubit_count, self.gates + tuple(gates))

    def measured(self, bases: dict[int, str] | str = "Z") -> Circuit:
        """Return a copy with terminal measurement tags attached."""
        if isinstance(bases, str):
            bases = {q: bases for q in range(1, self.qubit_count + 1)}
        tags = list(self.measure)
        for q, b in bases.items():
            tags[q - 1] = b
        return Circuit(self.qubit_count, self.gates, tuple(tags))

    def without_measurements(self) -> Circuit:
        return Circuit(self.qubit_count, self.gates)

    def expanded(self) -> Circuit:
        """Unitary-only form: X-basis tags become trailing Hadamards."""
        tail = [gate("H", q) for q, b in enumerate(self.measure, start=1) if b == "X"]
        return Circuit(self.qubit_count, self.gates + tuple(tail))

    def padded(self, qubit_count: int) -> Circuit:
        if qubit_count < self.qubit_count:
            raise CircuitError("cannot shrink a circuit")
        extra = (None,) * (qubit_count - self.qubit_count)
        return Circuit(qubit_count, self.gates, self.measure + extra)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


def relabel_qubits(circuit: Circuit, mapping: dict[int, int]) -> Circuit:
    """Rename qubits; ``mapping`` must be a permutation of 1..n (missing keys stay put)."""
    full = {q: mapping.get(q, q) for q in range(1, circuit.qubit_count + 1)}
    if sorted(full.values()) != list(full):
        raise CircuitError(f"relabelling {mapping} is not a permutation")
    tags = [None] * circuit.qubit_count
    for q, b in enumerate(circuit.measure, start=1):
        tags[full[q] - 1] = b
    return Circuit(circuit.qubit_count, [g.relabel(full) for g in circuit.gates], tuple(tags))


@dataclass(frozen=True)
class DeviceModel:
    qubit_count: int = 5
    allowed_cnots: frozenset[tuple[int, int]] = frozenset({(1, 3), (2, 3), (4, 3), (5, 3)})

    def __post_init__(self):
        object.__setattr__(self, "allowed_cnots", frozenset(tuple(p) for p in self.allowed_cnots))
        for c, t in self.allowed_cnots:
            if c == t or not (1 <= c <= self.qubit_count and 1 <= t <= self.qubit_count):
                raise CircuitError(f"bad coupling ({c}, {t})")

    def allows(self, control: int, target: int) -> bool:
        return (control, target) in self.allowed_cnots

    def coupled(self, a: int, b: int) -> bool:
        return self.allows(a, b) or self.allows(b, a)

    def neighbours(self, q: int) -> list[int]:
        return sorted({t for c, t in self.allowed_cnots if c == q} | {c for c, t in self.allowed_cnots if t == q})


DEFAULT_DEVICE = DeviceModel()


@dataclass(frozen=True)
class Violation:
    index: int | None
    gate: Gate | None
    reason: str


def validate_against_device(circuit: Circuit, device: DeviceModel = DEFAULT_DEVICE) -> list[Violation]:
    """List every gate the device cannot run. An empty list means the circuit is legal."""
    report = []
    if circuit.qubit_count > device.qubit_count:
        report.append(Violation(None, None, f"needs {circuit.qubit_count} qubits, device has {device.qubit_count}"))
    for i, g in enumerate(circuit.gates):
        if g.is_two_qubit and not device.allows(*g.qubits):
            report.append(Violation(i, g, f"CNOT{g.qubits} not in coupling map"))
        elif max(g.qubits) > device.qubit_count:
            report.append(Violation(i, g, "operand outside device"))
    return report


def _embed(g: Gate, n: int) -> np.ndarray:
    dim = 2**n
    if g.is_two_qubit:
        c, t = g.qubits
        idx = np.arange(dim)
        cbit = (idx >> (n - c)) & 1
        out = idx ^ (cbit << (n - t))
        m = np.zeros((dim, dim), dtype=complex)
        m[out, idx] = 1
        return m
    q = g.qubits[0]
    return np.kron(np.kron(np.eye(2 ** (q - 1)), GATE_MATRICES[g.kind]), np.eye(2 ** (n - q)))


def circuit_unitary(circuit: Circuit | Sequence[Gate], qubit_count: int | None = None) -> np.ndarray:
    """Dense product of embedded gate matrices (first gate rightmost)."""
    if not isinstance(circuit, Circuit):
        circuit = Circuit(qubit_count or max(max(g.qubits) for g in circuit), tuple(circuit))
    if circuit.has_measurements:
        raise CircuitError("circuit_unitary needs a measurement-free circuit; use .expanded() or .without_measurements()")
    n = circuit.qubit_count
    if n > MAX_UNITARY_QUBITS:
        raise CircuitError(f"refusing a dense unitary on {n} > {MAX_UNITARY_QUBITS} qubits")
    u = np.eye(2**n, dtype=complex)
    for g in circuit.gates:
        u = _embed(g, n) @ u
    return u


def invert_circuit(circuit: Circuit) -> Circuit:
    if circuit.has_measurements:
        raise CircuitError("cannot invert a circuit with measurement tags")
    return Circuit(circuit.qubit_count, [g.inverse() for g in reversed(circuit.gates)])


def permutation_matrix(mapping: Sequence[int]) -> np.ndarray:
    """Operator sending the state of qubit ``i+1`` to position ``mapping[i]`` (both 1-based)."""
    n = len(mapping)
    dim = 2**n
    idx = np.arange(dim)
    out = np.zeros(dim, dtype=int)
    for i, p in enumerate(mapping, start=1):
        out |= ((idx >> (n - i)) & 1) << (n - p)
    m = np.zeros((dim, dim), dtype=complex)
    m[out, idx] = 1
    return m


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> bool:
    return phase_distance(a, b) < atol


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max elementwise deviation between ``a`` and ``b`` after the best global phase."""
    inner = np.vdot(b, a)
    phase = inner / abs(inner) if abs(inner) > 1e-15 else 1.0
    return float(np.max(np.abs(a - phase * b)))


# -- text format -------------------------------------------------------------

_TOKEN = re.compile(r"\S+")


def dumps(circuit: Circuit) -> str:
    lines = [f"QUBITS {circuit.qubit_count}"]
    lines += [str(g) for g in circuit.gates]
    lines += [f"MEASURE {q} {b}" for q, b in enumerate(circuit.measure, start=1) if b]
    return "\n".join(lines) + "\n"


def loads(text: str) -> Circuit:
    """Parse the one-gate-per-line format; ``QUBITS n`` is optional."""
    declared = None
    gates: list[Gate] = []
    tags: dict[int, str] = {}
    highest = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _TOKEN.findall(raw.split("#", 1)[0])
        if not tokens:
            continue
        head = tokens[0].upper()
        try:
            args = [int(t) for t in tokens[1:]] if head != "MEASURE" else None
        except ValueError:
            raise CircuitParseError(f"non-integer operand in {raw.strip()!r}", lineno) from None
        if head == "QUBITS":
            if len(args) != 1 or args[0] < 1:
                raise CircuitParseError("QUBITS takes one positive integer", lineno)
            declared = args[0]
        elif head == "MEASURE":
            if len(tokens) != 3 or not tokens[1].isdigit() or tokens[2].upper() not in MEASURE_BASES:
                raise CircuitParseError("expected MEASURE <qubit> <Z|X>", lineno)
            q = int(tokens[1])
            if q < 1:
                raise CircuitParseError("qubit labels are 1-based", lineno)
            tags[q] = tokens[2].upper()
            highest = max(highest, q)
        else:
            if tags:
                raise CircuitParseError("gate after MEASURE; measurements must be terminal", lineno)
            try:
                g = Gate(head, tuple(args))
            except CircuitError as exc:
                raise CircuitParseError(str(exc), lineno) from None
            gates.append(g)
            highest = max(highest, *g.qubits)
    n = declared if declared is not None else highest
    if n < 1:
        raise CircuitParseError("empty circuit with no QUBITS declaration", 1)
    if highest > n:
        raise CircuitParseError(f"qubit {highest} exceeds declared QUBITS {n}", 1)
    return Circuit(n, gates, tags)
