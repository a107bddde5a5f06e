"""Pauli strings, graph states, local complementation and syndrome filtering."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuit import GATE_MATRICES, Circuit, CircuitError, cz, gate
from .statevector import ShotHistogram, num_qubits

# letter -> (x, z)
_XZ = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_LETTER = {v: k for k, v in _XZ.items()}
# single-letter products a*b = i**k * c
_PRODUCT = {
    ("X", "Y"): (1, "Z"), ("Y", "Z"): (1, "X"), ("Z", "X"): (1, "Y"),
    ("Y", "X"): (3, "Z"), ("Z", "Y"): (3, "X"), ("X", "Z"): (3, "Y"),
}
_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class PauliString:
    """``i**phase`` times a tensor product of I/X/Y/Z, qubit 1 first."""

    letters: str
    phase: int = 0

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or set(letters) - set("IXYZ"):
            raise ValueError(f"bad Pauli letters {self.letters!r}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def parse(cls, text: str) -> PauliString:
        text = text.strip()
        for prefix, ph in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2), ("i", 1)):
            if text.startswith(prefix) and text[len(prefix):].isalpha():
                return cls(text[len(prefix):], ph)
        return cls(text, 0)

    @classmethod
    def from_support(cls, n: int, letter: str, qubits: Iterable[int]) -> PauliString:
        chars = ["I"] * n
        for q in qubits:
            chars[q - 1] = letter
        return cls("".join(chars))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return _PHASE_TEXT[self.phase] + self.letters

    def __mul__(self, other: PauliString) -> PauliString:
        if len(self) != len(other):
            raise ValueError("Pauli strings of different length")
        phase = self.phase + other.phase
        out = []
        for a, b in zip(self.letters, other.letters):
            if a == "I" or b == "I" or a == b:
                out.append(b if a == "I" else a if b == "I" else "I")
            else:
                k, c = _PRODUCT[a, b]
                phase += k
                out.append(c)
        return PauliString("".join(out), phase)

    def __neg__(self) -> PauliString:
        return PauliString(self.letters, self.phase + 2)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.letters, start=1) if c != "I")

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError(f"{self} has an imaginary phase")
        return 1 if self.phase == 0 else -1

    def commutes(self, other: PauliString) -> bool:
        anti = 0
        for a, b in zip(self.letters, other.letters):
            xa, za = _XZ[a]
            xb, zb = _XZ[b]
            anti ^= (xa & zb) ^ (za & xb)
        return anti == 0

    def to_matrix(self) -> np.ndarray:
        m = np.array([[1j**self.phase]])
        for c in self.letters:
            m = np.kron(m, GATE_MATRICES[c])
        return m

    def symplectic(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.array([_XZ[c][0] for c in self.letters], dtype=np.uint8)
        z = np.array([_XZ[c][1] for c in self.letters], dtype=np.uint8)
        return x, z


def apply_pauli(state: np.ndarray, p: PauliString) -> np.ndarray:
    n = num_qubits(state)
    if len(p) != n:
        raise ValueError(f"{len(p)}-qubit Pauli on a {n}-qubit state")
    psi = state.reshape((2,) * n)
    for axis, c in enumerate(p.letters):
        if c != "I":
            psi = np.moveaxis(np.tensordot(GATE_MATRICES[c], psi, axes=([1], [axis])), 0, axis)
    return (1j**p.phase) * psi.reshape(-1)


def pauli_expectation(state: np.ndarray, p: PauliString) -> float:
    """<psi|P|psi> for a Hermitian (real-phase) Pauli string."""
    if not p.is_hermitian:
        raise ValueError(f"{p} is not Hermitian; its expectation is not real")
    return float(np.vdot(state, apply_pauli(state, p)).real)


def stabilizer_table(strings: Sequence[PauliString]) -> str:
    return "\n".join(str(s) for s in strings) + "\n"


def mutually_commuting(strings: Sequence[PauliString]) -> bool:
    return all(a.commutes(b) for a, b in itertools.combinations(strings, 2))


# -- graphs --------------------------------------------------------------------


@dataclass(frozen=True)
class GraphAdjacency:
    """Simple undirected graph on nodes 1..n, stored as a sorted edge tuple."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def from_matrix(cls, matrix) -> GraphAdjacency:
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(a, a.T) or np.any(np.diag(a)) or not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency must be symmetric 0/1 with zero diagonal")
        n = a.shape[0]
        return cls(n, tuple((i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if a[i, j]))

    @classmethod
    def star(cls, n: int, center: int) -> GraphAdjacency:
        return cls(n, tuple((center, v) for v in range(1, n + 1) if v != center))

    @classmethod
    def complete(cls, n: int) -> GraphAdjacency:
        return cls(n, tuple(itertools.combinations(range(1, n + 1), 2)))

    @classmethod
    def ring(cls, n: int) -> GraphAdjacency:
        return cls(n, tuple((i, i % n + 1) for i in range(1, n + 1)))

    @classmethod
    def path(cls, n: int) -> GraphAdjacency:
        return cls(n, tuple((i, i + 1) for i in range(1, n)))

    @property
    def matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges:
            a[u - 1, v - 1] = a[v - 1, u - 1] = 1
        return a

    def neighbours(self, v: int) -> list[int]:
        self._check_node(v)
        return sorted([b for a, b in self.edges if a == v] + [a for a, b in self.edges if b == v])

    def _check_node(self, v: int):
        if not 1 <= v <= self.n:
            raise ValueError(f"node {v} outside 1..{self.n}")

    def dumps(self) -> str:
        return "\n".join([str(self.n)] + [f"{u} {v}" for u, v in self.edges]) + "\n"

    @classmethod
    def loads(cls, text: str) -> GraphAdjacency:
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ValueError("empty graph file")
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v = (int(t) for t in ln.split())
            edges.append((u, v))
        return cls(n, tuple(edges))


def graph_to_stabilizers(g: GraphAdjacency) -> list[PauliString]:
    """Row i: X on node i, Z on each neighbour of i."""
    a = g.matrix
    out = []
    for i in range(g.n):
        chars = ["Z" if a[i, j] else "I" for j in range(g.n)]
        chars[i] = "X"
        out.append(PauliString("".join(chars)))
    return out


def local_complement(g: GraphAdjacency, node: int) -> GraphAdjacency:
    nbrs = g.neighbours(node)
    edges = set(g.edges)
    for u, v in itertools.combinations(nbrs, 2):
        edges ^= {(u, v)}
    return GraphAdjacency(g.n, tuple(edges))


def lc_unitary(g: GraphAdjacency, node: int) -> Circuit:
    """sqrt(X) = HSH on ``node`` and sqrt(Z) = S on each of its neighbours."""
    nbrs = g.neighbours(node)
    gates = [gate("H", node), gate("S", node), gate("H", node)] + [gate("S", v) for v in nbrs]
    return Circuit(g.n, gates)


def graph_state_circuit(g: GraphAdjacency) -> Circuit:
    """H on every node, then CZ per edge in lexicographic order."""
    gates = [gate("H", q) for q in range(1, g.n + 1)]
    for u, v in g.edges:
        gates += cz(u, v)
    return Circuit(g.n, gates)


def basis_change(p: PauliString) -> list:
    """Gates rotating each letter of ``p`` onto Z before a Z readout."""
    gates = []
    for q, c in enumerate(p.letters, start=1):
        if c == "X":
            gates.append(gate("H", q))
        elif c == "Y":
            gates += [gate("SDG", q), gate("H", q)]
    return gates


# -- parity and post-selection ------------------------------------------------

EVEN, ODD = 0, 1


@dataclass(frozen=True)
class SyndromeCheck:
    support: frozenset[int]
    expected_parity: int = EVEN

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        if not self.support:
            raise ValueError("a syndrome check needs a non-empty support")
        if self.expected_parity not in (EVEN, ODD):
            raise ValueError("expected_parity must be 0 (even) or 1 (odd)")

    def passes(self, bits: str) -> bool:
        return bitstring_parity(bits, self.support) == self.expected_parity


def bitstring_parity(bits: str, support: Iterable[int]) -> int:
    """XOR of the bits at the (1-based) support positions; 0 is even."""
    parity = 0
    for q in support:
        if not 1 <= q <= len(bits):
            raise CircuitError(f"qubit {q} outside a {len(bits)}-bit string")
        parity ^= bits[q - 1] == "1"
    return int(parity)


def postselect_histogram(h: ShotHistogram, checks: Sequence[SyndromeCheck]) -> tuple[ShotHistogram, float]:
    kept = {b: c for b, c in h.counts.items() if all(chk.passes(b) for chk in checks)}
    total = sum(kept.values())
    fraction = total / h.shots if h.shots else 0.0
    return ShotHistogram(kept, total, h.seed, h.n_qubits), fraction
