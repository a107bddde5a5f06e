"""Exact state evolution, seeded shot sampling and Pauli-trajectory noise.

Random streams
--------------
Shots are processed in fixed blocks of ``BLOCK_SHOTS``. Block ``b`` of a run
seeded with ``seed`` draws from ``PCG64(SeedSequence([seed, b, stream]))``
where ``stream`` separates outcome sampling, gate noise and readout flips.
Blocks are independent, so any split of blocks across workers reproduces the
serial histogram exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import GATE_MATRICES, Circuit, CircuitError, Gate

BLOCK_SHOTS = 4096
_SAMPLE, _NOISE, _READOUT = 0, 1, 2

_PAULIS = ("I", "X", "Y", "Z")


def zero_state(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1.0
    return psi


def num_qubits(state: np.ndarray) -> int:
    n = int(state.shape[-1]).bit_length() - 1
    if 2**n != state.shape[-1]:
        raise ValueError(f"state length {state.shape[-1]} is not a power of two")
    return n


def _apply_1q(tensor: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    shape = tensor.shape
    lead = int(np.prod(shape[:axis], dtype=np.int64))
    t = np.ascontiguousarray(tensor).reshape(lead, 2, -1)
    out = np.empty_like(t, dtype=np.result_type(t, matrix))
    (a, b), (c, d) = matrix
    if b == 0 and c == 0:  # diagonal: phases only
        out[:, 0] = t[:, 0] if a == 1 else a * t[:, 0]
        out[:, 1] = d * t[:, 1]
    else:
        out[:, 0] = a * t[:, 0] + b * t[:, 1]
        out[:, 1] = c * t[:, 0] + d * t[:, 1]
    return out.reshape(shape)


def _apply_cnot(tensor: np.ndarray, c_axis: int, t_axis: int) -> np.ndarray:
    out = tensor.copy()
    sel = [slice(None)] * tensor.ndim
    sel[c_axis] = 1
    sel = tuple(sel)
    # the control axis disappears from the slice
    flip_axis = t_axis - 1 if t_axis > c_axis else t_axis
    out[sel] = np.flip(tensor[sel], axis=flip_axis)
    return out


def _apply_tensor(tensor: np.ndarray, g: Gate, offset: int = 0) -> np.ndarray:
    """Apply ``g`` to a ``(..., 2, 2, ..., 2)`` tensor; ``offset`` leading batch axes."""
    if g.is_two_qubit:
        c, t = g.qubits
        return _apply_cnot(tensor, offset + c - 1, offset + t - 1)
    return _apply_1q(tensor, GATE_MATRICES[g.kind], offset + g.qubits[0] - 1)


def apply_gate(state: np.ndarray, g: Gate) -> np.ndarray:
    n = num_qubits(state)
    if max(g.qubits) > n:
        raise CircuitError(f"{g} is outside a {n}-qubit state")
    return _apply_tensor(state.reshape((2,) * n), g).reshape(-1)


def run_ideal(circuit: Circuit) -> np.ndarray:
    """Evolve |0...0> through the circuit; X-basis tags add their trailing H."""
    n = circuit.qubit_count
    psi = zero_state(n).reshape((2,) * n)
    for g in circuit.expanded().gates:
        psi = _apply_tensor(psi, g)
    return psi.reshape(-1)


def probabilities(state: np.ndarray) -> np.ndarray:
    return np.abs(state) ** 2


def exact_distribution(state: np.ndarray, cutoff: float = 1e-15) -> dict[str, float]:
    n = num_qubits(state)
    p = probabilities(state)
    return {format(i, f"0{n}b"): float(p[i]) for i in np.flatnonzero(p > cutoff)}


def standard_error(p: float, shots: int) -> float:
    """Binomial sampling error sqrt(p (1 - p) / shots)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    if shots < 1:
        raise ValueError("shots must be positive")
    return math.sqrt(p * (1.0 - p) / shots)


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing after each gate plus independent readout bit flips."""

    p1: float = 0.002
    p2: float = 0.03
    p_readout: float = 0.05

    def __post_init__(self):
        for name in ("p1", "p2", "p_readout"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    @classmethod
    def ideal(cls) -> NoiseModel:
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def parse(cls, text: str) -> NoiseModel:
        """Parse ``p1=0.001,p2=0.02,ro=0.03``; unspecified keys keep defaults."""
        aliases = {"p1": "p1", "p2": "p2", "ro": "p_readout", "p_readout": "p_readout", "readout": "p_readout"}
        values = {}
        for part in filter(None, (s.strip() for s in text.split(","))):
            key, sep, val = part.partition("=")
            if not sep or key.strip() not in aliases:
                raise ValueError(f"bad noise setting {part!r}; expected p1=, p2=, ro=")
            values[aliases[key.strip()]] = float(val)
        return cls(**values)

    @property
    def is_ideal(self) -> bool:
        return self.p1 == 0 and self.p2 == 0 and self.p_readout == 0

    def as_dict(self) -> dict:
        return {"p1": self.p1, "p2": self.p2, "p_readout": self.p_readout}


DEFAULT_NOISE = NoiseModel()


@dataclass(frozen=True)
class ShotHistogram:
    counts: dict[str, int]
    shots: int
    seed: int | None = None
    n_qubits: int = field(default=0)

    def __post_init__(self):
        counts = {k: int(v) for k, v in sorted(self.counts.items()) if v}
        widths = {len(k) for k in counts}
        if len(widths) > 1:
            raise ValueError("bitstrings of mixed length")
        n = self.n_qubits or (widths.pop() if widths else 0)
        if counts and len(next(iter(counts))) != n:
            raise ValueError("bitstring length disagrees with n_qubits")
        if sum(counts.values()) != self.shots:
            raise ValueError(f"counts sum to {sum(counts.values())}, expected {self.shots}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def from_indices(cls, indices: np.ndarray, n: int, seed: int | None = None) -> ShotHistogram:
        tally = np.bincount(indices, minlength=2**n)
        counts = {format(i, f"0{n}b"): int(tally[i]) for i in np.flatnonzero(tally)}
        return cls(counts, int(len(indices)), seed, n)

    def probability(self, bits: str) -> float:
        return self.counts.get(bits, 0) / self.shots if self.shots else 0.0

    def probabilities(self) -> dict[str, float]:
        return {k: v / self.shots for k, v in self.counts.items()}

    def most_common(self) -> str:
        return max(self.counts.items(), key=lambda kv: (kv[1], kv[0]))[0]

    def marginal(self, qubits: list[int]) -> ShotHistogram:
        out: dict[str, int] = {}
        for bits, c in self.counts.items():
            key = "".join(bits[q - 1] for q in qubits)
            out[key] = out.get(key, 0) + c
        return ShotHistogram(out, self.shots, self.seed, len(qubits))

    def rows(self) -> list[dict]:
        rows = []
        for bits, c in self.counts.items():
            p = c / self.shots
            rows.append({"bitstring": bits, "count": c, "probability": p, "se": standard_error(p, self.shots)})
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["bitstring", "count", "probability", "se"], lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow({**row, "probability": f"{row['probability']:.6f}", "se": f"{row['se']:.6f}"})
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"shots": self.shots, "seed": self.seed, "counts": self.counts}, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> ShotHistogram:
        data = json.loads(text)
        return cls(data["counts"], data["shots"], data.get("seed"))


def _block_rng(seed: int, block: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & (2**64 - 1), block, stream])))


def _blocks(shots: int):
    for b, start in enumerate(range(0, shots, BLOCK_SHOTS)):
        yield b, min(BLOCK_SHOTS, shots - start)


def _sample_rows(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF sampling; ``cdf`` is (dim,) or (m, dim), ``u`` is (m,)."""
    if cdf.ndim == 1:
        idx = np.searchsorted(cdf, u, side="right")
    else:
        idx = (cdf <= u[:, None]).sum(axis=1)
    return np.minimum(idx, cdf.shape[-1] - 1)


def _check_shots(shots: int):
    if shots < 1:
        raise ValueError("shots must be at least 1")


def sample_counts(state: np.ndarray, shots: int, seed: int) -> ShotHistogram:
    _check_shots(shots)
    n = num_qubits(state)
    cdf = np.cumsum(probabilities(state))
    cdf /= cdf[-1]
    indices = [_sample_rows(cdf, _block_rng(seed, b, _SAMPLE).random(m)) for b, m in _blocks(shots)]
    return ShotHistogram.from_indices(np.concatenate(indices), n, seed)


def _pauli_kick(batch: np.ndarray, qubits: tuple[int, ...], codes: np.ndarray, offset: int = 1) -> np.ndarray:
    """Apply Pauli ``codes`` (base-4 digits, first qubit most significant) row-wise."""
    n_ops = len(qubits)
    for j, q in enumerate(qubits):
        digit = (codes // 4 ** (n_ops - 1 - j)) % 4
        for k in (1, 2, 3):
            rows = np.flatnonzero(digit == k)
            if rows.size:
                batch[rows] = _apply_1q(batch[rows], GATE_MATRICES[_PAULIS[k]], offset + q - 1)
    return batch


def _error_codes(ops, m: int, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """(m, len(ops)) Pauli codes, 0 meaning no error; draws a fixed amount per gate."""
    codes = np.zeros((m, len(ops)), dtype=np.int8)
    for k, g in enumerate(ops):
        p = noise.p2 if g.is_two_qubit else noise.p1
        hit = rng.random(m) < p
        draw = rng.integers(1, 16 if g.is_two_qubit else 4, size=m)
        codes[:, k] = np.where(hit, draw, 0)
    return codes


def _trajectory_block(ops, n: int, m: int, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """Final states of ``m`` trajectories; identical error patterns are simulated once."""
    codes = _error_codes(ops, m, noise, rng)
    if not ops:
        return np.repeat(zero_state(n)[None, :], m, axis=0)
    rows = np.ascontiguousarray(codes).view(np.dtype((np.void, codes.shape[1]))).reshape(-1)
    _, first, inverse = np.unique(rows, return_index=True, return_inverse=True)
    patterns = codes[first]
    u = len(patterns)
    batch = np.zeros((u,) + (2,) * n, dtype=complex)
    batch[(slice(None),) + (0,) * n] = 1.0
    for k, g in enumerate(ops):
        batch = _apply_tensor(batch, g, offset=1)
        col = patterns[:, k].astype(np.int64)
        if col.any():
            batch = _pauli_kick(batch, g.qubits, col)
    return batch.reshape(u, -1)[np.asarray(inverse).reshape(-1)]


def run_noisy_shots(circuit: Circuit, noise: NoiseModel, shots: int, seed: int) -> ShotHistogram:
    """One Monte-Carlo Pauli trajectory per shot, then readout flips.

    Every qubit is read out; untagged qubits are read in Z. With zero gate
    noise the outcome stream matches :func:`sample_counts` bit for bit.
    """
    _check_shots(shots)
    n = circuit.qubit_count
    ops = circuit.expanded().gates
    noiseless_gates = noise.p1 == 0 and noise.p2 == 0
    if noiseless_gates:
        cdf = np.cumsum(probabilities(run_ideal(circuit)))
        cdf /= cdf[-1]
    chunks = []
    for b, m in _blocks(shots):
        if noiseless_gates:
            idx = _sample_rows(cdf, _block_rng(seed, b, _SAMPLE).random(m))
        else:
            states = _trajectory_block(ops, n, m, noise, _block_rng(seed, b, _NOISE))
            cdf_rows = np.cumsum(np.abs(states) ** 2, axis=1)
            cdf_rows /= cdf_rows[:, -1:]
            idx = _sample_rows(cdf_rows, _block_rng(seed, b, _SAMPLE).random(m))
        flips = _block_rng(seed, b, _READOUT).random((m, n)) < noise.p_readout
        mask = (flips.astype(np.int64) << np.arange(n - 1, -1, -1)).sum(axis=1)
        chunks.append(idx ^ mask)
    return ShotHistogram.from_indices(np.concatenate(chunks), n, seed)


def run_shots(circuit: Circuit, shots: int, seed: int, noise: NoiseModel | None = None) -> ShotHistogram:
    if noise is None:
        return sample_counts(run_ideal(circuit), shots, seed)
    return run_noisy_shots(circuit, noise, shots, seed)


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic child seed for sub-runs of an experiment."""
    return int(np.random.SeedSequence([seed & (2**64 - 1), *keys]).generate_state(1, np.uint64)[0])
