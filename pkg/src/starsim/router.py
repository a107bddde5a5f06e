"""Compile circuits onto a directional coupling map.

Greedy policy: a CNOT whose operands are coupled the wrong way round is
Hadamard-conjugated; operands that are not coupled at all get the target
swapped one hop at a time along a shortest path until they touch. Swaps are
never undone; the final logical->physical layout is reported instead.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import (
    DEFAULT_DEVICE,
    Circuit,
    CircuitError,
    DeviceModel,
    Gate,
    circuit_unitary,
    cnot,
    gate,
    permutation_matrix,
    phase_distance,
)


@dataclass(frozen=True)
class QubitPermutation:
    """``mapping[i-1]`` is the physical position holding logical qubit ``i``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(p) for p in self.mapping))
        if sorted(self.mapping) != list(range(1, len(self.mapping) + 1)):
            raise ValueError(f"{self.mapping} is not a permutation of 1..{len(self.mapping)}")

    @classmethod
    def identity(cls, n: int) -> QubitPermutation:
        return cls(tuple(range(1, n + 1)))

    def __getitem__(self, logical: int) -> int:
        return self.mapping[logical - 1]

    def __len__(self) -> int:
        return len(self.mapping)

    def inverse(self) -> QubitPermutation:
        inv = [0] * len(self.mapping)
        for logical, physical in enumerate(self.mapping, start=1):
            inv[physical - 1] = logical
        return QubitPermutation(tuple(inv))

    def logical_bits(self, physical_bits: str, keep: int | None = None) -> str:
        """Read a physical bitstring back in logical order, optionally truncated."""
        keep = len(self.mapping) if keep is None else keep
        return "".join(physical_bits[self.mapping[i] - 1] for i in range(keep))

    def output_order(self) -> tuple[int, ...]:
        """Logical qubit found at each physical position."""
        return self.inverse().mapping

    def to_json(self) -> str:
        return json.dumps(list(self.mapping))


def reverse_cnot(control: int, target: int, device: DeviceModel = DEFAULT_DEVICE) -> list[Gate]:
    if device.allows(control, target):
        return [cnot(control, target)]
    if not device.allows(target, control):
        raise CircuitError(f"neither CNOT({control},{target}) nor its reverse is available")
    return [gate("H", control), gate("H", target), cnot(target, control), gate("H", control), gate("H", target)]


def _legal_cnot(a: int, b: int, device: DeviceModel) -> list[Gate]:
    return reverse_cnot(a, b, device)


def shortest_path(a: int, b: int, device: DeviceModel) -> list[int]:
    prev = {a: None}
    queue = deque([a])
    while queue:
        q = queue.popleft()
        if q == b:
            break
        for nb in device.neighbours(q):
            if nb not in prev:
                prev[nb] = q
                queue.append(nb)
    if b not in prev:
        raise CircuitError(f"qubits {a} and {b} are disconnected on this device")
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def _adjacent_swap(a: int, b: int, device: DeviceModel) -> list[Gate]:
    x, y = (a, b) if device.allows(a, b) else (b, a)
    return [cnot(x, y), *reverse_cnot(y, x, device), cnot(x, y)]


def swap_chain(a: int, b: int, device: DeviceModel = DEFAULT_DEVICE) -> list[Gate]:
    """Device-legal gates equal to SWAP(a, b) up to global phase."""
    if a == b:
        raise CircuitError("swap_chain needs two distinct qubits")
    path = shortest_path(a, b, device)
    hops = list(zip(path, path[1:]))
    order = hops + hops[-2::-1]
    out: list[Gate] = []
    for u, v in order:
        out += _adjacent_swap(u, v, device)
    return out


def cancel_adjacent_inverses(gates: Sequence[Gate]) -> list[Gate]:
    """Drop gate pairs g, g^-1 with nothing touching their qubits in between."""
    out: list[Gate] = []
    last: dict[int, int] = {}  # qubit -> index in out of last gate touching it
    for g in gates:
        idx = {last.get(q) for q in g.qubits}
        if len(idx) == 1 and None not in idx:
            j = idx.pop()
            prev = out[j]
            if prev is not None and prev.qubits == g.qubits and prev.inverse() == g:
                out[j] = None
                for q in g.qubits:
                    # rewind to the previous surviving gate on q
                    k = j - 1
                    while k >= 0 and (out[k] is None or q not in out[k].qubits):
                        k -= 1
                    if k >= 0:
                        last[q] = k
                    else:
                        last.pop(q, None)
                continue
        out.append(g)
        for q in g.qubits:
            last[q] = len(out) - 1
    return [g for g in out if g is not None]


def route_circuit(
    circuit: Circuit,
    device: DeviceModel = DEFAULT_DEVICE,
    initial_layout: Sequence[int] | None = None,
    optimize: bool = True,
) -> tuple[Circuit, QubitPermutation]:
    """Return a device-legal circuit and the final logical->physical layout.

    With ``P_f`` the permutation matrix of the returned layout and ``P_0`` that
    of ``initial_layout`` (identity by default), ``U_routed @ P_0 == P_f @ U``
    up to global phase, ``U`` being the circuit padded to the device size.
    """
    n = device.qubit_count
    if circuit.qubit_count > n:
        raise CircuitError(f"circuit needs {circuit.qubit_count} qubits, device has {n}")
    l2p = list(initial_layout) if initial_layout is not None else list(range(1, n + 1))
    if len(l2p) == circuit.qubit_count < n:
        l2p += sorted(set(range(1, n + 1)) - set(l2p))
    QubitPermutation(tuple(l2p))
    p2l = {p: l for l, p in enumerate(l2p, start=1)}

    out: list[Gate] = []
    for g in circuit.gates:
        if not g.is_two_qubit:
            out.append(Gate(g.kind, (l2p[g.qubits[0] - 1],)))
            continue
        lc, lt = g.qubits
        pc, pt = l2p[lc - 1], l2p[lt - 1]
        if not device.coupled(pc, pt):
            path = shortest_path(pt, pc, device)
            for here, nxt in zip(path, path[1:-1]):
                out += _adjacent_swap(here, nxt, device)
                a, b = p2l[here], p2l[nxt]
                p2l[here], p2l[nxt] = b, a
                l2p[a - 1], l2p[b - 1] = nxt, here
            pt = l2p[lt - 1]
        out += _legal_cnot(pc, pt, device)

    if optimize:
        out = cancel_adjacent_inverses(out)
    tags: list[str | None] = [None] * n
    for logical, basis in enumerate(circuit.measure, start=1):
        tags[l2p[logical - 1] - 1] = basis
    return Circuit(n, out, tuple(tags)), QubitPermutation(tuple(l2p))


def routing_deviation(
    original: Circuit,
    routed: Circuit,
    layout: QubitPermutation,
    initial_layout: Sequence[int] | None = None,
) -> float:
    """Max elementwise gap between ``U_routed P_0`` and ``P_f U`` after the best phase."""
    n = routed.qubit_count
    u = circuit_unitary(original.without_measurements().padded(n))
    u_r = circuit_unitary(routed.without_measurements())
    p0 = permutation_matrix(initial_layout) if initial_layout is not None else np.eye(2**n)
    return phase_distance(u_r @ p0, permutation_matrix(layout.mapping) @ u)
