"""Local-complementation orbits of five-qubit graph states.

Each step complements the current graph at one node and appends the matching
local unitary to the circuit; the stabilizers of the new graph are then read
one at a time by rotating every X (or Y) letter onto Z.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..circuit import Circuit
from ..stabilizer import (
    GraphAdjacency,
    PauliString,
    basis_change,
    graph_state_circuit,
    graph_to_stabilizers,
    lc_unitary,
    local_complement,
    pauli_expectation,
)
from ..statevector import NoiseModel, run_ideal, standard_error
from .common import DEFAULT_SHOTS, derive, dump_csv, dump_json, fmt, noise_dict, parity_expectation, run_on_device

PRESETS = {
    "star-orbit": (GraphAdjacency.star(5, 3), (3, 1)),
    "loop-orbit": (GraphAdjacency.ring(5), (5, 3)),
}


@dataclass(frozen=True)
class OrbitStep:
    index: int
    graph: GraphAdjacency
    lc_node: int | None
    stabilizers: tuple[PauliString, ...]
    stabilizer_parities: tuple[float, ...]
    oracle_signs: tuple[int, ...]
    shots: int | None = None

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if p > 0 else -1 for p in self.stabilizer_parities)

    @property
    def matches_oracle(self) -> bool:
        return self.signs == self.oracle_signs


def orbit_circuits(initial: GraphAdjacency, steps) -> list[tuple[GraphAdjacency, int | None, Circuit]]:
    """(graph, node, state-prep circuit) after 0, 1, ... complementations."""
    g, circ = initial, graph_state_circuit(initial)
    out = [(g, None, circ)]
    for v in steps:
        circ = circ.extend(lc_unitary(g, v).gates)
        g = local_complement(g, v)
        out.append((g, v, circ))
    return out


def _measure_circuit(prep: Circuit, stab: PauliString) -> Circuit:
    return prep.extend(basis_change(stab)).measured({q: "Z" for q in stab.support})


def graph_orbit_run(
    initial: GraphAdjacency,
    steps,
    shots: int | None = DEFAULT_SHOTS,
    noise: NoiseModel | None = None,
    seed: int = 0,
) -> list[OrbitStep]:
    out = []
    for k, (g, v, prep) in enumerate(orbit_circuits(initial, steps)):
        state = run_ideal(prep)
        stabs = tuple(graph_to_stabilizers(g))
        parities, oracle = [], []
        for j, s in enumerate(stabs):
            run = run_on_device(_measure_circuit(prep, s), shots, derive(seed, k, j), noise)
            dist = run.exact if shots is None else run.histogram.counts
            parities.append(parity_expectation(dist, s.support))
            oracle.append(1 if pauli_expectation(state, s) > 0 else -1)
        out.append(OrbitStep(k, g, v, stabs, tuple(parities), tuple(oracle), shots))
    return out


def orbit_rows(steps: list[OrbitStep]) -> list[dict]:
    rows = []
    for st in steps:
        for s, p, o in zip(st.stabilizers, st.stabilizer_parities, st.oracle_signs):
            se = 0.0 if st.shots is None else 2 * standard_error((1 + max(-1.0, min(1.0, p))) / 2, st.shots)
            rows.append({"step": st.index, "lc_node": "" if st.lc_node is None else st.lc_node,
                         "stabilizer": str(s), "parity": fmt(p), "se": fmt(se), "oracle": o})
    return rows


def orbit_csv(steps: list[OrbitStep]) -> str:
    return dump_csv(["step", "lc_node", "stabilizer", "parity", "se", "oracle"], orbit_rows(steps))


def orbit_json(steps: list[OrbitStep], seed: int, shots, noise, preset: str | None = None) -> str:
    return dump_json({
        "config": {"experiment": "graph", "preset": preset, "shots": shots, "noise": noise_dict(noise)},
        "seed": seed,
        "steps": [{"step": st.index, "lc_node": st.lc_node, "edges": [list(e) for e in st.graph.edges],
                   "matches_oracle": st.matches_oracle} for st in steps],
        "rows": orbit_rows(steps),
        "flags": {"all_match": all(st.matches_oracle for st in steps)},
    })
