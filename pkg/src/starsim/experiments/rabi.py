"""Logical Rabi oscillations on the distance-2 surface code.

The pre-encoded qubit (3) is rotated by ``H T^n H`` so that n steps give
P(0) = cos^2(n pi / 8); an eight-step cycle returns to |0>. Encoding then copies
it into alpha|+++> + beta|---> on qubits 1, 3, 5, threads a linear cluster
through 1-2-3-4-5 and finishes with H on 1, 3, 5.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..circuit import DEFAULT_DEVICE, Circuit, DeviceModel, cnot, cz, gate
from ..stabilizer import PauliString, SyndromeCheck, postselect_histogram
from ..statevector import NoiseModel, ShotHistogram, standard_error
from .common import DEFAULT_SHOTS, derive, dump_csv, dump_json, fmt, noise_dict, run_on_device

MODES = ("bare", "encoded_raw", "encoded_postselected")
MAX_STEPS = 8

STABILIZERS = {
    "K1": PauliString("ZIZZI"),
    "K2": PauliString("IZZIZ"),
    "K3": PauliString("XXXII"),
    "K4": PauliString("IIXXX"),
}
LOGICAL_Z = PauliString("ZZIII")
LOGICAL_X = PauliString("XIIXI")

# readout recipe per basis: (logical parity support, syndrome supports)
_READOUT = {
    "Z": ((1, 2), ((1, 3, 4), (2, 3, 5))),
    "X": ((1, 4), ((1, 2, 3), (3, 4, 5))),
}


def _check_steps(n: int):
    if not 0 <= n <= MAX_STEPS:
        raise ValueError(f"rotation steps must be in 0..{MAX_STEPS}, got {n}")


def rotation_gates(n: int, qubit: int = 1, basis: str = "Z") -> list:
    """``H T^n H`` for the Z-basis curve; ``T^n H`` (a logical H later) for X."""
    _check_steps(n)
    body = [gate("H", qubit)] + [gate("T", qubit)] * n
    return body + [gate("H", qubit)] if basis == "Z" else body


def encode_surface_code(theta_steps: int, basis: str = "Z") -> Circuit:
    """Five-qubit circuit preparing the rotated logical state, no measurements."""
    if basis not in _READOUT:
        raise ValueError(f"basis must be Z or X, got {basis!r}")
    g = rotation_gates(theta_steps, 3, basis)
    g += [cnot(3, 1), cnot(3, 5)]
    g += [gate("H", q) for q in (1, 3, 5)]
    g += [gate("H", q) for q in (2, 4)]
    for a, b in ((1, 2), (2, 3), (4, 3), (4, 5)):
        g += cz(a, b)
    g += [gate("H", q) for q in (1, 3, 5)]
    return Circuit(5, g)


def logical_hadamard(circuit: Circuit) -> Circuit:
    """Transversal H; the accompanying 2<->4 swap is a relabelling left to the reader."""
    return circuit.extend(gate("H", q) for q in range(1, 6))


def bare_circuit(theta_steps: int) -> Circuit:
    return Circuit(1, rotation_gates(theta_steps)).measured("Z")


@dataclass(frozen=True)
class RabiPoint:
    n_steps: int
    mode: str
    p_logical_zero: float
    retained_fraction: float
    se: float
    shots: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0.0 <= self.p_logical_zero <= 1.0 + 1e-12:
            raise ValueError(f"probability {self.p_logical_zero} outside [0, 1]")


def _logical_zero(dist: dict, support) -> float:
    total = sum(dist.values())
    if not total:
        return 0.0
    even = sum(w for bits, w in dist.items() if sum(bits[q - 1] == "1" for q in support) % 2 == 0)
    return even / total


def _encoded_points(n: int, modes, dist: dict, shots: int | None, basis: str) -> list[RabiPoint]:
    logical, syndromes = _READOUT[basis]
    checks = [SyndromeCheck(s) for s in syndromes]
    out = []
    for mode in modes:
        if mode == "encoded_raw":
            kept, frac = dist, 1.0
        else:
            kept = {b: w for b, w in dist.items() if all(c.passes(b) for c in checks)}
            total = sum(dist.values())
            frac = sum(kept.values()) / total if total else 0.0
        p = _logical_zero(kept, logical)
        if shots is None:
            se = 0.0
        else:
            n_kept = int(round(sum(kept.values())))
            se = standard_error(p, n_kept) if n_kept else 0.0
        out.append(RabiPoint(n, mode, p, frac, se, shots))
    return out


def rabi_point_set(
    n: int,
    modes=MODES,
    shots: int | None = DEFAULT_SHOTS,
    noise: NoiseModel | None = None,
    seed: int = 0,
    basis: str = "Z",
    device: DeviceModel = DEFAULT_DEVICE,
) -> list[RabiPoint]:
    """All requested modes at one rotation step; encoded modes share one run."""
    points = []
    if "bare" in modes:
        run = run_on_device(bare_circuit(n), shots, derive(seed, n, 0), noise, device)
        dist = run.exact if shots is None else run.histogram.counts
        p = _logical_zero(dist, (1,))
        se = 0.0 if shots is None else standard_error(p, shots)
        points.append(RabiPoint(n, "bare", p, 1.0, se, shots))
    enc = [m for m in modes if m != "bare"]
    if enc:
        circ = encode_surface_code(n, basis).measured(basis)
        run = run_on_device(circ, shots, derive(seed, n, 1), noise, device)
        dist = run.exact if shots is None else run.histogram.counts
        points += _encoded_points(n, enc, dist, shots, basis)
    return points


def rabi_curve(
    mode: str = "encoded_postselected",
    shots: int | None = DEFAULT_SHOTS,
    noise: NoiseModel | None = None,
    seed: int = 0,
    basis: str = "Z",
    device: DeviceModel = DEFAULT_DEVICE,
) -> list[RabiPoint]:
    """Nine points n = 0..8 for one mode. ``shots=None`` gives exact values."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    return [rabi_point_set(n, (mode,), shots, noise, seed, basis, device)[0] for n in range(MAX_STEPS + 1)]


def rabi_all_modes(shots=DEFAULT_SHOTS, noise=None, seed=0, basis="Z", device=DEFAULT_DEVICE) -> list[RabiPoint]:
    pts = []
    for n in range(MAX_STEPS + 1):
        pts += rabi_point_set(n, MODES, shots, noise, seed, basis, device)
    return sorted(pts, key=lambda p: (MODES.index(p.mode), p.n_steps))


def ideal_curve() -> np.ndarray:
    return np.cos(np.arange(MAX_STEPS + 1) * math.pi / 8) ** 2


def fit_visibility(n_steps, probs) -> tuple[float, float]:
    """Least-squares fit of ``p = c + (V/2) cos(n pi / 4)``; returns ``(V, c)``."""
    n = np.asarray(n_steps, dtype=float)
    design = np.column_stack([np.ones_like(n), 0.5 * np.cos(n * math.pi / 4)])
    (c, v), *_ = np.linalg.lstsq(design, np.asarray(probs, dtype=float), rcond=None)
    return float(v), float(c)


def curve_visibility(points: list[RabiPoint]) -> float:
    return fit_visibility([p.n_steps for p in points], [p.p_logical_zero for p in points])[0]


def rabi_report(points: list[RabiPoint], seed: int, shots, noise, basis: str = "Z") -> dict:
    ideal = ideal_curve()
    vis = {}
    for mode in MODES:
        sub = [p for p in points if p.mode == mode]
        if sub:
            vis[mode] = fmt(curve_visibility(sub))
    return {
        "config": {"experiment": "rabi", "shots": shots, "noise": noise_dict(noise), "basis": basis},
        "seed": seed,
        "points": [
            {**asdict(p), "p_logical_zero": fmt(p.p_logical_zero), "se": fmt(p.se),
             "retained_fraction": fmt(p.retained_fraction), "ideal": fmt(ideal[p.n_steps])}
            for p in points
        ],
        "visibility": vis,
    }


def rabi_json(points, seed, shots, noise, basis="Z") -> str:
    return dump_json(rabi_report(points, seed, shots, noise, basis))


def rabi_csv(points: list[RabiPoint]) -> str:
    ideal = ideal_curve()
    rows = [
        {"n": p.n_steps, "mode": p.mode, "p": fmt(p.p_logical_zero), "se": fmt(p.se),
         "retained_fraction": fmt(p.retained_fraction), "ideal": fmt(ideal[p.n_steps])}
        for p in points
    ]
    return dump_csv(["n", "mode", "p", "se", "retained_fraction", "ideal"], rows)


def postselected_histogram(h: ShotHistogram, basis: str = "Z") -> tuple[ShotHistogram, float]:
    return postselect_histogram(h, [SyndromeCheck(s) for s in _READOUT[basis][1]])
