"""Shared plumbing: run a logical circuit on the device and read results back."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from ..circuit import DEFAULT_DEVICE, Circuit, DeviceModel
from ..router import QubitPermutation, route_circuit
from ..statevector import NoiseModel, ShotHistogram, derive_seed, exact_distribution, run_ideal, run_shots

DEFAULT_SHOTS = 8192
derive = derive_seed


@dataclass(frozen=True)
class DeviceRun:
    """Outcome of one circuit on the device, already in logical bit order."""

    routed: Circuit
    layout: QubitPermutation
    histogram: ShotHistogram | None
    exact: dict[str, float]


def _to_logical(dist: dict, layout: QubitPermutation, keep: int) -> dict:
    out: dict = {}
    for bits, v in dist.items():
        key = layout.logical_bits(bits, keep)
        out[key] = out.get(key, 0) + v
    return out


def run_on_device(
    circuit: Circuit,
    shots: int | None = DEFAULT_SHOTS,
    seed: int = 0,
    noise: NoiseModel | None = None,
    device: DeviceModel = DEFAULT_DEVICE,
) -> DeviceRun:
    """Route, simulate, and relabel outcomes to the circuit's own qubit order.

    ``shots=None`` skips sampling and only returns the exact distribution.
    ``noise=None`` samples the ideal state.
    """
    routed, layout = route_circuit(circuit, device)
    keep = circuit.qubit_count
    exact = _to_logical(exact_distribution(run_ideal(routed)), layout, keep)
    hist = None
    if shots is not None:
        raw = run_shots(routed, shots, seed, noise)
        hist = ShotHistogram(_to_logical(raw.counts, layout, keep), raw.shots, seed, keep)
    return DeviceRun(routed, layout, hist, dict(sorted(exact.items())))


def parity_expectation(dist: dict, support) -> float:
    """Signed parity <(-1)^(xor of bits)> of a probability or count map."""
    total = sum(dist.values())
    if not total:
        return 0.0
    acc = 0.0
    for bits, w in dist.items():
        acc += w * (-1) ** sum(bits[q - 1] == "1" for q in support)
    return acc / total


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def dump_csv(fieldnames: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def fmt(x: float) -> str:
    """Fixed-width float text so reports are byte-stable."""
    return f"{float(x):.10f}"


def noise_dict(noise: NoiseModel | None) -> dict | None:
    return None if noise is None else noise.as_dict()


def seeds_for(seed: int, count: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count, np.uint32)]
