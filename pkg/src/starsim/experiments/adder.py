"""Two-bit quantum Fourier adder: |a>|b> -> |a>|a + b mod 4>.

Register a sits on qubits 1, 2 and b on qubits 3, 4, most significant bit
first. After the two-qubit QFT of b the phases are added by controlled-Z and
controlled-S gates from a; the inverse QFT needs no output swap because the
forward transform leaves b in bit-reversed order and the inverse undoes it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..circuit import Circuit, Gate, cnot, cz, gate
from ..statevector import NoiseModel, ShotHistogram
from .common import DEFAULT_SHOTS, derive, dump_csv, dump_json, fmt, noise_dict, run_on_device

A1, A2, B1, B2 = 1, 2, 3, 4


def controlled_s(c: int, t: int, dagger: bool = False) -> list[Gate]:
    """Controlled-S from T gates and two CNOTs (``dagger`` gives controlled-S^dagger)."""
    a, b = ("TDG", "T") if dagger else ("T", "TDG")
    return [gate(a, c), gate(a, t), cnot(c, t), gate(b, t), cnot(c, t)]


def qft2(q1: int = B1, q2: int = B2) -> list[Gate]:
    return [gate("H", q1), *controlled_s(q2, q1), gate("H", q2)]


def iqft2(q1: int = B1, q2: int = B2) -> list[Gate]:
    return [gate("H", q2), *controlled_s(q2, q1, dagger=True), gate("H", q1)]


def phase_add() -> list[Gate]:
    return [*cz(A1, B1), *controlled_s(A2, B1), *cz(A2, B2)]


@dataclass(frozen=True)
class AdderCase:
    """Preparation gates for the four input qubits plus the ideal outcome map."""

    name: str
    prep: tuple[Gate, ...]
    expected_output: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "prep", tuple(self.prep))
        for g in self.prep:
            if max(g.qubits) > 4:
                raise ValueError(f"prep gate {g} is outside the four adder qubits")
        total = sum(self.expected_output.values())
        if self.expected_output and abs(total - 1) > 1e-9:
            raise ValueError(f"expected outcome weights sum to {total}")

    @classmethod
    def basis(cls, a: int, b: int) -> AdderCase:
        if not (0 <= a < 4 and 0 <= b < 4):
            raise ValueError("register values must be in 0..3")
        bits = f"{a:02b}{b:02b}"
        prep = tuple(gate("X", q) for q, bit in enumerate(bits, start=1) if bit == "1")
        return cls(f"a={a},b={b}", prep, {f"{a:02b}{(a + b) % 4:02b}": 1.0})


def adder_circuit(case: AdderCase) -> Circuit:
    gates = [*case.prep, *qft2(), *phase_add(), *iqft2()]
    return Circuit(4, gates).measured("Z")


def basis_cases() -> list[AdderCase]:
    return [AdderCase.basis(a, b) for a in range(4) for b in range(4)]


def superposition_case() -> AdderCase:
    """a in (|00> + |11>)/sqrt2, b = 0."""
    return AdderCase("a=bell,b=0", (gate("H", 1), cnot(1, 2)), {"0000": 0.5, "1111": 0.5})


def entangled_target_case() -> AdderCase:
    """a = 1 and b in (|00> + |11>)/sqrt2."""
    return AdderCase("a=1,b=bell", (gate("X", 2), gate("H", 3), cnot(3, 4)), {"0100": 0.5, "0101": 0.5})


PRESETS = {
    "basis": basis_cases,
    "superposition": lambda: [superposition_case()],
    "entangled": lambda: [entangled_target_case()],
    "all": lambda: basis_cases() + [superposition_case(), entangled_target_case()],
}


@dataclass(frozen=True)
class AdderResult:
    case: AdderCase
    seed: int
    noise: NoiseModel | None
    exact: dict[str, float]
    histogram: ShotHistogram | None

    @property
    def flagged(self) -> tuple[str, ...]:
        return tuple(sorted(self.case.expected_output))

    @property
    def flagged_probability(self) -> float:
        if self.histogram is None:
            return sum(self.exact.get(b, 0.0) for b in self.flagged)
        return sum(self.histogram.probability(b) for b in self.flagged)

    @property
    def modal_correct(self) -> bool:
        src = self.exact if self.histogram is None else self.histogram.counts
        return max(src.items(), key=lambda kv: (kv[1], kv[0]))[0] in self.flagged

    def rows(self) -> list[dict]:
        src = self.exact if self.histogram is None else self.histogram.counts
        return [{"case": self.case.name, "bitstring": b, "count": c if self.histogram is not None else "",
                 "probability": fmt(self.exact.get(b, 0.0)) if self.histogram is None else fmt(c / self.histogram.shots),
                 "flag": int(b in self.flagged)}
                for b, c in sorted(src.items())]

    def to_dict(self) -> dict:
        return {
            "case": self.case.name,
            "expected": {k: fmt(v) for k, v in sorted(self.case.expected_output.items())},
            "exact": {k: fmt(v) for k, v in self.exact.items()},
            "histogram": None if self.histogram is None else self.histogram.counts,
            "flagged_probability": fmt(self.flagged_probability),
            "modal_correct": self.modal_correct,
        }


def run_adder(case: AdderCase, shots: int | None = DEFAULT_SHOTS, noise: NoiseModel | None = None,
              seed: int = 0) -> AdderResult:
    run = run_on_device(adder_circuit(case), shots, seed, noise)
    return AdderResult(case, seed, noise, run.exact, run.histogram)


def run_adder_cases(cases, shots=DEFAULT_SHOTS, noise=None, seed=0) -> list[AdderResult]:
    return [run_adder(c, shots, noise, derive(seed, i)) for i, c in enumerate(cases)]


def adder_json(results: list[AdderResult], seed: int, shots, noise) -> str:
    return dump_json({
        "config": {"experiment": "adder", "shots": shots, "noise": noise_dict(noise)},
        "seed": seed,
        "cases": [r.to_dict() for r in results],
        "flags": {"modal_correct": sum(r.modal_correct for r in results), "cases": len(results)},
    })


def adder_csv(results: list[AdderResult]) -> str:
    rows = [row for r in results for row in r.rows()]
    return dump_csv(["case", "bitstring", "count", "probability", "flag"], rows)
