import numpy as np
import pytest
from hypothesis import given, settings

from conftest import circuits
from starsim.circuit import (
    DEFAULT_DEVICE,
    GATE_MATRICES,
    Circuit,
    CircuitError,
    CircuitParseError,
    DeviceModel,
    Gate,
    circuit_unitary,
    cnot,
    dumps,
    gate,
    invert_circuit,
    loads,
    permutation_matrix,
    validate_against_device,
)
from starsim.experiments.rabi import encode_surface_code
from starsim.statevector import run_ideal, zero_state


def test_gate_conventions():
    T, S, Z = GATE_MATRICES["T"], GATE_MATRICES["S"], GATE_MATRICES["Z"]
    np.testing.assert_allclose(T @ T, S, atol=1e-12)
    np.testing.assert_allclose(S @ S, Z, atol=1e-12)
    np.testing.assert_allclose(GATE_MATRICES["H"] @ GATE_MATRICES["H"], np.eye(2), atol=1e-12)


@pytest.mark.parametrize("bad", [("CNOT", (1, 1)), ("H", (1, 2)), ("CNOT", (1,)), ("RX", (1,)), ("H", (0,))])
def test_gate_validation(bad):
    with pytest.raises(CircuitError):
        Gate(*bad)


def test_validate_against_device():
    assert validate_against_device(Circuit(5, [cnot(1, 3)])) == []
    report = validate_against_device(Circuit(5, [gate("H", 1), cnot(3, 1)]))
    assert [v.index for v in report] == [1]
    assert validate_against_device(Circuit(5, [gate("H", 2), gate("T", 4)])) == []
    assert DEFAULT_DEVICE.allowed_cnots == frozenset({(1, 3), (2, 3), (4, 3), (5, 3)})


def test_validate_is_total_on_small_device():
    dev = DeviceModel(2, frozenset({(1, 2)}))
    assert len(validate_against_device(Circuit(2, [cnot(2, 1)] * 3), dev)) == 3


def test_unitary_examples():
    np.testing.assert_allclose(circuit_unitary(Circuit(1)), np.eye(2))
    np.testing.assert_allclose(circuit_unitary(Circuit(1, [gate("H", 1)] * 2)), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(circuit_unitary(Circuit(1, [gate("T", 1)] * 8)), np.eye(2), atol=1e-12)


def test_unitary_guards():
    with pytest.raises(CircuitError):
        circuit_unitary(Circuit(1, [gate("H", 1)]).measured("Z"))
    with pytest.raises(CircuitError):
        circuit_unitary(Circuit(11))


def test_cnot_matrix_bit_order():
    # qubit 1 is the most significant bit
    u = circuit_unitary(Circuit(2, [cnot(1, 2)]))
    assert u[0b11, 0b10] == 1 and u[0b10, 0b11] == 1


def test_invert_examples():
    assert invert_circuit(Circuit(1, [gate("T", 1)])).gates == (gate("TDG", 1),)
    c = Circuit(3, [gate("H", 1), gate("S", 2), cnot(1, 3)])
    assert invert_circuit(c).gates == (cnot(1, 3), gate("SDG", 2), gate("H", 1))
    with pytest.raises(CircuitError):
        invert_circuit(c.measured("Z"))


def test_encode_then_invert_returns_zero():
    enc = encode_surface_code(3)
    psi = run_ideal(enc.extend(invert_circuit(enc).gates))
    np.testing.assert_allclose(np.abs(psi), np.abs(zero_state(5)), atol=1e-12)


@settings(max_examples=200)
@given(circuits(max_qubits=5, max_gates=12))
def test_inverse_property(c):
    u = circuit_unitary(c)
    np.testing.assert_allclose(circuit_unitary(invert_circuit(c)) @ u, np.eye(2**c.qubit_count), atol=1e-9)


@given(circuits(max_qubits=4, max_gates=10))
def test_unitarity(c):
    u = circuit_unitary(c)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(2**c.qubit_count), atol=1e-10)


def test_text_round_trip():
    c = Circuit(5, [gate("H", 1), gate("TDG", 2), cnot(1, 3)], {4: "Z", 2: "X"})
    assert loads(dumps(c)) == c
    text = "# comment\nH 1\nT 3  # trailing\nCNOT 1 3\nMEASURE 4 Z\nMEASURE 2 X\n"
    parsed = loads(text)
    assert parsed.qubit_count == 4 and parsed.measure == (None, "X", None, "Z")


@given(circuits())
def test_text_round_trip_property(c):
    assert loads(dumps(c)) == c


@pytest.mark.parametrize(
    "text, line",
    [("H 1\nFOO 2\n", 2), ("H 1\nMEASURE 1 Z\nH 2\n", 3), ("CNOT 1\n", 1), ("H x\n", 1), ("MEASURE 1 Y\n", 1)],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(CircuitParseError) as err:
        loads(text)
    assert err.value.line == line


def test_permutation_matrix_moves_qubits():
    # logical qubit 1 -> position 2, qubit 2 -> position 1 is SWAP
    swap = permutation_matrix([2, 1])
    state = np.kron([0, 1], [1, 0]).astype(complex)  # |10>
    np.testing.assert_allclose(swap @ state, np.kron([1, 0], [0, 1]))
