import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from starsim.circuit import CircuitError, Gate, circuit_unitary, cnot, equal_up_to_phase, gate
from starsim.frame import (
    CORRECTION_TABLE,
    MeasurementPattern,
    PauliFrame,
    apply_frame_to_bits,
    conjugate_through,
    correction_for,
    frame_update,
)
from starsim.stabilizer import PauliString

frames = st.integers(1, 4).flatmap(
    lambda n: st.builds(PauliFrame, st.tuples(*[st.booleans()] * n), st.tuples(*[st.booleans()] * n))
)


def frame_matrix(f: PauliFrame) -> np.ndarray:
    # X^x Z^z per qubit; phase is irrelevant to these checks
    m = np.array([[1]], dtype=complex)
    for x, z in zip(f.x, f.z):
        m = np.kron(m, PauliString("X" if x else "I").to_matrix() @ PauliString("Z" if z else "I").to_matrix())
    return m


def test_correction_examples():
    assert correction_for(MeasurementPattern("XZZX", (0, 0, 0, 0))) == "I"
    assert correction_for(MeasurementPattern("XZZX", (1, 1, 0, 0))) == "ZX"
    assert correction_for(MeasurementPattern("ZXXZ", (1, 0, 0, 0))) == "X"
    assert correction_for(MeasurementPattern("ZXXZ", (1, 0, 1, 0))) == "ZX"  # listed as XZ
    with pytest.raises(ValueError):
        MeasurementPattern("XXZZ", (0, 0, 0, 0))
    with pytest.raises(ValueError):
        MeasurementPattern("XZZX", (0, 2, 0, 0))


def test_table_is_complete_and_linear():
    assert set(CORRECTION_TABLE) == set(itertools.product((0, 1), repeat=4))
    for r, (a, b) in CORRECTION_TABLE.items():
        r1, r2, r3, r4 = r
        x_a, z_a = r2 ^ r3, r1 ^ r4
        assert ("X" in a, "Z" in a) == (bool(x_a), bool(z_a))
        assert ("X" in b, "Z" in b) == (bool(z_a), bool(x_a))


def test_frame_update_examples():
    f = frame_update(PauliFrame.identity(2), 1, "Z")
    assert f.z == (True, False) and f.x == (False, False)
    assert frame_update(f, 1, "Z").is_identity
    both = frame_update(PauliFrame.identity(1), 1, "ZX")
    assert both.x == (True,) and both.z == (True,)
    assert both.to_dict() == {"1": "Y"}
    with pytest.raises(ValueError):
        frame_update(f, 1, "Q")


@given(frames, st.data())
def test_frame_group_laws(f, data):
    n = len(f)
    g = data.draw(st.builds(PauliFrame, st.tuples(*[st.booleans()] * n), st.tuples(*[st.booleans()] * n)))
    h = data.draw(st.builds(PauliFrame, st.tuples(*[st.booleans()] * n), st.tuples(*[st.booleans()] * n)))
    assert f.compose(g) == g.compose(f)
    assert f.compose(g).compose(h) == f.compose(g.compose(h))
    assert f.compose(f).is_identity


def test_conjugate_examples():
    xf = PauliFrame((True,), (False,))
    f, g = conjugate_through(xf, gate("T", 1))
    assert g == gate("TDG", 1) and f == xf
    zf = PauliFrame((False,), (True,))
    f, g = conjugate_through(zf, gate("H", 1))
    assert f == xf and g == gate("H", 1)
    for kind in ("H", "S", "T", "TDG", "X"):
        ident = PauliFrame.identity(1)
        assert conjugate_through(ident, gate(kind, 1)) == (ident, gate(kind, 1))
    with pytest.raises(CircuitError):
        conjugate_through(PauliFrame.identity(1), gate("X", 2))


SUPPORTED = ["H", "S", "SDG", "T", "TDG", "X", "Z"]


@pytest.mark.parametrize("kind", SUPPORTED)
@pytest.mark.parametrize("x, z", list(itertools.product((False, True), repeat=2)))
def test_conjugate_matrix_identity_1q(kind, x, z):
    f = PauliFrame((x,), (z,))
    g = gate(kind, 1)
    f2, g2 = conjugate_through(f, g)
    lhs = circuit_unitary([g], 1) @ frame_matrix(f)
    rhs = frame_matrix(f2) @ circuit_unitary([g2], 1)
    assert equal_up_to_phase(lhs, rhs)


@pytest.mark.parametrize("bits", list(itertools.product((False, True), repeat=4)))
@pytest.mark.parametrize("c, t", [(1, 2), (2, 1)])
def test_conjugate_matrix_identity_cnot(bits, c, t):
    f = PauliFrame(bits[:2], bits[2:])
    g = cnot(c, t)
    f2, g2 = conjugate_through(f, g)
    assert g2 == g
    assert equal_up_to_phase(circuit_unitary([g], 2) @ frame_matrix(f), frame_matrix(f2) @ circuit_unitary([g2], 2))


def test_static_tracking_breaks_identity():
    # passing T unchanged under an X flag is exactly what static inversion gets wrong
    f = PauliFrame((True,), (False,))
    f2, g2 = conjugate_through(f, gate("T", 1), substitute=False)
    lhs = circuit_unitary([gate("T", 1)], 1) @ frame_matrix(f)
    assert not equal_up_to_phase(lhs, frame_matrix(f2) @ circuit_unitary([g2], 1))


def test_apply_frame_to_bits():
    assert apply_frame_to_bits(PauliFrame((True, False, False, False, False), (False,) * 5), "10000") == "00000"
    assert apply_frame_to_bits(PauliFrame.identity(3), "101") == "101"
    assert apply_frame_to_bits(PauliFrame((False,), (True,)), "1") == "1"
    with pytest.raises(ValueError):
        apply_frame_to_bits(PauliFrame.identity(2), "101")


def test_frame_json():
    f = PauliFrame.from_labels(["I", "X", "Z", "Y"])
    assert f.to_json() == '{"1": "I", "2": "X", "3": "Z", "4": "Y"}'
