import hypothesis.strategies as st
from hypothesis import settings

from starsim.circuit import SINGLE_QUBIT_KINDS, Circuit, Gate

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@st.composite
def gates_on(draw, n):
    if n >= 2 and draw(st.booleans()):
        c, t = draw(st.permutations(range(1, n + 1)))[:2]
        return Gate("CNOT", (c, t))
    return Gate(draw(st.sampled_from(SINGLE_QUBIT_KINDS)), (draw(st.integers(1, n)),))


@st.composite
def circuits(draw, max_qubits=5, max_gates=12, min_qubits=1):
    n = draw(st.integers(min_qubits, max_qubits))
    gates = draw(st.lists(gates_on(n), max_size=max_gates))
    return Circuit(n, gates)
