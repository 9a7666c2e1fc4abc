"""
Shared fixtures and hypothesis strategies
"""

from typing import List, Tuple

import pytest
from hypothesis import strategies as st

from qcodesign.circuit import Circuit, CircuitBuilder, GateKind, generate_bs9_21_half_round
from qcodesign.constraints import ConstraintSet
from qcodesign.layout import ArchModel, default_bs9_21_arch, fully_connected_arch

SINGLE_QUBIT_KINDS = [
    GateKind.PREP,
    GateKind.X_HALF_PI,
    GateKind.Z_HALF_PI,
    GateKind.Z_PI,
    GateKind.MSR,
]


@pytest.fixture(scope="session")
def bs9() -> Circuit:
    return generate_bs9_21_half_round()


@pytest.fixture(scope="session")
def bs9_arch() -> ArchModel:
    return default_bs9_21_arch()


@pytest.fixture
def two_qubit_arch() -> ArchModel:
    """Both qubits in one block, CPhase allowed between them"""
    return fully_connected_arch(2, blocks=[[0, 1]])


@pytest.fixture
def parallel_pair() -> Circuit:
    """X on qubit 0 and Z on qubit 1, no deps"""
    b = CircuitBuilder(2)
    b.add(GateKind.X_HALF_PI, 0)
    b.add(GateKind.Z_HALF_PI, 1)
    return b.build()


@st.composite
def small_instances(draw, max_gates: int = 8, max_qubits: int = 4) -> Tuple[Circuit, ConstraintSet]:
    """Random valid circuit on a fully connected arch with random blocks, overlap, durations and flags"""
    n_qubits = draw(st.integers(min_value=2, max_value=max_qubits))
    n_gates = draw(st.integers(min_value=1, max_value=max_gates))
    durations = draw(
        st.dictionaries(st.sampled_from(SINGLE_QUBIT_KINDS + [GateKind.CPHASE]), st.integers(1, 3))
    )

    builder = CircuitBuilder(n_qubits, durations)
    for _ in range(n_gates):
        if draw(st.integers(0, 4)) == 0:
            a, b = draw(st.lists(st.integers(0, n_qubits - 1), min_size=2, max_size=2, unique=True))
            builder.add(GateKind.CPHASE, a, b)
        else:
            builder.add(draw(st.sampled_from(SINGLE_QUBIT_KINDS)), draw(st.integers(0, n_qubits - 1)))
    circuit = builder.build()

    labels = draw(st.lists(st.integers(0, n_qubits - 1), min_size=n_qubits, max_size=n_qubits))
    groups: List[List[int]] = []
    for label in sorted(set(labels)):
        groups.append([q for q in range(n_qubits) if labels[q] == label])
    arch = fully_connected_arch(n_qubits, blocks=groups)

    overlap = {}
    for q in range(n_qubits):
        others = [y for y in range(n_qubits) if y != q]
        over = draw(st.lists(st.sampled_from(others), max_size=2, unique=True))
        if over:
            overlap[q] = over
    arch = ArchModel.from_dict({**arch.to_dict(), "signal_overlap": {str(q): v for q, v in overlap.items()}})

    flags = draw(st.tuples(st.booleans(), st.booleans(), st.booleans()))
    return circuit, ConstraintSet(arch, *flags)
