"""
Quantum circuits as typed gate DAGs

A circuit is an ordered list of typed gates on qubit indices plus a set of
precedence edges. Gates are opaque: only their kind, operands, duration and
order matter to the scheduler and the error budget.

Example:
    >>> from qcodesign.circuit import generate_bs9_21_half_round, census
    >>> circuit = generate_bs9_21_half_round()
    >>> census(circuit).format_line()
    'Prep 12 / X 42 / Z 18 / CPHASE 24 / Msr 12'
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from qcodesign.exceptions import CircuitError

logger = logging.getLogger(__name__)

N_DATA = 9
N_ANCILLA = 12
BS9_21_QUBITS = N_DATA + N_ANCILLA

# Data qubits d0..d8 sit on a 3x3 row-major grid; ancillas follow them.
ZZ_CHECK_PAIRS: Tuple[Tuple[int, int], ...] = ((0, 3), (3, 6), (1, 4), (4, 7), (2, 5), (5, 8))
XX_CHECK_PAIRS: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8))


class GateKind(str, Enum):
    """Native operations of the double-quantum-dot qubit"""

    PREP = "Prep"
    X_HALF_PI = "XHalfPi"
    Z_HALF_PI = "ZHalfPi"
    Z_PI = "ZPi"
    CPHASE = "CPhase"
    MSR = "Msr"
    IDLE = "Idle"

    @property
    def arity(self) -> int:
        return 2 if self is GateKind.CPHASE else 1

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    GateKind.PREP: "Prep",
    GateKind.X_HALF_PI: "X",
    GateKind.Z_HALF_PI: "Z",
    GateKind.Z_PI: "Zpi",
    GateKind.CPHASE: "CPHASE",
    GateKind.MSR: "Msr",
    GateKind.IDLE: "idle",
}

# Census order follows the gate-count table rows
CENSUS_KINDS = (
    GateKind.PREP,
    GateKind.X_HALF_PI,
    GateKind.Z_HALF_PI,
    GateKind.Z_PI,
    GateKind.CPHASE,
    GateKind.MSR,
)


@dataclass(frozen=True)
class Gate:
    """A single scheduled operation"""

    id: int
    kind: GateKind
    qubits: Tuple[int, ...]
    duration_ticks: int = 1

    def __str__(self) -> str:
        operands = ",".join(str(q) for q in self.qubits)
        return f"{self.kind.value}({operands})#{self.id}"


@dataclass(frozen=True)
class Circuit:
    """
    Gates plus precedence edges

    The derived views (graph, chains, tails) assume the circuit passed
    validate_circuit; they are computed once and cached.
    """

    n_qubits: int
    gates: Tuple[Gate, ...] = ()
    deps: Tuple[Tuple[int, int], ...] = ()

    def __len__(self) -> int:
        return len(self.gates)

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(gate.id for gate in self.gates)
        g.add_edges_from(self.deps)
        return g

    @cached_property
    def topological_order(self) -> Tuple[int, ...]:
        return tuple(nx.lexicographical_topological_sort(self.graph))

    @cached_property
    def predecessors(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(sorted(self.graph.predecessors(g.id))) for g in self.gates)

    @cached_property
    def successors(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(sorted(self.graph.successors(g.id))) for g in self.gates)

    @cached_property
    def qubit_chains(self) -> Dict[int, Tuple[int, ...]]:
        """Gates touching each qubit, in program order"""
        position = {gid: i for i, gid in enumerate(self.topological_order)}
        chains: Dict[int, List[int]] = {q: [] for q in range(self.n_qubits)}
        for gate in self.gates:
            for q in gate.qubits:
                chains[q].append(gate.id)
        return {q: tuple(sorted(ids, key=position.__getitem__)) for q, ids in chains.items()}

    @cached_property
    def tails(self) -> Tuple[int, ...]:
        """Remaining critical path of each gate, own duration included"""
        tail = [0] * len(self.gates)
        for gid in reversed(self.topological_order):
            after = max((tail[s] for s in self.successors[gid]), default=0)
            tail[gid] = self.gates[gid].duration_ticks + after
        return tuple(tail)


@dataclass(frozen=True)
class GateCensus:
    """Per-kind gate counts (Idle excluded)"""

    counts: Mapping[GateKind, int] = field(default_factory=dict)

    def __getitem__(self, kind: GateKind) -> int:
        return self.counts.get(kind, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def kinds_present(self) -> List[GateKind]:
        return [k for k in CENSUS_KINDS if self[k] > 0]

    def as_dict(self) -> Dict[str, int]:
        return {k.value: self[k] for k in CENSUS_KINDS}

    def format_line(self) -> str:
        present = self.kinds_present()
        if not present:
            return "empty"
        return " / ".join(f"{k.label} {self[k]}" for k in present)


@dataclass(frozen=True)
class CircuitViolation:
    """One broken circuit invariant"""

    kind: str
    message: str
    gate_ids: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[CircuitViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def kinds(self) -> List[str]:
        return [v.kind for v in self.violations]


class CircuitBuilder:
    """
    Incremental circuit construction in program order

    Each added gate is chained after the previous gate on every qubit it
    touches, so per-qubit program order is a chain by construction.
    """

    def __init__(self, n_qubits: int, durations: Optional[Mapping[GateKind, int]] = None):
        self.n_qubits = n_qubits
        self.durations = dict(durations or {})
        self._gates: List[Gate] = []
        self._deps: List[Tuple[int, int]] = []
        self._last_on_qubit: Dict[int, int] = {}

    def add(self, kind: GateKind, *qubits: int) -> int:
        gate_id = len(self._gates)
        duration = self.durations.get(kind, 1)
        self._gates.append(Gate(gate_id, kind, tuple(qubits), duration))
        for q in qubits:
            prev = self._last_on_qubit.get(q)
            if prev is not None:
                self._deps.append((prev, gate_id))
            self._last_on_qubit[q] = gate_id
        return gate_id

    def build(self) -> Circuit:
        deps = tuple(sorted(set(self._deps)))
        return Circuit(self.n_qubits, tuple(self._gates), deps)


def ancilla_qubit(index: int) -> int:
    return N_DATA + index


def qubit_label(q: int, n_qubits: int = BS9_21_QUBITS) -> str:
    """d0..d8 / a0..a11 for the BS9(21) numbering, q<n> otherwise"""
    if n_qubits != BS9_21_QUBITS:
        return f"q{q}"
    return f"d{q}" if q < N_DATA else f"a{q - N_DATA}"


def _gauge_check(builder: CircuitBuilder, ancilla: int, first: int, second: int) -> None:
    builder.add(GateKind.PREP, ancilla)
    builder.add(GateKind.X_HALF_PI, ancilla)
    builder.add(GateKind.CPHASE, ancilla, first)
    builder.add(GateKind.CPHASE, ancilla, second)
    builder.add(GateKind.X_HALF_PI, ancilla)
    builder.add(GateKind.MSR, ancilla)


def generate_bs9_21_half_round(
    durations: Optional[Mapping[GateKind, int]] = None,
) -> Circuit:
    """
    Build the BS9(21) gauge-measurement half-round

    ZZ checks on vertical data pairs, a forward basis change on every data
    qubit, XX checks on horizontal pairs, then the backward basis change.
    Phases are ordered through each data qubit's program chain.

    Args:
        durations: Optional per-kind durations in ticks (default 1 each)

    Returns:
        21-qubit circuit with 108 gates
    """
    builder = CircuitBuilder(BS9_21_QUBITS, durations)

    for i, (first, second) in enumerate(ZZ_CHECK_PAIRS):
        _gauge_check(builder, ancilla_qubit(i), first, second)

    for d in range(N_DATA):
        builder.add(GateKind.X_HALF_PI, d)
        builder.add(GateKind.Z_HALF_PI, d)

    for i, (first, second) in enumerate(XX_CHECK_PAIRS):
        _gauge_check(builder, ancilla_qubit(len(ZZ_CHECK_PAIRS) + i), first, second)

    for d in range(N_DATA):
        builder.add(GateKind.Z_HALF_PI, d)
        builder.add(GateKind.X_HALF_PI, d)

    circuit = builder.build()
    logger.debug(f"🧩 Generated BS9(21) half-round: {len(circuit)} gates, {len(circuit.deps)} deps")
    return circuit


def validate_circuit(c: Circuit) -> ValidationReport:
    """
    Report every broken Circuit invariant

    Returns:
        ValidationReport, empty iff the circuit is valid
    """
    found: List[CircuitViolation] = []
    ids = [g.id for g in c.gates]

    seen = set()
    for gid in ids:
        if gid in seen:
            found.append(CircuitViolation("duplicate_id", f"gate id {gid} appears more than once", (gid,)))
        seen.add(gid)
    if sorted(seen) != list(range(len(seen))) or len(seen) != len(ids):
        if not any(v.kind == "duplicate_id" for v in found):
            found.append(CircuitViolation("non_dense_ids", "gate ids are not 0..len-1"))

    for gate in c.gates:
        if gate.kind is GateKind.IDLE:
            found.append(CircuitViolation("idle_gate", f"{gate} is an Idle gate", (gate.id,)))
        elif len(gate.qubits) != gate.kind.arity:
            found.append(CircuitViolation(
                "arity", f"{gate} has {len(gate.qubits)} operands, expected {gate.kind.arity}", (gate.id,)
            ))
        if len(set(gate.qubits)) != len(gate.qubits):
            found.append(CircuitViolation("distinct_qubits", f"{gate} repeats an operand", (gate.id,)))
        if any(q < 0 or q >= c.n_qubits for q in gate.qubits):
            found.append(CircuitViolation(
                "qubit_range", f"{gate} touches a qubit outside 0..{c.n_qubits - 1}", (gate.id,)
            ))
        if gate.duration_ticks < 1:
            found.append(CircuitViolation("duration", f"{gate} has duration {gate.duration_ticks}", (gate.id,)))

    known = set(ids)
    for u, v in c.deps:
        if u not in known or v not in known:
            found.append(CircuitViolation("unknown_dep", f"dep ({u}->{v}) names an unknown gate", (u, v)))

    graph = nx.DiGraph()
    graph.add_nodes_from(known)
    graph.add_edges_from((u, v) for u, v in c.deps if u in known and v in known)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        members = tuple(sorted({u for u, _ in cycle}))
        found.append(CircuitViolation("cycle", f"deps contain a cycle through {list(members)}", members))
    elif ids and not any(v.kind in ("duplicate_id", "non_dense_ids") for v in found):
        found.extend(_chain_violations(c, graph))

    return ValidationReport(tuple(found))


def _chain_violations(c: Circuit, graph: nx.DiGraph) -> List[CircuitViolation]:
    position = {gid: i for i, gid in enumerate(nx.lexicographical_topological_sort(graph))}
    on_qubit: Dict[int, List[int]] = {}
    for gate in c.gates:
        for q in gate.qubits:
            if 0 <= q < c.n_qubits:
                on_qubit.setdefault(q, []).append(gate.id)

    found = []
    for q in sorted(on_qubit):
        chain = sorted(set(on_qubit[q]), key=position.__getitem__)
        for u, v in zip(chain, chain[1:]):
            if not nx.has_path(graph, u, v):
                found.append(CircuitViolation(
                    "broken_chain",
                    f"gates {u} and {v} share qubit {q} but are not ordered by deps",
                    (u, v),
                ))
    return found


def census(c: Circuit) -> GateCensus:
    """Exact per-kind gate counts"""
    counts: Dict[GateKind, int] = {}
    for gate in c.gates:
        if gate.kind is not GateKind.IDLE:
            counts[gate.kind] = counts.get(gate.kind, 0) + 1
    return GateCensus(counts)


def protocol_set_size(cns: GateCensus, cphase_protocols: int = 3) -> int:
    """
    Number of distinct pulse protocols the program memory must hold

    Every non-CPhase kind present needs one protocol; CPhase needs
    `cphase_protocols` of them when present.
    """
    if cphase_protocols < 1:
        raise ValueError("cphase_protocols must be at least 1")
    single = sum(1 for k in cns.kinds_present() if k is not GateKind.CPHASE)
    return single + (cphase_protocols if cns[GateKind.CPHASE] > 0 else 0)


def critical_path_length(c: Circuit) -> int:
    return max(c.tails, default=0)


def circuit_to_dict(c: Circuit) -> Dict[str, Any]:
    return {
        "n_qubits": c.n_qubits,
        "gates": [
            {"id": g.id, "kind": g.kind.value, "qubits": list(g.qubits), "duration": g.duration_ticks}
            for g in c.gates
        ],
        "deps": [[u, v] for u, v in c.deps],
    }


def circuit_from_dict(data: Mapping[str, Any]) -> Circuit:
    """
    Parse a circuit document

    Raises:
        CircuitError: If the document is structurally malformed
    """
    try:
        gates = tuple(
            Gate(
                id=int(g["id"]),
                kind=GateKind(g["kind"]),
                qubits=tuple(int(q) for q in g["qubits"]),
                duration_ticks=int(g.get("duration", 1)),
            )
            for g in data["gates"]
        )
        deps = tuple((int(u), int(v)) for u, v in data.get("deps", []))
        return Circuit(int(data["n_qubits"]), gates, deps)
    except (KeyError, TypeError, ValueError) as e:
        raise CircuitError(f"Malformed circuit document: {e}") from e


def save_circuit(c: Circuit, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(circuit_to_dict(c), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"💾 Saved circuit to: {path}")
    return path


def load_circuit(path: Union[str, Path]) -> Circuit:
    """
    Load a circuit JSON document

    Raises:
        OSError: If the file cannot be read
        CircuitError: If the file is not a valid circuit document
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CircuitError(f"Invalid JSON in circuit file {path}: {e}") from e
    if not isinstance(data, dict):
        raise CircuitError(f"Circuit file {path} must hold a JSON object")
    circuit = circuit_from_dict(data)
    logger.info(f"✅ Loaded circuit from: {path}")
    return circuit
