"""
Electronics-imposed feasibility predicates for tick-indexed schedules

Every optional predicate is pairwise within a tick: two gates active at the
same tick either get along or they don't. conflict_masks exposes that
relation so schedulers can test compatibility with a bitwise AND.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Set, Tuple

from qcodesign.circuit import Circuit, Gate, GateKind
from qcodesign.exceptions import IncompleteAssignmentError
from qcodesign.layout import ArchModel

logger = logging.getLogger(__name__)

# gate id -> start tick
TickAssignment = Mapping[int, int]

PRECEDENCE = "precedence"
BLOCK_SAME_PROTOCOL = "block_same_protocol"
ONE_MEASUREMENT_PER_BLOCK = "one_measurement_per_block"
PARK_CROSSTALK = "park_crosstalk"

OPTIONAL_CONSTRAINTS = (BLOCK_SAME_PROTOCOL, ONE_MEASUREMENT_PER_BLOCK, PARK_CROSSTALK)


@dataclass(frozen=True)
class ConstraintSet:
    """
    Which electronics predicates a schedule must satisfy

    Precedence is always enforced and has no switch.
    """

    arch: ArchModel
    block_same_protocol: bool = False
    one_measurement_per_block: bool = False
    park_crosstalk: bool = False

    @property
    def precedence(self) -> bool:
        return True

    @classmethod
    def all_on(cls, arch: ArchModel) -> "ConstraintSet":
        return cls(arch, True, True, True)

    @classmethod
    def all_off(cls, arch: ArchModel) -> "ConstraintSet":
        return cls(arch)

    @property
    def any_optional(self) -> bool:
        return self.block_same_protocol or self.one_measurement_per_block or self.park_crosstalk

    def enabled(self) -> List[str]:
        names = [PRECEDENCE]
        names.extend(name for name in OPTIONAL_CONSTRAINTS if getattr(self, name))
        return names

    def to_dict(self) -> Dict[str, bool]:
        return {name: getattr(self, name) for name in OPTIONAL_CONSTRAINTS}

    def label(self) -> str:
        return "on" if self.any_optional else "off"


@dataclass(frozen=True, order=True)
class Violation:
    """A single broken predicate at one tick"""

    tick: int
    gates: Tuple[int, ...]
    constraint: str
    blocks: Tuple[int, ...] = ()
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "constraint": self.constraint,
            "tick": self.tick,
            "gates": list(self.gates),
            "blocks": list(self.blocks),
            "message": self.message,
        }


@dataclass(frozen=True)
class FeasibilityReport:
    """Aggregated result of every enabled check"""

    feasible: bool
    violations: Tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.feasible

    def by_constraint(self) -> Dict[str, List[Violation]]:
        grouped: Dict[str, List[Violation]] = defaultdict(list)
        for v in self.violations:
            grouped[v.constraint].append(v)
        return dict(grouped)

    def constraints_violated(self) -> List[str]:
        return sorted({v.constraint for v in self.violations})


def violations_to_json(violations: List[Violation]) -> List[Dict[str, Any]]:
    return [v.to_dict() for v in violations]


def _end(c: Circuit, t: TickAssignment, gid: int) -> int:
    return t[gid] + c.gates[gid].duration_ticks


def _active_by_tick(c: Circuit, t: TickAssignment) -> Dict[int, List[Gate]]:
    active: Dict[int, List[Gate]] = defaultdict(list)
    for gate in c.gates:
        for tick in range(t[gate.id], _end(c, t, gate.id)):
            active[tick].append(gate)
    return active


def _require_complete(c: Circuit, t: TickAssignment) -> None:
    ids = {g.id for g in c.gates}
    keys = set(t)
    if keys != ids:
        missing = sorted(ids - keys)
        extra = sorted(keys - ids)
        raise IncompleteAssignmentError(
            f"Assignment must cover every gate exactly once (missing {missing}, unknown {extra})"
        )
    negative = sorted(gid for gid, tick in t.items() if tick < 0)
    if negative:
        raise IncompleteAssignmentError(f"Gates {negative} have negative start ticks")


def check_precedence(c: Circuit, t: TickAssignment) -> List[Violation]:
    """Dependency order plus single occupancy of every qubit"""
    found = []
    for u, v in c.deps:
        if t[v] < _end(c, t, u):
            found.append(Violation(
                t[v], (u, v), PRECEDENCE,
                message=f"gate {v} starts at {t[v]} before gate {u} ends at {_end(c, t, u)}",
            ))

    seen: Set[Tuple[int, int]] = set()
    for q, chain in sorted(c.qubit_chains.items()):
        for i, u in enumerate(chain):
            for v in chain[i + 1:]:
                pair = (min(u, v), max(u, v))
                if pair in seen:
                    continue
                if t[u] < _end(c, t, v) and t[v] < _end(c, t, u):
                    seen.add(pair)
                    found.append(Violation(
                        max(t[u], t[v]), pair, PRECEDENCE,
                        message=f"gates {pair[0]} and {pair[1]} overlap on qubit {q}",
                    ))
    return sorted(found)


def _gates_per_block(arch: ArchModel, gates: List[Gate]) -> Dict[int, List[Gate]]:
    per_block: Dict[int, List[Gate]] = defaultdict(list)
    for gate in gates:
        for b in arch.blocks_of_gate(gate):
            per_block[b].append(gate)
    return per_block


def check_block_protocol(c: Circuit, t: TickAssignment, cs: ConstraintSet) -> List[Violation]:
    """Busy qubits of a block must all run the same gate kind"""
    found = []
    for tick, gates in sorted(_active_by_tick(c, t).items()):
        for b, members in sorted(_gates_per_block(cs.arch, gates).items()):
            kinds = sorted({g.kind.value for g in members})
            if len(kinds) > 1:
                found.append(Violation(
                    tick, tuple(sorted(g.id for g in members)), BLOCK_SAME_PROTOCOL, (b,),
                    message=f"block {b} mixes {', '.join(kinds)} at tick {tick}",
                ))
    return sorted(found)


def check_measurement_exclusivity(c: Circuit, t: TickAssignment, cs: ConstraintSet) -> List[Violation]:
    """At most one measurement per block at a time"""
    found = []
    for tick, gates in sorted(_active_by_tick(c, t).items()):
        measured = [g for g in gates if g.kind is GateKind.MSR]
        for b, members in sorted(_gates_per_block(cs.arch, measured).items()):
            if len(members) > 1:
                found.append(Violation(
                    tick, tuple(sorted(g.id for g in members)), ONE_MEASUREMENT_PER_BLOCK, (b,),
                    message=f"block {b} measures {len(members)} qubits at tick {tick}",
                ))
    return sorted(found)


def check_park_crosstalk(c: Circuit, t: TickAssignment, cs: ConstraintSet) -> List[Violation]:
    """A qubit under another qubit's control lines is parked or runs the same kind"""
    arch = cs.arch
    if not arch.signal_overlap:
        return []

    found = []
    for tick, gates in sorted(_active_by_tick(c, t).items()):
        on_qubit = {q: g for g in gates for q in g.qubits}
        reported: Set[Tuple[int, int]] = set()
        for g in gates:
            for x in g.qubits:
                for y in sorted(arch.overlapped_by(x)):
                    h = on_qubit.get(y)
                    if h is None or h.id == g.id or h.kind is g.kind:
                        continue
                    pair = (min(g.id, h.id), max(g.id, h.id))
                    if pair in reported:
                        continue
                    reported.add(pair)
                    blocks = tuple(sorted(set(arch.blocks_of_gate(g)) | set(arch.blocks_of_gate(h))))
                    found.append(Violation(
                        tick, pair, PARK_CROSSTALK, blocks,
                        message=f"{g.kind.value} on qubit {x} drives over qubit {y} running {h.kind.value}",
                    ))
    return sorted(found)


def is_feasible(c: Circuit, t: TickAssignment, cs: ConstraintSet) -> FeasibilityReport:
    """
    Run every enabled check

    Raises:
        IncompleteAssignmentError: If the assignment is partial
    """
    _require_complete(c, t)
    found = check_precedence(c, t)
    if cs.block_same_protocol:
        found += check_block_protocol(c, t, cs)
    if cs.one_measurement_per_block:
        found += check_measurement_exclusivity(c, t, cs)
    if cs.park_crosstalk:
        found += check_park_crosstalk(c, t, cs)
    found.sort()
    return FeasibilityReport(not found, tuple(found))


def gates_conflict(a: Gate, b: Gate, cs: ConstraintSet, blocks: Optional[Dict[int, Set[int]]] = None) -> bool:
    """True if the two gates may not be active in the same tick"""
    if set(a.qubits) & set(b.qubits):
        return True
    arch = cs.arch
    if blocks is None:
        blocks_a, blocks_b = set(arch.blocks_of_gate(a)), set(arch.blocks_of_gate(b))
    else:
        blocks_a, blocks_b = blocks[a.id], blocks[b.id]
    share_block = bool(blocks_a & blocks_b)
    if cs.block_same_protocol and share_block and a.kind is not b.kind:
        return True
    if cs.one_measurement_per_block and share_block and a.kind is GateKind.MSR and b.kind is GateKind.MSR:
        return True
    if cs.park_crosstalk and a.kind is not b.kind:
        if any(y in b.qubits for x in a.qubits for y in arch.overlapped_by(x)):
            return True
        if any(y in a.qubits for x in b.qubits for y in arch.overlapped_by(x)):
            return True
    return False


def conflict_masks(c: Circuit, cs: ConstraintSet) -> List[int]:
    """
    Per-gate bitmask of gates that cannot share a tick with it

    Bit j of masks[i] is set when gates i and j touch a common qubit or an
    enabled predicate forbids them running together.
    """
    blocks = {g.id: set(cs.arch.blocks_of_gate(g)) for g in c.gates}
    masks = [0] * len(c.gates)
    for i, a in enumerate(c.gates):
        for b in c.gates[i + 1:]:
            if gates_conflict(a, b, cs, blocks):
                masks[a.id] |= 1 << b.id
                masks[b.id] |= 1 << a.id
    return masks


__all__ = [
    "TickAssignment",
    "PRECEDENCE",
    "BLOCK_SAME_PROTOCOL",
    "ONE_MEASUREMENT_PER_BLOCK",
    "PARK_CROSSTALK",
    "OPTIONAL_CONSTRAINTS",
    "ConstraintSet",
    "Violation",
    "FeasibilityReport",
    "violations_to_json",
    "check_precedence",
    "check_block_protocol",
    "check_measurement_exclusivity",
    "check_park_crosstalk",
    "is_feasible",
    "gates_conflict",
    "conflict_masks",
]
