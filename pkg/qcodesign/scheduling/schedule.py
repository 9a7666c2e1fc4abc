"""
Schedule values, idle accounting and the qubit-by-tick grid
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, NamedTuple, Optional

from qcodesign.circuit import Circuit, GateKind, qubit_label
from qcodesign.constraints import ConstraintSet, TickAssignment, is_feasible
from qcodesign.exceptions import ConfigError, InfeasibleScheduleError, UnschedulableGateError

logger = logging.getLogger(__name__)

IDLE_MARK = "idle"
OUTSIDE_MARK = "."


class IdleWindowPolicy(str, Enum):
    """Which ticks of a qubit count as idle when it runs no gate"""

    FIRST_TO_LAST_OP = "first-last"
    FULL_MAKESPAN = "makespan"

    @classmethod
    def parse(cls, value: str) -> "IdleWindowPolicy":
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(p.value for p in cls)
            raise ConfigError(f"Unknown idle window policy '{value}'. Choose one of: {choices}")


class IdleAccount(NamedTuple):
    M: int
    idle_per_qubit: Dict[int, int]
    makespan: int


@dataclass(frozen=True)
class Schedule:
    """A feasible tick assignment and its idle cost"""

    assignment: Dict[int, int]
    makespan: int
    idle_ticks_total: int
    idle_per_qubit: Dict[int, int]
    policy: IdleWindowPolicy = IdleWindowPolicy.FIRST_TO_LAST_OP
    constraints: Dict[str, bool] = field(default_factory=dict)
    optimal: bool = False
    method: str = "greedy"
    nodes: int = 0
    budget_exhausted: bool = False

    @property
    def M(self) -> int:
        return self.idle_ticks_total

    def start(self, gate_id: int) -> int:
        return self.assignment[gate_id]

    def __repr__(self) -> str:
        flag = "optimal" if self.optimal else "heuristic"
        return f"Schedule(method={self.method}, M={self.M}, makespan={self.makespan}, {flag})"


def qubit_windows(c: Circuit, t: TickAssignment) -> Dict[int, Optional[range]]:
    """[first start, last end) of every qubit, None for unused qubits"""
    windows: Dict[int, Optional[range]] = {}
    for q, chain in c.qubit_chains.items():
        if not chain:
            windows[q] = None
            continue
        first = min(t[g] for g in chain)
        last = max(t[g] + c.gates[g].duration_ticks for g in chain)
        windows[q] = range(first, last)
    return windows


def account_idles(c: Circuit, t: TickAssignment, policy: IdleWindowPolicy) -> IdleAccount:
    """
    Count idle ticks per qubit under the given window policy

    Args:
        c: Circuit the assignment belongs to
        t: Complete, feasible assignment
        policy: Idle accounting window

    Returns:
        (M, idle_per_qubit, makespan)
    """
    makespan = max((t[g.id] + g.duration_ticks for g in c.gates), default=0)
    idle: Dict[int, int] = {}
    for q, chain in c.qubit_chains.items():
        occupied = sum(c.gates[g].duration_ticks for g in chain)
        if policy is IdleWindowPolicy.FULL_MAKESPAN:
            idle[q] = makespan - occupied
        elif chain:
            first = min(t[g] for g in chain)
            last = max(t[g] + c.gates[g].duration_ticks for g in chain)
            idle[q] = last - first - occupied
        else:
            idle[q] = 0
    return IdleAccount(sum(idle.values()), idle, makespan)


def check_placeable(c: Circuit, cs: ConstraintSet) -> None:
    """
    Raise for any gate the architecture can never run

    Raises:
        UnschedulableGateError: Qubit outside the arch, or a CPhase pair
            without a switch between its dots
    """
    arch = cs.arch
    for gate in c.gates:
        outside = [q for q in gate.qubits if q >= arch.n_qubits]
        if outside:
            raise UnschedulableGateError(gate.id, f"qubits {outside} are not on the {arch.n_qubits}-qubit arch")
        if gate.kind is GateKind.CPHASE and not arch.allows_pair(*gate.qubits):
            a, b = gate.qubits
            raise UnschedulableGateError(gate.id, f"CPhase pair ({a}, {b}) is not a neighbor pair")


def build_schedule(
    c: Circuit,
    cs: ConstraintSet,
    assignment: Mapping[int, int],
    policy: IdleWindowPolicy,
    method: str,
    optimal: bool = False,
    nodes: int = 0,
    budget_exhausted: bool = False,
) -> Schedule:
    """
    Account idles and verify feasibility of a finished assignment

    Raises:
        InfeasibleScheduleError: If the assignment breaks an enabled constraint
    """
    t = {gid: assignment[gid] for gid in sorted(assignment)}
    report = is_feasible(c, t, cs)
    if not report.feasible:
        first = report.violations[0]
        raise InfeasibleScheduleError(
            f"{method} produced an infeasible schedule: {first.constraint} at tick {first.tick} "
            f"({first.message})"
        )
    account = account_idles(c, t, policy)
    return Schedule(
        assignment=t,
        makespan=account.makespan,
        idle_ticks_total=account.M,
        idle_per_qubit=account.idle_per_qubit,
        policy=policy,
        constraints=cs.to_dict(),
        optimal=optimal,
        method=method,
        nodes=nodes,
        budget_exhausted=budget_exhausted,
    )


def schedule_to_dict(s: Schedule) -> Dict[str, Any]:
    return {
        "assignment": {str(g): tick for g, tick in sorted(s.assignment.items())},
        "makespan": s.makespan,
        "M": s.idle_ticks_total,
        "idle_per_qubit": {str(q): n for q, n in sorted(s.idle_per_qubit.items())},
        "policy": s.policy.value,
        "constraints": dict(sorted(s.constraints.items())),
        "optimal": s.optimal,
        "method": s.method,
        "nodes": s.nodes,
        "budget_exhausted": s.budget_exhausted,
    }


def schedule_from_dict(data: Mapping[str, Any]) -> Schedule:
    """
    Rebuild a Schedule from its JSON form

    Raises:
        ConfigError: If the document is malformed
    """
    try:
        return Schedule(
            assignment={int(g): int(tick) for g, tick in data["assignment"].items()},
            makespan=int(data["makespan"]),
            idle_ticks_total=int(data["M"]),
            idle_per_qubit={int(q): int(n) for q, n in data["idle_per_qubit"].items()},
            policy=IdleWindowPolicy(data["policy"]),
            constraints={str(k): bool(v) for k, v in data.get("constraints", {}).items()},
            optimal=bool(data["optimal"]),
            method=str(data.get("method", "greedy")),
            nodes=int(data.get("nodes", 0)),
            budget_exhausted=bool(data.get("budget_exhausted", False)),
        )
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ConfigError(f"Malformed schedule document: {e}") from e


@dataclass(frozen=True)
class ScheduleGrid:
    """Rows are qubits, columns are ticks"""

    qubits: List[str]
    cells: List[List[str]]

    @property
    def n_ticks(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    @property
    def shape(self) -> tuple:
        return (len(self.cells), self.n_ticks)

    def header(self) -> List[str]:
        return ["qubit"] + [f"t{i}" for i in range(self.n_ticks)]

    def csv_rows(self) -> List[List[str]]:
        return [self.header()] + [[q] + row for q, row in zip(self.qubits, self.cells)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ticks": self.n_ticks,
            "rows": [{"qubit": q, "cells": row} for q, row in zip(self.qubits, self.cells)],
        }


def export_schedule(s: Schedule, c: Circuit) -> ScheduleGrid:
    """
    Render a schedule as a qubit-by-tick grid

    Cells hold the running gate's kind, "idle" inside the qubit's accounting
    window, and "." outside it.
    """
    cells = [[OUTSIDE_MARK] * s.makespan for _ in range(c.n_qubits)]
    windows = qubit_windows(c, s.assignment)
    for q in range(c.n_qubits):
        if s.policy is IdleWindowPolicy.FULL_MAKESPAN:
            window: Optional[range] = range(0, s.makespan)
        else:
            window = windows.get(q)
        for tick in window or ():
            cells[q][tick] = IDLE_MARK
    for gate in c.gates:
        begin = s.assignment[gate.id]
        for tick in range(begin, begin + gate.duration_ticks):
            for q in gate.qubits:
                cells[q][tick] = gate.kind.label
    labels = [qubit_label(q, c.n_qubits) for q in range(c.n_qubits)]
    return ScheduleGrid(labels, cells)


__all__ = [
    "IDLE_MARK",
    "OUTSIDE_MARK",
    "IdleWindowPolicy",
    "IdleAccount",
    "Schedule",
    "ScheduleGrid",
    "account_idles",
    "qubit_windows",
    "check_placeable",
    "build_schedule",
    "schedule_to_dict",
    "schedule_from_dict",
    "export_schedule",
]
