"""
Tick-by-tick list scheduling

At every tick the ready gates are visited by longest remaining critical
path (then gate id) and started whenever they are compatible with what is
already running. The result is an upper bound for the exact search.
"""

import logging
from typing import Dict, List

from qcodesign.circuit import Circuit
from qcodesign.constraints import ConstraintSet, conflict_masks
from qcodesign.scheduling.schedule import (
    IdleWindowPolicy,
    Schedule,
    account_idles,
    build_schedule,
    check_placeable,
)

logger = logging.getLogger(__name__)


def list_schedule(c: Circuit, masks: List[int]) -> Dict[int, int]:
    """ASAP list scheduling against precomputed conflict masks"""
    n = len(c.gates)
    start = [-1] * n
    end = [0] * n
    pending = set(range(n))
    tick = 0
    priority = sorted(range(n), key=lambda g: (-c.tails[g], g))

    while pending:
        running = 0
        for g in range(n):
            if start[g] >= 0 and start[g] <= tick < end[g]:
                running |= 1 << g
        for g in priority:
            if g not in pending:
                continue
            if any(start[p] < 0 or end[p] > tick for p in c.predecessors[g]):
                continue
            if masks[g] & running:
                continue
            start[g] = tick
            end[g] = tick + c.gates[g].duration_ticks
            running |= 1 << g
            pending.discard(g)
        tick += 1

    return {g: start[g] for g in range(n)}


def compact_late(c: Circuit, masks: List[int], assignment: Dict[int, int]) -> Dict[int, int]:
    """
    Push gates as late as they can go without growing the makespan

    Gates are revisited in reverse topological order; each moves to the
    latest tick that keeps its successors, the makespan and every conflict
    satisfied. Starting ancillas late shrinks their idle windows.
    """
    t = dict(assignment)
    makespan = max((t[g.id] + g.duration_ticks for g in c.gates), default=0)
    active = [0] * makespan
    for gate in c.gates:
        for tick in range(t[gate.id], t[gate.id] + gate.duration_ticks):
            active[tick] |= 1 << gate.id

    for g in reversed(c.topological_order):
        dur = c.gates[g].duration_ticks
        latest = min((t[s] for s in c.successors[g]), default=makespan) - dur
        if latest <= t[g]:
            continue
        bit = 1 << g
        for tick in range(t[g], t[g] + dur):
            active[tick] &= ~bit
        chosen = t[g]
        for candidate in range(latest, t[g], -1):
            if all(not (masks[g] & active[tick]) for tick in range(candidate, candidate + dur)):
                chosen = candidate
                break
        t[g] = chosen
        for tick in range(chosen, chosen + dur):
            active[tick] |= bit
    return t


def schedule_greedy(
    c: Circuit,
    cs: ConstraintSet,
    policy: IdleWindowPolicy = IdleWindowPolicy.FIRST_TO_LAST_OP,
) -> Schedule:
    """
    Build a feasible schedule by list scheduling

    Args:
        c: Valid circuit
        cs: Constraints to honor
        policy: Idle accounting window recorded in the result

    Returns:
        Feasible Schedule with optimal=False

    Raises:
        UnschedulableGateError: If a gate cannot run on the arch
    """
    check_placeable(c, cs)
    masks = conflict_masks(c, cs)
    assignment = list_schedule(c, masks)
    schedule = build_schedule(c, cs, assignment, policy, method="greedy")
    logger.info(f"📋 Greedy schedule: M={schedule.M}, makespan={schedule.makespan}")
    return schedule


def best_heuristic_assignment(
    c: Circuit,
    masks: List[int],
    policy: IdleWindowPolicy,
) -> Dict[int, int]:
    """The better of plain list scheduling and its late-compacted form"""
    asap = list_schedule(c, masks)
    late = compact_late(c, masks, asap)
    if account_idles(c, late, policy).M < account_idles(c, asap, policy).M:
        return late
    return asap


__all__ = ["list_schedule", "compact_late", "schedule_greedy", "best_heuristic_assignment"]
