"""
Exhaustive reference scheduler for small instances
"""

import logging
from typing import List, Optional

from qcodesign.circuit import Circuit, critical_path_length
from qcodesign.constraints import ConstraintSet, conflict_masks
from qcodesign.exceptions import NoFeasibleScheduleError, ScheduleTooLargeError
from qcodesign.scheduling.schedule import (
    IdleWindowPolicy,
    Schedule,
    account_idles,
    build_schedule,
    check_placeable,
)

logger = logging.getLogger(__name__)

ORACLE_MAX_GATES = 10


def oracle_schedule(
    c: Circuit,
    cs: ConstraintSet,
    policy: IdleWindowPolicy = IdleWindowPolicy.FIRST_TO_LAST_OP,
    horizon: Optional[int] = None,
) -> Schedule:
    """
    Enumerate every feasible assignment inside the horizon and keep the best

    Gates are assigned in topological order with start ticks tried in
    ascending order. Among assignments reaching the minimum M, the one whose
    start ticks listed by gate id compare lowest wins.

    Args:
        c: Valid circuit with at most ORACLE_MAX_GATES gates
        cs: Constraints to honor
        policy: Idle accounting window
        horizon: Last tick (exclusive) any gate may occupy; defaults to the
            sum of all durations, which always admits a serial schedule

    Raises:
        ScheduleTooLargeError: More than ORACLE_MAX_GATES gates
        NoFeasibleScheduleError: The horizon admits no feasible schedule
    """
    n = len(c.gates)
    if n > ORACLE_MAX_GATES:
        raise ScheduleTooLargeError(
            f"Oracle enumerates at most {ORACLE_MAX_GATES} gates, circuit has {n}"
        )
    check_placeable(c, cs)

    dur = [g.duration_ticks for g in c.gates]
    if horizon is None:
        horizon = sum(dur)
    critical = critical_path_length(c)
    if horizon < critical:
        raise NoFeasibleScheduleError(f"Horizon {horizon} is shorter than the critical path {critical}")

    masks = conflict_masks(c, cs)
    order = c.topological_order
    full = policy is IdleWindowPolicy.FULL_MAKESPAN
    total_busy = sum(len(g.qubits) * g.duration_ticks for g in c.gates)
    chains = c.qubit_chains
    start: List[int] = [-1] * n
    best_m: Optional[int] = None
    best: Optional[List[int]] = None

    def partial_bound() -> int:
        if full:
            latest = max((start[g] + dur[g] for g in range(n) if start[g] >= 0), default=0)
            return c.n_qubits * latest - total_busy
        bound = 0
        for chain in chains.values():
            placed = [g for g in chain if start[g] >= 0]
            if placed:
                first = min(start[g] for g in placed)
                last = max(start[g] + dur[g] for g in placed)
                bound += last - first - sum(dur[g] for g in placed)
        return bound

    def may_win_tie() -> bool:
        # ids below the first unplaced gate are fixed and decide the comparison
        k = next((g for g in range(n) if start[g] < 0), n)
        return best is None or start[:k] <= best[:k]

    def visit(i: int) -> None:
        nonlocal best_m, best
        if i == n:
            m = account_idles(c, dict(enumerate(start)), policy).M
            if best_m is None or m < best_m or (m == best_m and start < best):
                best_m, best = m, list(start)
            return
        g = order[i]
        earliest = max((start[p] + dur[p] for p in c.predecessors[g]), default=0)
        for s in range(earliest, horizon - dur[g] + 1):
            clash = any(
                start[h] >= 0 and (masks[g] >> h) & 1
                and s < start[h] + dur[h] and start[h] < s + dur[g]
                for h in range(n)
            )
            if clash:
                continue
            start[g] = s
            bound = partial_bound() if best_m is not None else 0
            if best_m is None or bound < best_m or (bound == best_m and may_win_tie()):
                visit(i + 1)
            start[g] = -1

    visit(0)
    if best is None:
        raise NoFeasibleScheduleError(f"No feasible schedule fits in horizon {horizon}")

    schedule = build_schedule(c, cs, dict(enumerate(best)), policy, method="oracle", optimal=True)
    logger.debug(f"Oracle schedule: M={schedule.M}, makespan={schedule.makespan}")
    return schedule


__all__ = ["ORACLE_MAX_GATES", "oracle_schedule"]
