"""
Exact idle minimization by branch-and-bound

Each search node fixes the set of gates starting at one tick. Nodes are
pruned when the idles already committed plus a lower bound on the idles
still to come cannot beat the incumbent. The tick-0 choices are dealt
round-robin into a fixed number of partitions that are searched
independently, so the answer never depends on how many workers run them.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from qcodesign.circuit import Circuit
from qcodesign.constraints import ConstraintSet, conflict_masks
from qcodesign.scheduling.greedy import best_heuristic_assignment
from qcodesign.scheduling.schedule import (
    IdleWindowPolicy,
    Schedule,
    account_idles,
    build_schedule,
    check_placeable,
)

logger = logging.getLogger(__name__)

DEFAULT_BUDGET_NODES = 10_000_000
NODES_PER_WORKER = 2_000_000
SEARCH_PARTITIONS = 16
_DEADLINE_CHECK_EVERY = 1024


def default_budget_nodes(workers: int = 1) -> int:
    """
    Node budget used when none is given

    Grows with the worker count up to DEFAULT_BUDGET_NODES, so a BS9(21)
    setting stays within a few minutes on any machine. Pin budget_nodes to
    get identical schedules across machines with different core counts.
    """
    return min(DEFAULT_BUDGET_NODES, NODES_PER_WORKER * max(1, workers))


@dataclass(frozen=True)
class _Problem:
    circuit: Circuit
    full_makespan: bool
    dominance: bool
    masks: Tuple[int, ...]
    durations: Tuple[int, ...]
    priority: Tuple[int, ...]

    @classmethod
    def build(cls, c: Circuit, cs: ConstraintSet, policy: IdleWindowPolicy) -> "_Problem":
        return cls(
            circuit=c,
            full_makespan=policy is IdleWindowPolicy.FULL_MAKESPAN,
            dominance=not cs.any_optional,
            masks=tuple(conflict_masks(c, cs)),
            durations=tuple(g.duration_ticks for g in c.gates),
            priority=tuple(sorted(range(len(c.gates)), key=lambda g: (-c.tails[g], g))),
        )

    @property
    def policy(self) -> IdleWindowPolicy:
        return IdleWindowPolicy.FULL_MAKESPAN if self.full_makespan else IdleWindowPolicy.FIRST_TO_LAST_OP


@dataclass(frozen=True)
class _State:
    tick: int
    start: Tuple[int, ...]
    opened: Tuple[bool, ...]
    left_on_qubit: Tuple[int, ...]
    committed: int
    left: int


@dataclass(frozen=True)
class PartitionResult:
    """Outcome of searching one partition"""

    index: int
    best_m: Optional[int]
    assignment: Optional[Dict[int, int]]
    nodes: int
    complete: bool
    reached_bound: bool

    @property
    def exhausted(self) -> bool:
        return not self.complete and not self.reached_bound


def _root_state(p: _Problem) -> _State:
    c = p.circuit
    return _State(
        tick=0,
        start=(-1,) * len(c.gates),
        opened=(False,) * c.n_qubits,
        left_on_qubit=tuple(len(c.qubit_chains[q]) for q in range(c.n_qubits)),
        committed=0,
        left=len(c.gates),
    )


def _future_lower_bound(p: _Problem, s: _State) -> int:
    """Idle ticks still to come, from s.tick onwards"""
    c = p.circuit
    dur = p.durations
    start = s.start
    t = s.tick

    est: Dict[int, int] = {}
    horizon = t
    for g in c.topological_order:
        if start[g] >= 0:
            horizon = max(horizon, start[g] + dur[g])
            continue
        e = t
        for pred in c.predecessors[g]:
            e = max(e, start[pred] + dur[pred] if start[pred] >= 0 else est[pred] + dur[pred])
        est[g] = e
        horizon = max(horizon, e + c.tails[g])

    bound = 0
    for q in range(c.n_qubits):
        if not p.full_makespan and (not s.opened[q] or s.left_on_qubit[q] == 0):
            continue
        free = t
        busy = 0
        remaining = []
        for g in c.qubit_chains[q]:
            if start[g] < 0:
                remaining.append(g)
            elif start[g] + dur[g] > t:
                free = start[g] + dur[g]
        busy += free - t
        for g in remaining:
            begin = max(est[g], free)
            free = begin + dur[g]
            busy += dur[g]
        if p.full_makespan:
            bound += max(free, horizon) - t - busy
        else:
            bound += free - t - busy
    return bound


def _subsets(
    masks: Sequence[int], candidates: List[int], i: int, active: int, chosen: Tuple[int, ...]
) -> Iterator[Tuple[int, ...]]:
    """Compatible subsets of candidates[i:], larger ones first"""
    if i == len(candidates):
        yield chosen
        return
    g = candidates[i]
    if not masks[g] & active:
        yield from _subsets(masks, candidates, i + 1, active | (1 << g), chosen + (g,))
    yield from _subsets(masks, candidates, i + 1, active, chosen)


def _children(p: _Problem, s: _State) -> Iterator[_State]:
    c = p.circuit
    dur = p.durations
    t = s.tick
    start = s.start

    running = 0
    busy_qubits = set()
    for g, begin in enumerate(start):
        if begin >= 0 and begin <= t < begin + dur[g]:
            running |= 1 << g
            busy_qubits.update(c.gates[g].qubits)

    ready = [
        g for g in p.priority
        if start[g] < 0
        and all(start[pred] >= 0 and start[pred] + dur[pred] <= t for pred in c.predecessors[g])
        and not p.masks[g] & running
    ]

    forced: Tuple[int, ...] = ()
    if p.dominance:
        forced = tuple(
            g for g in ready
            if p.full_makespan or all(s.opened[q] for q in c.gates[g].qubits)
        )
    base = running
    for g in forced:
        base |= 1 << g
    candidates = [g for g in ready if g not in forced and not p.masks[g] & base]

    for subset in _subsets(p.masks, candidates, 0, base, ()):
        chosen = forced + subset
        if not chosen and not running:
            continue

        new_start = list(start)
        opened = list(s.opened)
        left_on_qubit = list(s.left_on_qubit)
        busy = set(busy_qubits)
        for g in chosen:
            new_start[g] = t
            for q in c.gates[g].qubits:
                opened[q] = True
                left_on_qubit[q] -= 1
                busy.add(q)
        left = s.left - len(chosen)

        idle = 0
        if left:
            if p.full_makespan:
                idle = c.n_qubits - len(busy)
            else:
                idle = sum(
                    1 for q in range(c.n_qubits)
                    if opened[q] and left_on_qubit[q] > 0 and q not in busy
                )
        yield _State(t + 1, tuple(new_start), tuple(opened), tuple(left_on_qubit), s.committed + idle, left)


def _run_partition(
    args: Tuple[_Problem, int, int, int, int, int, Optional[float]],
) -> PartitionResult:
    p, index, partitions, budget, incumbent_m, root_bound, time_limit = args
    c = p.circuit
    best_m = incumbent_m
    best: Optional[Dict[int, int]] = None
    nodes = 0
    deadline = time.monotonic() + time_limit if time_limit else None

    roots = islice(_children(p, _root_state(p)), index, None, partitions)
    stack: List[Iterator[_State]] = [roots]
    while stack:
        try:
            child = next(stack[-1])
        except StopIteration:
            stack.pop()
            continue

        nodes += 1
        if nodes > budget:
            return PartitionResult(index, best_m if best is not None else None, best, nodes - 1, False, False)
        if deadline and nodes % _DEADLINE_CHECK_EVERY == 0 and time.monotonic() > deadline:
            return PartitionResult(index, best_m if best is not None else None, best, nodes, False, False)

        if child.left == 0:
            assignment = dict(enumerate(child.start))
            m = account_idles(c, assignment, p.policy).M
            if m < best_m:
                best_m, best = m, assignment
                logger.debug(f"🔎 Partition {index}: incumbent M={m} after {nodes} nodes")
                if best_m <= root_bound:
                    return PartitionResult(index, best_m, best, nodes, False, True)
            continue

        if child.committed + _future_lower_bound(p, child) >= best_m:
            continue
        stack.append(_children(p, child))

    return PartitionResult(index, best_m if best is not None else None, best, nodes, True, False)


def schedule_exact(
    c: Circuit,
    cs: ConstraintSet,
    policy: IdleWindowPolicy = IdleWindowPolicy.FIRST_TO_LAST_OP,
    budget_nodes: Optional[int] = None,
    workers: int = 1,
    partitions: int = SEARCH_PARTITIONS,
    time_limit: Optional[float] = None,
) -> Schedule:
    """
    Minimize total idle ticks M

    Args:
        c: Valid circuit
        cs: Constraints to honor
        policy: Idle accounting window being minimized
        budget_nodes: Search nodes shared evenly by the partitions;
            None means default_budget_nodes(workers)
        workers: Processes used to search partitions (result is the same for any value)
        partitions: Number of independent search partitions
        time_limit: Optional wall-clock limit per partition, in seconds.
            Results then depend on machine speed.

    Children of a node are generated from the ready gates in critical-path
    order, lower gate id first among equal tails, and sets containing a gate
    come before sets without it. A partition keeps the first schedule that
    strictly improves its incumbent; across partitions the lowest index wins
    a tie in M.

    Returns:
        Schedule with optimal=True when the search certified optimality,
        otherwise the best schedule found within the budget

    Raises:
        UnschedulableGateError: If a gate cannot run on the arch
    """
    check_placeable(c, cs)
    if not c.gates:
        return build_schedule(c, cs, {}, policy, method="exact", optimal=True)
    if time_limit:
        logger.warning("⏱️  Exact search time limit set; results may differ between runs")

    p = _Problem.build(c, cs, policy)
    incumbent = best_heuristic_assignment(c, list(p.masks), policy)
    incumbent_m = account_idles(c, incumbent, policy).M
    root = _root_state(p)
    root_bound = _future_lower_bound(p, root)
    logger.info(f"🌳 Exact search: incumbent M={incumbent_m}, lower bound {root_bound}")

    if incumbent_m <= root_bound:
        return build_schedule(c, cs, incumbent, policy, method="exact", optimal=True)

    if budget_nodes is None:
        budget_nodes = default_budget_nodes(workers)
    partitions = max(1, partitions)
    share = max(1, -(-budget_nodes // partitions))
    tasks = [
        (p, k, partitions, share, incumbent_m, root_bound, time_limit)
        for k in range(partitions)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, partitions)) as pool:
            results = list(pool.map(_run_partition, tasks))
    else:
        results = [_run_partition(task) for task in tasks]

    improved = [r for r in results if r.assignment is not None]
    assignment = incumbent
    if improved:
        winner = min(improved, key=lambda r: (r.best_m, r.index))
        assignment = winner.assignment
    optimal = all(r.complete for r in results) or any(r.reached_bound for r in results)
    nodes = sum(r.nodes for r in results)
    exhausted = not optimal

    schedule = build_schedule(
        c, cs, assignment, policy,
        method="exact", optimal=optimal, nodes=nodes, budget_exhausted=exhausted,
    )
    verdict = "certified optimal" if optimal else "budget exhausted"
    logger.info(f"✅ Exact search finished: M={schedule.M} ({verdict}, {nodes} nodes)")
    return schedule


__all__ = [
    "DEFAULT_BUDGET_NODES",
    "NODES_PER_WORKER",
    "SEARCH_PARTITIONS",
    "PartitionResult",
    "default_budget_nodes",
    "schedule_exact",
]
