"""
Schedulers minimizing total idle ticks
"""

from typing import Any, Optional

from qcodesign.circuit import Circuit
from qcodesign.constraints import ConstraintSet
from qcodesign.exceptions import ConfigError
from qcodesign.scheduling.branch_bound import (
    DEFAULT_BUDGET_NODES,
    NODES_PER_WORKER,
    SEARCH_PARTITIONS,
    default_budget_nodes,
    schedule_exact,
)
from qcodesign.scheduling.greedy import schedule_greedy
from qcodesign.scheduling.oracle import ORACLE_MAX_GATES, oracle_schedule
from qcodesign.scheduling.schedule import (
    IdleWindowPolicy,
    Schedule,
    ScheduleGrid,
    account_idles,
    export_schedule,
    schedule_from_dict,
    schedule_to_dict,
)

METHODS = ("greedy", "exact", "oracle")


def schedule(
    c: Circuit,
    cs: ConstraintSet,
    method: str = "exact",
    policy: IdleWindowPolicy = IdleWindowPolicy.FIRST_TO_LAST_OP,
    **kwargs: Any,
) -> Schedule:
    """
    Schedule a circuit with the named method

    Args:
        c: Circuit to schedule
        cs: Constraints to honor
        method: 'greedy', 'exact' or 'oracle'
        policy: Idle accounting window
        **kwargs: Method-specific options (budget_nodes, workers, horizon, ...)

    Returns:
        Schedule

    Raises:
        ConfigError: If the method is unknown
    """
    if method == "greedy":
        return schedule_greedy(c, cs, policy)

    elif method == "exact":
        return schedule_exact(c, cs, policy, **kwargs)

    elif method == "oracle":
        horizon: Optional[int] = kwargs.get("horizon")
        return oracle_schedule(c, cs, policy, horizon)

    else:
        raise ConfigError(
            f"Unsupported scheduling method: {method}. "
            f"Supported: {', '.join(METHODS)}"
        )


__all__ = [
    "METHODS",
    "DEFAULT_BUDGET_NODES",
    "NODES_PER_WORKER",
    "SEARCH_PARTITIONS",
    "default_budget_nodes",
    "ORACLE_MAX_GATES",
    "IdleWindowPolicy",
    "Schedule",
    "ScheduleGrid",
    "account_idles",
    "export_schedule",
    "schedule_from_dict",
    "schedule_to_dict",
    "schedule",
    "schedule_greedy",
    "schedule_exact",
    "oracle_schedule",
]
