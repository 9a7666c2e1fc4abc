"""
qcodesign schedule - greedy and exact idle minimization under both constraint settings
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer

from qcodesign.circuit import BS9_21_QUBITS, Circuit
from qcodesign.cli.commands.gen import resolve_circuit
from qcodesign.cli.utils import (
    console,
    constraint_settings,
    create_table,
    handle_errors,
    load_run_config,
    output_dir,
    print_success,
    print_warning,
)
from qcodesign.config import RunConfig
from qcodesign.constraints import ConstraintSet
from qcodesign.layout import ArchModel, default_bs9_21_arch, fully_connected_arch, load_arch
from qcodesign.reports import (
    REFERENCE_VALUES,
    SettingSummary,
    comparison_record,
    summarize_setting,
    write_grid,
    write_json,
)
from qcodesign.scheduling import (
    ORACLE_MAX_GATES,
    IdleWindowPolicy,
    account_idles,
    export_schedule,
    oracle_schedule,
    schedule_exact,
    schedule_greedy,
    schedule_to_dict,
)

logger = logging.getLogger(__name__)

SUMMARY_FILE = "schedule_summary.json"


def resolve_arch(config: RunConfig, circuit: Circuit) -> ArchModel:
    """Configured arch file, the bundled BS9(21) chip, or a fully connected layout"""
    if config.arch:
        return load_arch(config.arch)
    if circuit.n_qubits == BS9_21_QUBITS:
        return default_bs9_21_arch()
    logger.info(f"No arch file; using a fully connected {circuit.n_qubits}-qubit layout")
    return fully_connected_arch(circuit.n_qubits)


def constraint_set_for(config: RunConfig, arch: ArchModel, label: str) -> ConstraintSet:
    if label == "on":
        return config.constraints.to_constraint_set(arch)
    return ConstraintSet.all_off(arch)


def run_schedule(config: RunConfig, circuit: Circuit, out: Path, settings: List[str]) -> Dict[str, Any]:
    """
    Schedule one circuit under each constraint setting and write every artifact

    Per setting: greedy_<s>.json, schedule_<s>.json, grid_<s>.csv and
    grid_<s>.json; plus a summary comparing the settings.

    Raises:
        InfeasibleError: If a gate cannot be placed under a setting
    """
    arch = resolve_arch(config, circuit)
    summaries: Dict[str, SettingSummary] = {}
    search = config.search
    logger.info(f"🌳 Exact search budget: {search.resolved_budget_nodes} nodes on {search.workers} worker(s)")

    for label in settings:
        cs = constraint_set_for(config, arch, label)
        logger.info(f"📅 Scheduling with constraints {label}: {cs.label()}")

        greedy = schedule_greedy(circuit, cs, config.policy)
        exact = schedule_exact(
            circuit,
            cs,
            config.policy,
            budget_nodes=config.search.resolved_budget_nodes,
            workers=config.search.workers,
            partitions=config.search.partitions,
            time_limit=config.search.time_limit,
        )
        oracle = oracle_schedule(circuit, cs, config.policy) if len(circuit) <= ORACLE_MAX_GATES else None
        m_by_policy = {p.value: account_idles(circuit, exact.assignment, p).M for p in IdleWindowPolicy}

        write_json(out / f"greedy_{label}.json", schedule_to_dict(greedy))
        write_json(out / f"schedule_{label}.json", schedule_to_dict(exact))
        write_grid(export_schedule(exact, circuit), out / f"grid_{label}.csv", out / f"grid_{label}.json")

        summaries[label] = summarize_setting(label, greedy, exact, m_by_policy, oracle)

    record = comparison_record(summaries, config.policy.value)
    write_json(out / SUMMARY_FILE, record)
    return record


def _print_summary(record: Dict[str, Any]) -> None:
    rows = []
    for label, s in sorted(record["settings"].items()):
        by_policy = s["M_by_policy"]
        rows.append([
            label,
            s["greedy_M"],
            s["exact_M"],
            "certified" if s["certified"] else "budget hit",
            s["nodes"],
            s["makespan"],
            by_policy.get(IdleWindowPolicy.FIRST_TO_LAST_OP.value),
            by_policy.get(IdleWindowPolicy.FULL_MAKESPAN.value),
            s["oracle_M"],
        ])
    console.print(create_table(
        f"📅 Idle ticks (objective: {record['objective_policy']})",
        ["constraints", "greedy M", "exact M", "optimal", "nodes", "makespan",
         "M first-last", "M makespan", "oracle M"],
        rows,
    ))
    for policy, ratio in sorted(record.get("ratio_by_policy", {}).items()):
        shown = "undefined" if ratio is None else f"{ratio:.3f}"
        console.print(f"[bold]M_constrained / M_unconstrained ({policy}):[/bold] {shown}")
    console.print(
        f"[dim]Reference targets: M_unconstrained={REFERENCE_VALUES['m_unconstrained']}, "
        f"M_constrained={REFERENCE_VALUES['m_constrained']}[/dim]"
    )


def schedule(
    circuit_path: Optional[Path] = typer.Option(None, "--circuit", help="Circuit JSON (default: BS9(21) generator)"),
    arch_path: Optional[Path] = typer.Option(None, "--arch", help="Arch JSON"),
    constraints: str = typer.Option("both", "--constraints", help="on | off | both"),
    policy: Optional[str] = typer.Option(None, "--policy", help="first-last | makespan"),
    budget_nodes: Optional[int] = typer.Option(
        None,
        "--budget-nodes",
        help=(
            "Exact search node budget (default 2e6 per worker, at most 1e7). "
            "Runtime grows linearly with it: on one core 2e6 nodes take roughly 1.5-3.5 minutes "
            "per BS9(21) setting; a larger budget can lower M or certify optimality"
        ),
    ),
    workers: Optional[int] = typer.Option(None, "--workers", help="Search processes; also scales the default budget"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Run config (YAML/JSON)"),
):
    """
    📅 Minimize idle ticks with the greedy and exact schedulers

    Examples:
        qcodesign schedule
        qcodesign schedule --constraints on --policy makespan --budget-nodes 100000
    """
    with handle_errors():
        config = load_run_config(
            config_path,
            circuit=str(circuit_path) if circuit_path else None,
            arch=str(arch_path) if arch_path else None,
            policy=IdleWindowPolicy.parse(policy) if policy else None,
            **{"search.budget_nodes": budget_nodes, "search.workers": workers},
        )
        circuit = resolve_circuit(config)
        record = run_schedule(config, circuit, output_dir(config, out), constraint_settings(constraints))

        _print_summary(record)
        hit = [label for label, s in record["settings"].items() if not s["optimal"]]
        if hit:
            print_warning(f"Node budget exhausted for constraints {', '.join(sorted(hit))}; M is an upper bound")
        print_success("Schedules written", {"Summary": output_dir(config, out) / SUMMARY_FILE})
