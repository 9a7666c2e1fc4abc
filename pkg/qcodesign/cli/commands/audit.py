"""
qcodesign audit - control-plane line, bandwidth and staging audit
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import typer

from qcodesign.cli.utils import (
    console,
    create_table,
    handle_errors,
    load_run_config,
    ns,
    output_dir,
    print_success,
    print_warning,
)
from qcodesign.config import RunConfig
from qcodesign.control_plane import NS, ControlAudit, audit as audit_control_plane
from qcodesign.reports import audit_record, write_json

logger = logging.getLogger(__name__)

AUDIT_FILE = "audit.json"


def run_audit(config: RunConfig) -> ControlAudit:
    return audit_control_plane(
        config.clock,
        config.lines,
        config.stages,
        n_qubits=config.layout.n_qubits,
        lines_per_qubit=config.layout.direct_lines_per_qubit,
        switch_lines=config.layout.switch_lines,
        t2_values=config.budget.t2_values,
    )


def _print_audit(record: Dict[str, Any]) -> None:
    rows = [
        ["direct lines (unmultiplexed)", record["direct_lines"]],
        ["multiplexed lines", f"{record['line_total']} / {record['line_limit']}"],
        ["control word bits", record["word_bits"]],
        ["min T_Qclk (ns)", f"{record['min_qclk_ns']:.4g} at {record['data_lines']} lines"],
        ["serial lines at T_Qclk", record["serial_lines_at_qclk"]],
        ["pipeline feasible", "✅" if record["pipeline_feasible"] else "❌"],
    ]
    for stage in record["stages"]:
        verdict = "feasible" if stage["feasible"] else "infeasible"
        rows.append([f"stage {stage['stage']}", f"{stage['demand_W']:.3g} W → {verdict}"])
    for entry in record["idle_errors"]:
        rows.append([f"idle error q (T2={entry['t2_s']:g} s)", f"{entry['q']:.3g}"])
    console.print(create_table("🔌 Control-plane audit", ["quantity", "value"], rows))


def audit(
    tclk: Optional[float] = typer.Option(None, "--tclk", help="Classical clock period (ns)"),
    tqclk: Optional[float] = typer.Option(None, "--tqclk", help="Quantum clock period (ns)"),
    lines: Optional[int] = typer.Option(None, "--lines", help="Serial data lines"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Run config (YAML/JSON)"),
):
    """
    🔌 Audit line counts, control bandwidth and cryostat staging

    Examples:
        qcodesign audit
        qcodesign audit --tqclk 20 --lines 3
    """
    with handle_errors():
        config = load_run_config(
            config_path,
            **{"clock.t_clk": ns(tclk), "clock.t_qclk": ns(tqclk), "clock.data_lines": lines},
        )
        result = run_audit(config)
        record = audit_record(result)
        path = write_json(output_dir(config, out) / AUDIT_FILE, record)

        _print_audit(record)
        if not result.lines_within_limit:
            print_warning(f"{result.line_total} lines exceed the {result.line_limit}-line limit")
        if not result.pipeline_feasible:
            print_warning(f"T_Qclk {result.t_qclk / NS:g} ns is below the {result.min_qclk / NS:g} ns minimum")
        print_success("Audit written", {"File": path})
