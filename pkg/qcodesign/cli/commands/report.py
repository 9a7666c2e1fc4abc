"""
qcodesign report - Markdown summary against the published reference numbers
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import typer

from qcodesign.circuit import census
from qcodesign.cli.commands.audit import run_audit
from qcodesign.cli.commands.gen import resolve_circuit
from qcodesign.cli.commands.schedule import SUMMARY_FILE
from qcodesign.cli.utils import console, handle_errors, load_run_config, output_dir, print_info, print_success
from qcodesign.config import RunConfig
from qcodesign.error_budget import constraint_penalty
from qcodesign.gate_accuracy import UEV, UV, load_calibration, table3_report
from qcodesign.layout import load_routing_nodes, routing_table
from qcodesign.reports import read_json, render_markdown_report, write_text

logger = logging.getLogger(__name__)

REPORT_FILE = "report.md"


def run_report(config: RunConfig, results_dir: Path, out: Path) -> Path:
    """
    Aggregate computed values into report.md

    A schedule summary from an earlier `schedule` run in `results_dir` is
    included when present; the failure-bound penalty then uses its idle counts.
    """
    summary: Optional[Dict[str, Any]] = None
    summary_path = results_dir / SUMMARY_FILE
    if summary_path.is_file():
        summary = read_json(summary_path)
    else:
        logger.info(f"No schedule summary at {summary_path}")

    m_constrained, m_unconstrained = config.budget.m_constrained, config.budget.m_unconstrained
    settings = (summary or {}).get("settings", {})
    if "on" in settings and "off" in settings:
        m_constrained, m_unconstrained = settings["on"]["exact_M"], settings["off"]["exact_M"]

    q = config.budget.q_list[0] if config.budget.q_list else 1e-4
    penalty = constraint_penalty(config.budget.n_gates, m_constrained, m_unconstrained, q)

    model = load_calibration(config.calibration)
    table3 = table3_report(
        model,
        [v * UV for v in config.sweep.noise_levels_uv],
        [j * UEV for j in config.sweep.j_targets_uev],
    )
    nodes = load_routing_nodes(config.routing_nodes, config.layout.effective_lines_per_qubit)

    text = render_markdown_report(
        census(resolve_circuit(config)).format_line(),
        run_audit(config),
        routing_table(nodes),
        table3,
        penalty,
        summary,
    )
    return write_text(out / REPORT_FILE, text)


def report(
    results: Optional[Path] = typer.Option(None, "--in", help="Directory holding earlier run outputs"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Run config (YAML/JSON)"),
):
    """
    📝 Write a Markdown report of computed vs reference values

    Examples:
        qcodesign schedule --out results/ && qcodesign report --in results/
    """
    with handle_errors():
        config = load_run_config(config_path)
        target = output_dir(config, out)
        results_dir = results if results is not None else target
        if not (results_dir / SUMMARY_FILE).is_file():
            print_info("No schedule summary found; scheduling rows are omitted")
        path = run_report(config, results_dir, target)

        console.print(path.read_text(encoding="utf-8"))
        print_success("Report written", {"File": path})
