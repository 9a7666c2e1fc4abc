"""
qcodesign sweep - write the clock, routing, gate-accuracy and error-budget datasets
"""

import logging
from pathlib import Path
from typing import Dict, Optional

import typer

from qcodesign.cli.utils import console, handle_errors, load_run_config, ns, output_dir, print_success
from qcodesign.config import RunConfig
from qcodesign.control_plane import fig5_sweep
from qcodesign.error_budget import fig7_sweep
from qcodesign.gate_accuracy import UEV, UV, gate_time_frontier, load_calibration, table3_report
from qcodesign.layout import load_routing_nodes, routing_table
from qcodesign.reports import (
    FIG5_COLUMNS,
    FIG7_COLUMNS,
    FRONTIER_COLUMNS,
    TABLE2_COLUMNS,
    TABLE3_COLUMNS,
    crossover_records,
    fig5_rows,
    fig7_rows,
    frontier_rows,
    table2_rows,
    table3_rows,
    write_csv,
    write_json,
)

logger = logging.getLogger(__name__)

DATASETS = {
    "fig5": "fig5_serial_lines.csv",
    "fig7": "fig7_failure_bound.csv",
    "crossover": "fig7_crossover.json",
    "table2": "table2_routing.csv",
    "table3": "table3_gate_accuracy.csv",
    "frontier": "gate_time_frontier.csv",
}


def run_sweep(config: RunConfig, out: Path) -> Dict[str, Path]:
    """
    Write every dataset into `out`

    Returns:
        Dataset name -> written path
    """
    written: Dict[str, Path] = {}

    ratios = range(1, config.sweep.fig5_max_ratio + 1)
    lines = fig5_sweep(config.clock.word_bits, ratios)
    written["fig5"] = write_csv(out / DATASETS["fig5"], FIG5_COLUMNS, fig5_rows(lines, config.clock.t_clk))

    b = config.budget
    curves = fig7_sweep(b.n_gates, b.m_constrained, b.m_unconstrained, b.q_list, b.p_grid())
    written["fig7"] = write_csv(out / DATASETS["fig7"], FIG7_COLUMNS, fig7_rows(curves))
    written["crossover"] = write_json(out / DATASETS["crossover"], crossover_records(curves))

    nodes = load_routing_nodes(config.routing_nodes, config.layout.effective_lines_per_qubit)
    written["table2"] = write_csv(out / DATASETS["table2"], TABLE2_COLUMNS, table2_rows(routing_table(nodes)))

    model = load_calibration(config.calibration)
    noise = [v * UV for v in config.sweep.noise_levels_uv]
    targets = [j * UEV for j in config.sweep.j_targets_uev]
    written["table3"] = write_csv(
        out / DATASETS["table3"], TABLE3_COLUMNS, table3_rows(table3_report(model, noise, targets))
    )
    frontier = gate_time_frontier(model, noise, config.sweep.phi_max, config.sweep.jitter)
    written["frontier"] = write_csv(out / DATASETS["frontier"], FRONTIER_COLUMNS, frontier_rows(frontier))

    logger.info(f"📈 Wrote {len(written)} datasets to {out}")
    return written


def sweep(
    tclk: Optional[float] = typer.Option(None, "--tclk", help="Classical clock period (ns)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Run config (YAML/JSON)"),
):
    """
    📈 Write the serial-line, failure-bound, routing and gate-accuracy datasets

    Examples:
        qcodesign sweep --out results/
    """
    with handle_errors():
        config = load_run_config(config_path, **{"clock.t_clk": ns(tclk)})
        written = run_sweep(config, output_dir(config, out))

        for name, path in written.items():
            console.print(f"  [cyan]{name:<10}[/cyan] {path}")
        print_success("Datasets written", {"Count": len(written)})
