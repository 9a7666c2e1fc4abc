"""
Dataset writers and the Markdown summary report

Every writer is deterministic: JSON uses sorted keys, CSV floats use a
fixed 12-significant-digit format, and nothing time-dependent is emitted.
"""

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from qcodesign.control_plane import ControlAudit, Fig5Row
from qcodesign.error_budget import Fig7Curve, PenaltyReport
from qcodesign.gate_accuracy import UEV, UV, FrontierRow, Table3Row
from qcodesign.layout import TABLE2_CONTROLLABLE, RoutingRow
from qcodesign.scheduling import Schedule, ScheduleGrid

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

NS = 1e-9
AGREEMENT_TOLERANCE = 0.25

REFERENCE_VALUES: Dict[str, Any] = {
    "m_unconstrained": 48,
    "m_constrained": 95,
    "idle_ratio": 2.0,
    "direct_lines": 339,
    "word_bits": 45,
    "min_qclk_ns_two_lines": 23,
    "line_limit": 64,
    "controllable_qubits": list(TABLE2_CONTROLLABLE.values()),
    "crossover_ratio": 5.0,
    "ceiling_ratio": 3.0,
    "gate_times_ns": [30.0, 4.13, 2.06, 1.03],
}

FIG5_COLUMNS = ["ratio", "t_qclk_ns", "lines_required"]
FIG7_COLUMNS = ["q", "M", "p", "p_circuit", "term_idle_pair", "term_cross", "term_gate_pair"]
TABLE2_COLUMNS = ["name", "channels", "controllable_qubits"]
TABLE3_COLUMNS = ["j_target_ueV", "delta_v_uV", "delta_j_eV", "z_error_rad", "gate_time_ns"]
FRONTIER_COLUMNS = ["delta_v_uV", "j_target_ueV", "gate_time_ns", "rotation_error_rad"]


def fmt(value: Any) -> str:
    """CSV cell text"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path: PathLike, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    logger.info(f"💾 Wrote {path}")
    return path


def read_csv(path: PathLike) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def write_json(path: PathLike, data: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"💾 Wrote {path}")
    return path


def read_json(path: PathLike) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"💾 Wrote {path}")
    return path


def fig5_rows(rows: Sequence[Fig5Row], t_clk: float = NS) -> List[List[Any]]:
    return [[r.ratio, r.ratio * t_clk / NS, r.lines_required] for r in rows]


def fig7_rows(curves: Sequence[Fig7Curve]) -> List[List[Any]]:
    out = []
    for curve in curves:
        for i, p in enumerate(curve.p):
            out.append([
                float(curve.q), int(curve.m), float(p), float(curve.p_circuit[i]),
                float(curve.term_idle_pair[i]), float(curve.term_cross[i]), float(curve.term_gate_pair[i]),
            ])
    return out


def crossover_records(curves: Sequence[Fig7Curve]) -> List[Dict[str, Any]]:
    return [{"q": float(c.q), "M": int(c.m), "p_star": c.crossover} for c in curves]


def table2_rows(rows: Sequence[RoutingRow]) -> List[List[Any]]:
    return [[r.name, r.channels, r.controllable_qubits] for r in rows]


def table3_rows(rows: Sequence[Table3Row]) -> List[List[Any]]:
    return [
        [r.j_target / UEV, r.delta_v / UV, r.delta_j, r.z_error, r.gate_time / NS]
        for r in rows
    ]


def frontier_rows(rows: Sequence[FrontierRow]) -> List[List[Any]]:
    return [
        [
            r.delta_v / UV,
            r.j_target / UEV if r.j_target is not None else None,
            r.gate_time / NS if r.gate_time is not None else None,
            r.rotation_error,
        ]
        for r in rows
    ]


def write_grid(grid: ScheduleGrid, csv_path: PathLike, json_path: PathLike) -> Tuple[Path, Path]:
    rows = grid.csv_rows()
    return write_csv(csv_path, rows[0], rows[1:]), write_json(json_path, grid.to_dict())


def audit_record(a: ControlAudit) -> Dict[str, Any]:
    return {
        "direct_lines": a.direct_lines,
        "line_total": a.line_total,
        "line_limit": a.line_limit,
        "lines_within_limit": a.lines_within_limit,
        "line_categories": {name: count for name, count in a.line_categories},
        "word_bits": a.word_bits,
        "min_qclk_ns": a.min_qclk / NS,
        "t_qclk_ns": a.t_qclk / NS,
        "data_lines": a.data_lines,
        "serial_lines_at_qclk": a.serial_lines_at_qclk,
        "pipeline_feasible": a.pipeline_feasible,
        "stages": [
            {
                "stage": s.stage,
                "demand_W": s.demand,
                "cooling_budget_W": s.cooling_budget,
                "feasible": s.feasible,
            }
            for s in a.stages
        ],
        "idle_errors": [{"t2_s": t2, "q": q} for t2, q in a.idle_errors],
    }


def relative_gap(value: Optional[float], reference: float) -> Optional[float]:
    if value is None or reference == 0:
        return None
    return abs(value - reference) / abs(reference)


def within_tolerance(value: Optional[float], reference: float, tolerance: float = AGREEMENT_TOLERANCE) -> bool:
    gap = relative_gap(value, reference)
    return gap is not None and gap <= tolerance


def idle_ratio(m_constrained: int, m_unconstrained: int) -> Optional[float]:
    """Constrained over unconstrained idle ticks; None when the denominator is zero"""
    if m_unconstrained == 0:
        return None
    return m_constrained / m_unconstrained


@dataclass
class SettingSummary:
    """Scheduler results for one constraint setting"""

    constraints: str
    greedy_m: int
    exact_m: int
    optimal: bool
    nodes: int
    makespan: int
    m_by_policy: Dict[str, int] = field(default_factory=dict)
    oracle_m: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "constraints": self.constraints,
            "greedy_M": self.greedy_m,
            "exact_M": self.exact_m,
            "optimal": self.optimal,
            "nodes": self.nodes,
            "makespan": self.makespan,
            "M_by_policy": dict(sorted(self.m_by_policy.items())),
            "oracle_M": self.oracle_m,
            "certified": self.optimal and (self.oracle_m is None or self.oracle_m == self.exact_m),
        }


def summarize_setting(
    label: str,
    greedy: Schedule,
    exact: Schedule,
    m_by_policy: Mapping[str, int],
    oracle: Optional[Schedule] = None,
) -> SettingSummary:
    return SettingSummary(
        constraints=label,
        greedy_m=greedy.M,
        exact_m=exact.M,
        optimal=exact.optimal,
        nodes=exact.nodes,
        makespan=exact.makespan,
        m_by_policy=dict(m_by_policy),
        oracle_m=oracle.M if oracle is not None else None,
    )


def comparison_record(settings: Mapping[str, SettingSummary], objective: str) -> Dict[str, Any]:
    """Ratios and reference agreement across the two constraint settings"""
    record: Dict[str, Any] = {
        "objective_policy": objective,
        "settings": {label: s.to_dict() for label, s in sorted(settings.items())},
        "reference": {
            "M_unconstrained": REFERENCE_VALUES["m_unconstrained"],
            "M_constrained": REFERENCE_VALUES["m_constrained"],
        },
    }
    if "on" in settings and "off" in settings:
        on, off = settings["on"], settings["off"]
        ratios = {}
        agreement = {}
        for policy in sorted(on.m_by_policy):
            ratios[policy] = idle_ratio(on.m_by_policy[policy], off.m_by_policy[policy])
            agreement[policy] = {
                "unconstrained": within_tolerance(off.m_by_policy[policy], REFERENCE_VALUES["m_unconstrained"]),
                "constrained": within_tolerance(on.m_by_policy[policy], REFERENCE_VALUES["m_constrained"]),
            }
        record["ratio_by_policy"] = ratios
        record["agreement_25pct"] = agreement
    return record


def _check(ok: bool) -> str:
    return "✅" if ok else "⚠️ discrepancy"


def render_markdown_report(
    census_line: str,
    audit: ControlAudit,
    table2: Sequence[RoutingRow],
    table3: Sequence[Table3Row],
    penalty: PenaltyReport,
    schedule_summary: Optional[Mapping[str, Any]] = None,
) -> str:
    """Computed values next to the published reference numbers"""
    lines = ["# qcodesign report", ""]

    lines += ["## Gate census", "", f"`{census_line}`", ""]

    lines += ["## Scheduling", ""]
    if schedule_summary and "settings" in schedule_summary:
        lines += ["| constraints | policy | M | reference | within 25% |", "|---|---|---|---|---|"]
        refs = {"off": REFERENCE_VALUES["m_unconstrained"], "on": REFERENCE_VALUES["m_constrained"]}
        for label, setting in sorted(schedule_summary["settings"].items()):
            for policy, m in sorted(setting["M_by_policy"].items()):
                ref = refs.get(label)
                ok = ref is not None and within_tolerance(m, ref)
                lines.append(f"| {label} | {policy} | {m} | {ref} | {_check(ok)} |")
        lines.append("")
        for policy, ratio in sorted(schedule_summary.get("ratio_by_policy", {}).items()):
            shown = "undefined (no unconstrained idles)" if ratio is None else f"{ratio:.3f}"
            lines.append(f"- idle ratio ({policy}): {shown} vs claimed ~{REFERENCE_VALUES['idle_ratio']}")
        lines.append("")
    else:
        lines += ["No schedule summary found; run `qcodesign schedule` first.", ""]

    lines += ["## Control plane", "", "| quantity | computed | reference | |", "|---|---|---|---|"]
    lines.append(f"| direct lines | {audit.direct_lines} | {REFERENCE_VALUES['direct_lines']} | "
                 f"{_check(audit.direct_lines == REFERENCE_VALUES['direct_lines'])} |")
    lines.append(f"| multiplexed lines | {audit.line_total} | limit {audit.line_limit} | "
                 f"{_check(audit.lines_within_limit)} |")
    lines.append(f"| control word bits | {audit.word_bits} | {REFERENCE_VALUES['word_bits']} | "
                 f"{_check(audit.word_bits == REFERENCE_VALUES['word_bits'])} |")
    lines.append(f"| min T_Qclk (ns) | {audit.min_qclk / NS:.4g} | at {audit.data_lines} lines | |")
    lines.append(f"| pipeline feasible | {audit.pipeline_feasible} | | |")
    for s in audit.stages:
        lines.append(f"| stage {s.stage} | {s.demand:.3g} W | budget {s.cooling_budget} W | "
                     f"{'feasible' if s.feasible else 'infeasible'} |")
    lines.append("")

    lines += ["## Routing density", "", "| node | channels | qubits | reference |", "|---|---|---|---|"]
    for r in table2:
        ref = TABLE2_CONTROLLABLE.get(r.name)
        lines.append(f"| {r.name} | {r.channels} | {r.controllable_qubits} | {ref if ref is not None else '-'} |")
    lines.append("")

    lines += ["## Gate accuracy", "", "| J (µeV) | δV (µV) | ΔJ (eV) | Z error (rad) | gate time (ns) |",
              "|---|---|---|---|---|"]
    for r in table3:
        lines.append(f"| {r.j_target / UEV:.3g} | {r.delta_v / UV:.4g} | {r.delta_j:.4g} | "
                     f"{r.z_error:.4g} | {r.gate_time / NS:.4g} |")
    lines.append("")

    lines += ["## Error budget", ""]
    cr = penalty.crossover_ratio
    lines.append(f"- crossover ratio p*(48)/p*(95) at q={penalty.q:g}: "
                 f"{'none' if cr is None else f'{cr:.3f}'} vs claimed ~{penalty.claimed_crossover_ratio:g} "
                 f"{_check(not penalty.crossover_discrepancy)}")
    ce = penalty.ceiling_ratio
    lines.append(f"- benefit ceiling ratio: {'none' if ce is None else f'{ce:.3f}'} vs claimed "
                 f"~{penalty.claimed_ceiling_ratio:g} {_check(not penalty.ceiling_discrepancy)}")
    lines.append("")
    return "\n".join(lines)


__all__ = [
    "REFERENCE_VALUES",
    "AGREEMENT_TOLERANCE",
    "FIG5_COLUMNS",
    "FIG7_COLUMNS",
    "TABLE2_COLUMNS",
    "TABLE3_COLUMNS",
    "FRONTIER_COLUMNS",
    "SettingSummary",
    "fmt",
    "write_csv",
    "read_csv",
    "write_json",
    "read_json",
    "write_text",
    "write_grid",
    "fig5_rows",
    "fig7_rows",
    "crossover_records",
    "table2_rows",
    "table3_rows",
    "frontier_rows",
    "audit_record",
    "relative_gap",
    "within_tolerance",
    "idle_ratio",
    "summarize_setting",
    "comparison_record",
    "render_markdown_report",
]
