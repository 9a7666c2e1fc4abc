"""
Classical control stack model: line budgets, control-word bandwidth,
quantum/classical clock relation, cryostat staging
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, model_validator

from qcodesign.error_budget import idle_error_from_clock
from qcodesign.exceptions import InfeasibleClockError
from qcodesign.layout import DIRECT_LINES_PER_QUBIT, ArchModel

logger = logging.getLogger(__name__)

NS = 1e-9
CPHASE_SWITCH_LINES = 24
FRIDGE_LINE_LIMIT = 64
DEFAULT_FIG5_RATIOS = tuple(range(1, 61))
STAGES = ("300K", "4K", "100mK")

_REL_TOL = 1e-9


class ClockConfig(BaseModel):
    """Classical and quantum clock periods plus the serial link they feed"""

    t_clk: float = Field(default=1 * NS, gt=0, description="Classical clock period (s)")
    t_qclk: float = Field(default=30 * NS, gt=0, description="Quantum clock period (s)")
    data_lines: int = Field(default=2, ge=1, description="Serial data lines")
    word_bits: int = Field(default=45, ge=0, description="Control word width")

    @model_validator(mode="after")
    def validate_periods(self) -> "ClockConfig":
        if self.t_qclk < self.t_clk and not math.isclose(self.t_qclk, self.t_clk, rel_tol=_REL_TOL):
            raise ValueError("t_qclk must be at least t_clk")
        return self


class LineBudget(BaseModel):
    """Signal lines from room temperature down to the 100 mK stage"""

    awg_lines: int = Field(default=16, ge=0)
    measurement_lines: int = Field(default=16, ge=0)
    inductor_lines: int = Field(default=22, ge=0)
    shared_bias_lines: int = Field(default=10, ge=0)
    tuning_lines: int = Field(default=1, ge=0)
    serial_control_lines: int = Field(default=4, ge=0)
    fridge_limit: int = Field(default=FRIDGE_LINE_LIMIT, ge=0)

    def categories(self) -> List[Tuple[str, int]]:
        return [
            ("awg", self.awg_lines),
            ("measurement", self.measurement_lines),
            ("inductor", self.inductor_lines),
            ("shared_bias", self.shared_bias_lines),
            ("tuning", self.tuning_lines),
            ("serial_control", self.serial_control_lines),
        ]


class StagePower(BaseModel):
    """Heat load placed on one cryostat stage"""

    stage: str
    cooling_budget: Optional[float] = Field(default=None, ge=0, description="Watts; None = unbounded")
    demand: float = Field(default=0.0, ge=0, description="Watts")

    @model_validator(mode="after")
    def validate_budget(self) -> "StagePower":
        if self.stage not in STAGES:
            raise ValueError(f"stage must be one of {', '.join(STAGES)}")
        if self.stage != "300K" and not self.cooling_budget:
            raise ValueError(f"cryogenic stage {self.stage} needs a positive cooling budget")
        return self


def default_stages() -> List[StagePower]:
    return [
        StagePower(stage="300K", demand=100e-3),
        StagePower(stage="4K", cooling_budget=1.0, demand=0.0),
        StagePower(stage="100mK", cooling_budget=400e-6, demand=1.2e-3),
    ]


def control_word_bits(n_cphase_switch_bits: int, n_mux_bits: int) -> int:
    return n_cphase_switch_bits + n_mux_bits


def arch_control_word_bits(arch: ArchModel, mux_bits_per_qubit: int = 1) -> int:
    """CPHASE switch bits plus MUX/DEMUX select bits for every qubit"""
    return control_word_bits(arch.n_cphase_switches, mux_bits_per_qubit * arch.n_qubits)


def classical_cycles_per_tick(t_qclk: float, t_clk: float) -> int:
    """Whole classical cycles inside one quantum period"""
    ratio = t_qclk / t_clk
    cycles = math.floor(ratio)
    if math.isclose(ratio, cycles + 1, rel_tol=_REL_TOL):
        cycles += 1
    return cycles


def serial_lines_required(word_bits: int, t_qclk: float, t_clk: float) -> int:
    """
    Serial data lines needed to load one control word per quantum period

    Raises:
        InfeasibleClockError: If not a single classical cycle fits in t_qclk
    """
    if t_clk <= 0:
        raise ValueError("t_clk must be positive")
    cycles = classical_cycles_per_tick(t_qclk, t_clk)
    if cycles == 0:
        raise InfeasibleClockError(
            f"T_Qclk={t_qclk:g}s holds no full classical cycle of T_clk={t_clk:g}s"
        )
    return -(-word_bits // cycles)


def min_qclk(word_bits: int, data_lines: int, t_clk: float) -> float:
    """Shortest quantum period that still fits the control word transfer"""
    if data_lines < 1:
        raise ValueError("data_lines must be at least 1")
    return -(-word_bits // data_lines) * t_clk


def pipeline_feasible(cfg: ClockConfig) -> bool:
    needed = min_qclk(cfg.word_bits, cfg.data_lines, cfg.t_clk)
    return needed <= cfg.t_qclk or math.isclose(needed, cfg.t_qclk, rel_tol=_REL_TOL)


def direct_line_count(n_qubits: int, lines_per_qubit: int, switch_lines: int) -> int:
    return n_qubits * lines_per_qubit + switch_lines


class LineTotal(NamedTuple):
    total: int
    within_limit: bool


def line_budget_total(b: LineBudget) -> LineTotal:
    total = sum(count for _, count in b.categories())
    return LineTotal(total, total <= b.fridge_limit)


@dataclass(frozen=True)
class StageVerdict:
    stage: str
    demand: float
    cooling_budget: Optional[float]
    feasible: bool


def staging_feasible(stages: Iterable[StagePower]) -> List[StageVerdict]:
    """Per-stage demand vs cooling budget; room temperature is always feasible"""
    verdicts = []
    for s in stages:
        ok = s.stage == "300K" or s.cooling_budget is None or s.demand <= s.cooling_budget
        verdicts.append(StageVerdict(s.stage, s.demand, s.cooling_budget, ok))
        if not ok:
            logger.info(f"🔥 Stage {s.stage}: demand {s.demand:g} W exceeds {s.cooling_budget:g} W")
    return verdicts


@dataclass(frozen=True)
class Fig5Row:
    ratio: int
    lines_required: int


def fig5_sweep(word_bits: int = 45, ratios: Sequence[int] = DEFAULT_FIG5_RATIOS) -> List[Fig5Row]:
    """Serial lines needed as the T_Qclk/T_clk ratio grows"""
    return [Fig5Row(r, serial_lines_required(word_bits, float(r), 1.0)) for r in ratios]


@dataclass(frozen=True)
class ControlAudit:
    """Everything the control-plane audit reports"""

    direct_lines: int
    line_total: int
    line_limit: int
    lines_within_limit: bool
    line_categories: List[Tuple[str, int]]
    word_bits: int
    min_qclk: float
    t_qclk: float
    data_lines: int
    serial_lines_at_qclk: int
    pipeline_feasible: bool
    stages: List[StageVerdict]
    idle_errors: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def all_stages_feasible(self) -> bool:
        return all(s.feasible for s in self.stages)


def audit(
    clock: ClockConfig,
    lines: LineBudget,
    stages: Sequence[StagePower],
    n_qubits: int = 21,
    lines_per_qubit: int = DIRECT_LINES_PER_QUBIT,
    switch_lines: int = CPHASE_SWITCH_LINES,
    t2_values: Sequence[float] = (),
) -> ControlAudit:
    """
    Audit the control plane for one configuration

    Args:
        clock: Clock periods, serial lines and control word width
        lines: Multiplexed line budget
        stages: Cryostat stage loads
        n_qubits: Qubits wired directly in the unmultiplexed baseline
        lines_per_qubit: Direct lines per qubit in that baseline
        switch_lines: CPHASE switch lines in that baseline
        t2_values: Coherence times used to derive the idle error q

    Returns:
        ControlAudit
    """
    total = line_budget_total(lines)
    result = ControlAudit(
        direct_lines=direct_line_count(n_qubits, lines_per_qubit, switch_lines),
        line_total=total.total,
        line_limit=lines.fridge_limit,
        lines_within_limit=total.within_limit,
        line_categories=lines.categories(),
        word_bits=clock.word_bits,
        min_qclk=min_qclk(clock.word_bits, clock.data_lines, clock.t_clk),
        t_qclk=clock.t_qclk,
        data_lines=clock.data_lines,
        serial_lines_at_qclk=serial_lines_required(clock.word_bits, clock.t_qclk, clock.t_clk),
        pipeline_feasible=pipeline_feasible(clock),
        stages=staging_feasible(stages),
        idle_errors=[(t2, idle_error_from_clock(clock.t_qclk, t2)) for t2 in t2_values],
    )
    logger.info(
        f"🔌 Audit: {result.direct_lines} direct lines, {result.line_total} multiplexed, "
        f"{result.word_bits}-bit word"
    )
    return result


__all__ = [
    "NS",
    "CPHASE_SWITCH_LINES",
    "FRIDGE_LINE_LIMIT",
    "DEFAULT_FIG5_RATIOS",
    "ClockConfig",
    "LineBudget",
    "StagePower",
    "LineTotal",
    "StageVerdict",
    "Fig5Row",
    "ControlAudit",
    "default_stages",
    "control_word_bits",
    "arch_control_word_bits",
    "classical_cycles_per_tick",
    "serial_lines_required",
    "min_qclk",
    "pipeline_feasible",
    "direct_line_count",
    "line_budget_total",
    "staging_feasible",
    "fig5_sweep",
    "audit",
]
