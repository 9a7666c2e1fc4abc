"""
qcodesign - co-design toolkit for a Bacon-Shor BS9(21) error-correction micro-architecture

Schedules the syndrome-extraction circuit under control-electronics
constraints, audits the classical control plane, and evaluates the
failure bound those choices imply.

Example:
    >>> from qcodesign import generate_bs9_21_half_round, default_bs9_21_arch, ConstraintSet, schedule
    >>> circuit = generate_bs9_21_half_round()
    >>> s = schedule(circuit, ConstraintSet.all_on(default_bs9_21_arch()), method="greedy")
    >>> s.M >= 0
    True
"""

__version__ = "1.0.0"
__license__ = "MIT"

# Core exports
from qcodesign.circuit import (
    Circuit,
    Gate,
    GateKind,
    census,
    generate_bs9_21_half_round,
    validate_circuit,
)
from qcodesign.config import RunConfig
from qcodesign.constraints import ConstraintSet, is_feasible
from qcodesign.control_plane import ClockConfig, LineBudget, StagePower, audit
from qcodesign.error_budget import ErrorBudgetInput, circuit_error_bound, crossover_gate_error
from qcodesign.exceptions import (
    ArchError,
    CalibrationRangeError,
    CircuitError,
    ConfigError,
    InfeasibleError,
    QCodesignError,
)
from qcodesign.gate_accuracy import ExponentialModel, TableModel, load_calibration
from qcodesign.layout import ArchModel, default_bs9_21_arch, load_arch
from qcodesign.scheduling import IdleWindowPolicy, Schedule, schedule

__all__ = [
    # Circuits
    "Circuit",
    "Gate",
    "GateKind",
    "census",
    "generate_bs9_21_half_round",
    "validate_circuit",
    # Architecture and constraints
    "ArchModel",
    "default_bs9_21_arch",
    "load_arch",
    "ConstraintSet",
    "is_feasible",
    # Scheduling
    "IdleWindowPolicy",
    "Schedule",
    "schedule",
    # Control plane
    "ClockConfig",
    "LineBudget",
    "StagePower",
    "audit",
    # Gate accuracy and error budget
    "TableModel",
    "ExponentialModel",
    "load_calibration",
    "ErrorBudgetInput",
    "circuit_error_bound",
    "crossover_gate_error",
    # Configuration
    "RunConfig",
    # Exceptions
    "QCodesignError",
    "ConfigError",
    "CircuitError",
    "ArchError",
    "InfeasibleError",
    "CalibrationRangeError",
]
