"""
Pessimistic failure bound of a distance-3 correction circuit

    p_circuit = M(M-1)/2 q^2 + (N p)(M q) + N(N-1)/2 p^2

N gates fail with probability p each, M idle ticks with probability q each.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

logger = logging.getLogger(__name__)

N_BS9 = 108
M_UNCONSTRAINED_REF = 48
M_CONSTRAINED_REF = 95
DEFAULT_Q_LIST = (1e-4, 1e-5, 1e-6)
DEFAULT_P_GRID = tuple(np.logspace(-7, -2, 51))

T2_BULK = 60e-3
T2_OXIDE = 0.3e-3

# Published penalty claims the computed ratios are compared against
CLAIMED_CROSSOVER_RATIO = 5.0
CLAIMED_CEILING_RATIO = 3.0
CLAIM_TOLERANCE = 0.25


@dataclass(frozen=True)
class ErrorBudgetInput:
    """Inputs of the failure bound"""

    n_gates: int
    idle_ticks: int
    gate_error: float
    idle_error: float
    t2: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n_gates < 0 or self.idle_ticks < 0:
            raise ValueError("n_gates and idle_ticks must be non-negative")
        for name in ("gate_error", "idle_error"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.t2 is not None and self.t2 <= 0:
            raise ValueError("t2 must be positive")


@dataclass(frozen=True)
class BudgetResult:
    p_circuit: float
    term_idle_pair: float
    term_cross: float
    term_gate_pair: float
    beneficial_vs_gate: bool
    beneficial_vs_idle: bool

    @property
    def exceeds_one(self) -> bool:
        return self.p_circuit > 1.0


def _pairs(n: float) -> float:
    return n * (n - 1) / 2


def bound_terms(n: float, m: float, p, q) -> Tuple:
    """The three addends; p and q may be numpy arrays"""
    return _pairs(m) * q ** 2, (n * p) * (m * q), _pairs(n) * p ** 2


def circuit_error_bound(inp: ErrorBudgetInput) -> BudgetResult:
    """
    Evaluate the failure bound (no clamping; exceeds_one flags values above 1)

    Example:
        >>> f"{circuit_error_bound(ErrorBudgetInput(108, 48, 0.0, 1e-4)).p_circuit:.4g}"
        '1.128e-05'
    """
    idle_pair, cross, gate_pair = bound_terms(inp.n_gates, inp.idle_ticks, inp.gate_error, inp.idle_error)
    total = idle_pair + cross + gate_pair
    if total > 1.0:
        logger.warning(f"⚠️  Failure bound {total:g} exceeds 1")
    return BudgetResult(
        p_circuit=total,
        term_idle_pair=idle_pair,
        term_cross=cross,
        term_gate_pair=gate_pair,
        beneficial_vs_gate=total < inp.gate_error,
        beneficial_vs_idle=total < inp.idle_error,
    )


def p_circuit(n: int, m: int, p: float, q: float) -> float:
    return sum(bound_terms(n, m, p, q))


def idle_error_from_clock(t_qclk: float, t2: float) -> float:
    """Idle error per tick, q = T_Qclk / T2, saturating at 1"""
    if t2 <= 0:
        raise ValueError("t2 must be positive")
    if t_qclk > t2:
        logger.warning(f"⚠️  T_Qclk {t_qclk:g}s exceeds T2 {t2:g}s; idle error saturated at 1")
        return 1.0
    return t_qclk / t2


def idle_error_table(t_qclk: float, t2_values: Sequence[float] = (T2_OXIDE, T2_BULK)) -> List[Tuple[float, float]]:
    return [(t2, idle_error_from_clock(t_qclk, t2)) for t2 in t2_values]


def benefit_ceiling(n: int, m: int, q: float) -> float:
    """Failure bound as the gate error goes to zero"""
    return _pairs(m) * q ** 2


def crossover_gate_error(n: int, m: int, q: float) -> Optional[float]:
    """
    Gate error p* at which the bound equals the bare idle error q

    Returns:
        p*, or None when the ceiling already reaches q
    """
    c = benefit_ceiling(n, m, q) - q
    if c >= 0:
        return None
    a = _pairs(n)
    b = n * m * q
    if a == 0:
        return -c / b if b > 0 else None
    return 2 * (-c) / (b + math.sqrt(b * b - 4 * a * c))


def crossover_gate_error_bisect(n: int, m: int, q: float) -> Optional[float]:
    """Bisection reference for crossover_gate_error"""
    if benefit_ceiling(n, m, q) >= q or (n < 2 and n * m * q == 0):
        return None

    def residual(p: float) -> float:
        return p_circuit(n, m, p, q) - q

    hi = 1.0
    while residual(hi) <= 0:
        hi *= 2
    return optimize.bisect(residual, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=2000)


@dataclass(frozen=True)
class Fig7Curve:
    """Failure bound over the gate-error grid for one (q, M)"""

    q: float
    m: int
    p: np.ndarray
    p_circuit: np.ndarray
    term_idle_pair: np.ndarray
    term_cross: np.ndarray
    term_gate_pair: np.ndarray
    crossover: Optional[float]


def fig7_sweep(
    n: int = N_BS9,
    m_constrained: int = M_CONSTRAINED_REF,
    m_unconstrained: int = M_UNCONSTRAINED_REF,
    q_list: Sequence[float] = DEFAULT_Q_LIST,
    p_grid: Sequence[float] = DEFAULT_P_GRID,
) -> List[Fig7Curve]:
    """
    Failure-bound curves for every idle error rate and both idle counts

    Raises:
        ValueError: If p_grid is not sorted ascending
    """
    grid = np.asarray(p_grid, dtype=float)
    if grid.size and np.any(np.diff(grid) < 0):
        raise ValueError("p_grid must be sorted ascending")

    curves = []
    for q in q_list:
        for m in (m_unconstrained, m_constrained):
            idle_pair, cross, gate_pair = bound_terms(n, m, grid, q)
            idle_pair = np.full_like(grid, idle_pair)
            curves.append(Fig7Curve(
                q=q,
                m=m,
                p=grid,
                p_circuit=idle_pair + cross + gate_pair,
                term_idle_pair=idle_pair,
                term_cross=cross,
                term_gate_pair=gate_pair,
                crossover=crossover_gate_error(n, m, q),
            ))
    return curves


@dataclass(frozen=True)
class PenaltyReport:
    """How much the electronics constraints cost, against the published claims"""

    q: float
    crossover_unconstrained: Optional[float]
    crossover_constrained: Optional[float]
    crossover_ratio: Optional[float]
    ceiling_ratio: Optional[float]
    claimed_crossover_ratio: float = CLAIMED_CROSSOVER_RATIO
    claimed_ceiling_ratio: float = CLAIMED_CEILING_RATIO

    @staticmethod
    def _off(value: Optional[float], claim: float) -> bool:
        return value is None or abs(value - claim) / claim > CLAIM_TOLERANCE

    @property
    def crossover_discrepancy(self) -> bool:
        return self._off(self.crossover_ratio, self.claimed_crossover_ratio)

    @property
    def ceiling_discrepancy(self) -> bool:
        return self._off(self.ceiling_ratio, self.claimed_ceiling_ratio)


def constraint_penalty(
    n: int = N_BS9,
    m_constrained: int = M_CONSTRAINED_REF,
    m_unconstrained: int = M_UNCONSTRAINED_REF,
    q: float = 1e-4,
) -> PenaltyReport:
    """Crossover and ceiling ratios between the two idle counts"""
    p_u = crossover_gate_error(n, m_unconstrained, q)
    p_c = crossover_gate_error(n, m_constrained, q)
    ceil_u = benefit_ceiling(n, m_unconstrained, q)
    ceil_c = benefit_ceiling(n, m_constrained, q)
    return PenaltyReport(
        q=q,
        crossover_unconstrained=p_u,
        crossover_constrained=p_c,
        crossover_ratio=p_u / p_c if p_u is not None and p_c else None,
        ceiling_ratio=ceil_c / ceil_u if ceil_u > 0 else None,
    )


__all__ = [
    "N_BS9",
    "M_UNCONSTRAINED_REF",
    "M_CONSTRAINED_REF",
    "DEFAULT_Q_LIST",
    "DEFAULT_P_GRID",
    "T2_BULK",
    "T2_OXIDE",
    "ErrorBudgetInput",
    "BudgetResult",
    "Fig7Curve",
    "PenaltyReport",
    "bound_terms",
    "circuit_error_bound",
    "p_circuit",
    "idle_error_from_clock",
    "idle_error_table",
    "benefit_ceiling",
    "crossover_gate_error",
    "crossover_gate_error_bisect",
    "fig7_sweep",
    "constraint_penalty",
]
