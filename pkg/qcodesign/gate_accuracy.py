"""
Exchange-gate rotation errors from voltage inaccuracy and timing jitter

All energies are in eV and all times in seconds; reports convert to
µeV / µV / ns for presentation.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from qcodesign.data import EXCHANGE_CALIBRATION, data_path
from qcodesign.exceptions import CalibrationRangeError, ConfigError

logger = logging.getLogger(__name__)

HBAR = 6.582119569e-16  # eV s
UEV = 1e-6
UV = 1e-6

DEFAULT_NOISE_LEVELS = (1 * UV, 10 * UV, 100 * UV, 1000 * UV)
DEFAULT_J_TARGETS = (0.069 * UEV, 0.5 * UEV, 1 * UEV, 2 * UEV)
SMALL_ANGLE_LIMIT = 1.0


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR


DEFAULT_CONSTANTS = PhysicalConstants()


def zpi_gate_time(j_target: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Duration of a Z(pi) rotation at exchange J: pi hbar / J"""
    if j_target <= 0:
        raise ValueError(f"j_target must be positive, got {j_target}")
    return math.pi * constants.hbar / j_target


def z_rotation_error(delta_j: float, j_target: float) -> float:
    """Phase error of a Z(pi) gate whose exchange is off by delta_j"""
    if j_target <= 0:
        raise ValueError(f"j_target must be positive, got {j_target}")
    return math.pi * delta_j / j_target


def jitter_rotation_error(
    delta_t: float, j_target: float, constants: PhysicalConstants = DEFAULT_CONSTANTS
) -> float:
    """Phase error from a gate running delta_t too long or too short"""
    return delta_t * j_target / constants.hbar


def total_rotation_error(
    delta_j: float,
    delta_t: float,
    j_target: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    return z_rotation_error(delta_j, j_target) + jitter_rotation_error(delta_t, j_target, constants)


def rotation_error_to_probability(phi: float) -> float:
    """Small-angle error probability phi^2"""
    if abs(phi) > SMALL_ANGLE_LIMIT:
        logger.warning(f"⚠️  Rotation error {phi:g} rad is outside the small-angle approximation")
    return phi * phi


def min_gate_time_from_jitter(delta_t: float, max_relative_error: float) -> float:
    """Shortest gate whose relative timing error stays within bound"""
    if max_relative_error <= 0:
        raise ValueError("max_relative_error must be positive")
    return delta_t / max_relative_error


def _loglog(x: float, xs: Sequence[float], ys: Sequence[float], allow_below: bool, extrapolate: bool, what: str) -> float:
    """Piecewise-linear interpolation in log-log space"""
    lx = math.log(x)
    lxs = np.log(np.asarray(xs, dtype=float))
    lys = np.log(np.asarray(ys, dtype=float))
    if len(xs) == 1:
        if math.isclose(x, xs[0], rel_tol=1e-12):
            return float(ys[0])
        raise CalibrationRangeError(f"{what} {x:g} needs at least two calibration samples")

    below = lx < lxs[0] and not math.isclose(x, xs[0], rel_tol=1e-12)
    above = lx > lxs[-1] and not math.isclose(x, xs[-1], rel_tol=1e-12)
    if (above and not extrapolate) or (below and not (allow_below or extrapolate)):
        raise CalibrationRangeError(
            f"{what} {x:g} is outside the calibrated range [{xs[0]:g}, {xs[-1]:g}]; "
            f"pass extrapolate=True to extend it"
        )
    if below:
        i = 0
    elif above:
        i = len(xs) - 2
    else:
        return float(np.exp(np.interp(lx, lxs, lys)))
    slope = (lys[i + 1] - lys[i]) / (lxs[i + 1] - lxs[i])
    return float(np.exp(lys[i] + slope * (lx - lxs[i])))


@dataclass(frozen=True)
class ExchangePoint:
    """Measured exchange error vs voltage error at one J target"""

    j_target: float
    samples: Tuple[Tuple[float, float], ...]

    def __post_init__(self) -> None:
        dvs = [dv for dv, _ in self.samples]
        djs = [dj for _, dj in self.samples]
        if not self.samples:
            raise ValueError("exchange point needs at least one sample")
        if any(dj <= 0 for dj in djs) or any(dv <= 0 for dv in dvs):
            raise ValueError("voltage and exchange errors must be positive")
        if any(b <= a for a, b in zip(dvs, dvs[1:])) or any(b <= a for a, b in zip(djs, djs[1:])):
            raise ValueError(f"exchange error must grow strictly with voltage error at J={self.j_target:g}")

    @property
    def delta_vs(self) -> List[float]:
        return [dv for dv, _ in self.samples]

    @property
    def delta_js(self) -> List[float]:
        return [dj for _, dj in self.samples]

    def delta_j(self, delta_v: float, extrapolate: bool = False) -> float:
        if delta_v == 0:
            return 0.0
        for dv, dj in self.samples:
            if math.isclose(dv, delta_v, rel_tol=1e-12):
                return dj
        return _loglog(delta_v, self.delta_vs, self.delta_js, True, extrapolate, "voltage error")


@dataclass(frozen=True)
class TableModel:
    """
    Calibration table with log-log interpolation

    Between voltage samples of a row and between J rows. Voltage errors
    below the smallest sample follow the first segment down to zero;
    anything above the largest sample, or any J outside the rows, needs
    extrapolate=True.
    """

    points: Tuple[ExchangePoint, ...]

    def __post_init__(self) -> None:
        js = [p.j_target for p in self.points]
        if not js:
            raise ValueError("calibration table is empty")
        if any(b <= a for a, b in zip(js, js[1:])):
            raise ValueError("calibration rows must have strictly increasing J targets")

    @property
    def j_range(self) -> Tuple[float, float]:
        return self.points[0].j_target, self.points[-1].j_target

    @property
    def delta_v_max(self) -> float:
        return min(p.delta_vs[-1] for p in self.points)

    def row(self, j_target: float) -> Optional[ExchangePoint]:
        for p in self.points:
            if math.isclose(p.j_target, j_target, rel_tol=1e-12):
                return p
        return None

    def delta_j(self, j_target: float, delta_v: float, extrapolate: bool = False) -> float:
        if delta_v == 0:
            return 0.0
        exact = self.row(j_target)
        if exact is not None:
            return exact.delta_j(delta_v, extrapolate)
        js = [p.j_target for p in self.points]
        djs = [p.delta_j(delta_v, extrapolate) for p in self.points]
        return _loglog(j_target, js, djs, False, extrapolate, "J target")


@dataclass(frozen=True)
class ExponentialModel:
    """dJ(dV) = J (exp(dV / V0) - 1) with V0 calibrated per J target"""

    v0_by_j: Tuple[Tuple[float, float], ...]

    @classmethod
    def from_table(cls, table: TableModel, calibration_dv: float = 1 * UV) -> "ExponentialModel":
        v0 = []
        for p in table.points:
            dj = p.delta_j(calibration_dv)
            v0.append((p.j_target, calibration_dv / math.log1p(dj / p.j_target)))
        return cls(tuple(v0))

    @property
    def j_range(self) -> Tuple[float, float]:
        return self.v0_by_j[0][0], self.v0_by_j[-1][0]

    @property
    def delta_v_max(self) -> float:
        return math.inf

    def v0(self, j_target: float, extrapolate: bool = False) -> float:
        js = [j for j, _ in self.v0_by_j]
        v0s = [v for _, v in self.v0_by_j]
        for j, v in self.v0_by_j:
            if math.isclose(j, j_target, rel_tol=1e-12):
                return v
        return _loglog(j_target, js, v0s, False, extrapolate, "J target")

    def delta_j(self, j_target: float, delta_v: float, extrapolate: bool = False) -> float:
        return j_target * math.expm1(delta_v / self.v0(j_target, extrapolate))


ExchangeModel = Union[TableModel, ExponentialModel]


def delta_j(model: ExchangeModel, j_target: float, delta_v: float, extrapolate: bool = False) -> float:
    """
    Exchange error caused by a gate-voltage error

    Raises:
        CalibrationRangeError: Query outside the calibration without extrapolate
    """
    return model.delta_j(j_target, delta_v, extrapolate)


def load_calibration(path: Optional[Union[str, Path]] = None) -> TableModel:
    """
    Read a calibration CSV (j_target_ueV, delta_v_uV, delta_j_eV)

    Raises:
        ConfigError: If the file is malformed
    """
    path = Path(path) if path else data_path(EXCHANGE_CALIBRATION)
    rows: Dict[float, List[Tuple[float, float]]] = {}
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            try:
                j = float(row["j_target_ueV"]) * UEV
                rows.setdefault(j, []).append((float(row["delta_v_uV"]) * UV, float(row["delta_j_eV"])))
            except (KeyError, TypeError, ValueError) as e:
                raise ConfigError(f"Malformed calibration row {row} in {path}: {e}") from e
    try:
        model = TableModel(tuple(
            ExchangePoint(j, tuple(sorted(samples))) for j, samples in sorted(rows.items())
        ))
    except ValueError as e:
        raise ConfigError(f"Invalid calibration in {path}: {e}") from e
    logger.info(f"✅ Loaded exchange calibration from: {path} ({len(model.points)} targets)")
    return model


@dataclass(frozen=True)
class Table3Row:
    j_target: float
    delta_v: float
    delta_j: float
    z_error: float
    gate_time: float


def table3_report(
    model: ExchangeModel,
    noise_levels: Sequence[float] = DEFAULT_NOISE_LEVELS,
    j_targets: Sequence[float] = DEFAULT_J_TARGETS,
    extrapolate: bool = False,
) -> List[Table3Row]:
    """Z(pi) rotation error for every (J target, voltage noise) pair"""
    rows = []
    for j in j_targets:
        for dv in noise_levels:
            dj = delta_j(model, j, dv, extrapolate)
            rows.append(Table3Row(j, dv, dj, z_rotation_error(dj, j), zpi_gate_time(j)))
    return rows


def max_voltage_noise(
    model: ExchangeModel,
    j_target: float,
    phi_max: float = 1e-2,
    delta_t: float = 0.0,
    extrapolate: bool = False,
) -> Optional[float]:
    """
    Largest voltage error keeping the Z(pi) rotation error within phi_max

    Returns:
        Voltage error in volts, or None when jitter alone exceeds phi_max

    Raises:
        CalibrationRangeError: The bound lies beyond the calibrated voltages
    """
    def excess(dv: float) -> float:
        dj = delta_j(model, j_target, dv, extrapolate)
        return total_rotation_error(dj, delta_t, j_target) - phi_max

    if excess(0.0) > 0:
        return None
    hi = model.delta_v_max if math.isfinite(model.delta_v_max) else 1.0
    while excess(hi) <= 0:
        if not extrapolate and math.isfinite(model.delta_v_max):
            raise CalibrationRangeError(
                f"Rotation error stays below {phi_max:g} up to {hi:g} V; pass extrapolate=True"
            )
        hi *= 2
    return optimize.brentq(excess, 0.0, hi, xtol=1e-15, rtol=1e-12)


@dataclass(frozen=True)
class FrontierRow:
    delta_v: float
    j_target: Optional[float]
    gate_time: Optional[float]
    rotation_error: Optional[float]


def gate_time_frontier(
    model: ExchangeModel,
    noise_levels: Sequence[float] = DEFAULT_NOISE_LEVELS,
    phi_max: float = 1e-2,
    delta_t: float = 0.0,
) -> List[FrontierRow]:
    """
    Shortest Z(pi) gate each voltage-noise level allows

    For every noise level, the largest calibrated J whose total rotation
    error stays within phi_max; None when even the smallest J fails.
    """
    j_lo, j_hi = model.j_range

    def excess(log_j: float, dv: float) -> float:
        j = math.exp(log_j)
        return total_rotation_error(delta_j(model, j, dv), delta_t, j) - phi_max

    rows = []
    for dv in noise_levels:
        lo, hi = math.log(j_lo), math.log(j_hi)
        if excess(lo, dv) > 0:
            rows.append(FrontierRow(dv, None, None, None))
            continue
        if excess(hi, dv) <= 0:
            j = j_hi
        else:
            j = math.exp(optimize.brentq(excess, lo, hi, args=(dv,), xtol=1e-14, rtol=1e-12))
        error = total_rotation_error(delta_j(model, j, dv), delta_t, j)
        rows.append(FrontierRow(dv, j, zpi_gate_time(j), error))
    return rows


__all__ = [
    "HBAR",
    "UEV",
    "UV",
    "DEFAULT_NOISE_LEVELS",
    "DEFAULT_J_TARGETS",
    "DEFAULT_CONSTANTS",
    "PhysicalConstants",
    "ExchangePoint",
    "TableModel",
    "ExponentialModel",
    "ExchangeModel",
    "Table3Row",
    "FrontierRow",
    "zpi_gate_time",
    "z_rotation_error",
    "jitter_rotation_error",
    "total_rotation_error",
    "rotation_error_to_probability",
    "min_gate_time_from_jitter",
    "delta_j",
    "load_calibration",
    "table3_report",
    "max_voltage_noise",
    "gate_time_frontier",
]
