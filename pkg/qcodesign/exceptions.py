"""
Custom exceptions for qcodesign
"""


class QCodesignError(Exception):
    """Base exception for all qcodesign errors"""
    pass


class ConfigError(QCodesignError):
    """Raised when there's a configuration error"""
    pass


class CircuitError(QCodesignError):
    """Raised when a circuit document cannot be parsed or built"""
    pass


class ArchError(QCodesignError):
    """Raised when an architecture model breaks one of its invariants"""
    pass


class IncompleteAssignmentError(QCodesignError):
    """Raised when a tick assignment does not cover every gate exactly once"""
    pass


class InfeasibleError(QCodesignError):
    """Base for everything that cannot be satisfied under the electronics constraints"""
    pass


class UnschedulableGateError(InfeasibleError):
    """Raised when a gate can never be placed on the architecture"""

    def __init__(self, gate_id: int, reason: str):
        self.gate_id = gate_id
        self.reason = reason
        super().__init__(f"Gate {gate_id} is unschedulable: {reason}")


class InfeasibleClockError(InfeasibleError):
    """Raised when the quantum clock period is shorter than one classical cycle"""
    pass


class InfeasibleScheduleError(InfeasibleError):
    """Raised when a produced schedule violates an enabled constraint"""
    pass


class NoFeasibleScheduleError(InfeasibleError):
    """Raised when the oracle horizon admits no feasible schedule"""
    pass


class ScheduleTooLargeError(QCodesignError):
    """Raised when the exhaustive oracle is asked to enumerate too many gates"""
    pass


class CalibrationRangeError(QCodesignError):
    """Raised when an exchange model is queried outside its calibration range"""
    pass


class DataFileNotFoundError(QCodesignError):
    """Raised when a bundled data file is not found"""
    pass
