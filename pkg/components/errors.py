"""
Exception hierarchy shared by the simulator components and the CLI
"""
from typing import Optional, Tuple


class SimulationError(Exception):
    """Base class for every error raised by the simulator"""


class UsageError(SimulationError, ValueError):
    """Bad parameters, dimension mismatch or conflicting options"""


class ValidationError(SimulationError):
    """A matrix or state failed a physical validity check"""


class StructureError(ValidationError):
    """A density matrix has a non-X entry above tolerance"""

    def __init__(self, message: str, index_pair: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.index_pair = index_pair


class NotPSDError(ValidationError):
    """A matrix has an eigenvalue below the PSD floor"""


class AnalysisError(SimulationError):
    """An analysis quantity is undefined for the requested configuration"""
