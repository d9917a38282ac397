"""
Exception hierarchy for transducersim
"""

from typing import Optional


class TransducerError(Exception):
    """Base class for every error raised by transducersim"""


class ConfigError(TransducerError):
    """Invalid or incomplete run configuration"""


class DomainError(TransducerError, ValueError):
    """Argument outside the domain of a physical law"""


class NormalStateError(DomainError):
    """Superconductor evaluated at or above its critical temperature"""


class PairBreakingError(DomainError):
    """Photon energy reaches the pair-breaking threshold 2*gap"""


class RangeError(DomainError):
    """Query outside the range covered by tabulated data"""


class InfeasibleError(TransducerError):
    """Unit cooperativity cannot be reached (zero coupling)"""


class SpecError(TransducerError):
    """Invalid sweep or optimization spec"""


class MaterialLoadError(TransducerError):
    """Material database entry that cannot be loaded"""

    def __init__(self, entry: str, message: str):
        self.entry = entry
        super().__init__(f"material '{entry}': {message}")


class SolverError(TransducerError):
    """Stage law failed while solving the heating equation"""

    def __init__(self, message: str, temperature: Optional[float] = None):
        self.temperature = temperature
        if temperature is not None:
            message = f"{message} (at T = {temperature:.6g} K)"
        super().__init__(message)
