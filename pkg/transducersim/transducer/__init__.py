"""
Transducer module initialization
"""

from .stages import StageResult, added_occupancy, external_efficiency
from .device import (
    SATURATED_OCCUPANCY,
    TransductionPoint,
    evaluate,
    occupancy_composition,
    single_step_point,
    two_step_point,
)

__all__ = [
    "StageResult",
    "added_occupancy",
    "external_efficiency",
    "SATURATED_OCCUPANCY",
    "TransductionPoint",
    "evaluate",
    "occupancy_composition",
    "single_step_point",
    "two_step_point",
]
