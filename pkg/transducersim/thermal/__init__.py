"""
Thermal module initialization
"""

from .heating import HeatingInputs, steady_state_dT, transient_heating
from .solver import (
    HeatingStage,
    ThermalSolution,
    dT_scaling_eo,
    dT_scaling_ki,
    solve_self_consistent_dT,
)

__all__ = [
    "HeatingInputs",
    "steady_state_dT",
    "transient_heating",
    "HeatingStage",
    "ThermalSolution",
    "dT_scaling_eo",
    "dT_scaling_ki",
    "solve_self_consistent_dT",
]
