"""
Rates module initialization: loss budgets, couplings and pump requirements
"""

from .geometry import CouplingRates, FrequencyPlan, Geometry, KineticInductorParams, LossBudget
from .losses import intermediate_loss_rates, microwave_loss_rates, optical_loss_rates
from .coupling import (
    XiTable,
    cooperativity_eo,
    cooperativity_ki,
    eo_coupling,
    ki_coupling,
    ki_params,
    mode_volumes,
    pump_photons_eo,
    pump_photons_ki,
)

__all__ = [
    "CouplingRates",
    "FrequencyPlan",
    "Geometry",
    "KineticInductorParams",
    "LossBudget",
    "intermediate_loss_rates",
    "microwave_loss_rates",
    "optical_loss_rates",
    "XiTable",
    "cooperativity_eo",
    "cooperativity_ki",
    "eo_coupling",
    "ki_coupling",
    "ki_params",
    "mode_volumes",
    "pump_photons_eo",
    "pump_photons_ki",
]
