"""
Materials module initialization: constants, occupancy, conductivity and the material registry
"""

from .constants import CONSTANTS, PhysicalConstants
from .occupancy import bose_einstein
from .conductivity import ComplexConductivity, SuperconductorParams, sc_conductivity
from .laws import heat_capacity, thermal_conductivity
from .registry import (
    Material,
    MaterialRegistry,
    OpticalMaterialParams,
    ThermalMaterialParams,
    load_material_db,
)

__all__ = [
    "CONSTANTS",
    "PhysicalConstants",
    "bose_einstein",
    "ComplexConductivity",
    "SuperconductorParams",
    "sc_conductivity",
    "heat_capacity",
    "thermal_conductivity",
    "Material",
    "MaterialRegistry",
    "OpticalMaterialParams",
    "ThermalMaterialParams",
    "load_material_db",
]
