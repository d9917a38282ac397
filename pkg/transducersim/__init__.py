"""
transducersim - efficiency and thermal noise of superconducting electro-optic transducers
"""

__version__ = "0.1.0"
__author__ = "transducersim"

from .materials.registry import load_material_db
from .rates.geometry import FrequencyPlan, Geometry
from .transducer.device import TransductionPoint, evaluate, single_step_point, two_step_point

__all__ = [
    "load_material_db",
    "FrequencyPlan",
    "Geometry",
    "TransductionPoint",
    "evaluate",
    "single_step_point",
    "two_step_point",
]
