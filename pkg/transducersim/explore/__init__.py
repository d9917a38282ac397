"""
Explore module initialization
"""

from .sweep import Axis, SweepSpec, load_sweep_spec, run_sweep
from .figures import FIGURE_IDS, FigureData, figure_data, figure_spec, spec_hash
from .optimize import OptimizationResult, OptimizeSpec, optimize_geometry

__all__ = [
    "Axis",
    "SweepSpec",
    "load_sweep_spec",
    "run_sweep",
    "FIGURE_IDS",
    "FigureData",
    "figure_data",
    "figure_spec",
    "spec_hash",
    "OptimizationResult",
    "OptimizeSpec",
    "optimize_geometry",
]
