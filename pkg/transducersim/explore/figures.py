"""
Frozen sweep specs for the reference figure datasets
"""

import dataclasses
import hashlib
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import pandas as pd
import yaml

from transducersim.exceptions import SpecError
from transducersim.explore.sweep import Axis, SweepSpec, run_sweep
from transducersim.materials.registry import MaterialRegistry
from transducersim.utils.config import RunConfig, resolve_run_config

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

GRID_POINTS = 60
W_RANGE = (0.2e-6, 20e-6)  # m
L_RANGE = (10e-6, 1e-2)  # m
OMEGA_MU = TWO_PI * 8e9
OMEGA_I = TWO_PI * 600e9
OMEGA_I_RANGE = (TWO_PI * 10e9, TWO_PI * 1e12)
T_BASE = 0.01  # K

_GEOMETRY_AXES = (
    Axis("geometry.w", "log", W_RANGE[0], W_RANGE[1], GRID_POINTS),
    Axis("geometry.L", "log", L_RANGE[0], L_RANGE[1], GRID_POINTS),
)
_SINGLE_FIXED = {"frequencies.omega_mu": OMEGA_MU, "temperatures.T1": T_BASE}
_TWO_STEP_FIXED = {
    "frequencies.omega_mu": OMEGA_MU,
    "frequencies.omega_i": OMEGA_I,
    "temperatures.T1": T_BASE,
    "temperatures.T2": T_BASE,
}

_SINGLE_GEOMETRY = SweepSpec(axes=_GEOMETRY_AXES, fixed=_SINGLE_FIXED, scheme="single")
_TWO_STEP_GEOMETRY = SweepSpec(axes=_GEOMETRY_AXES, fixed=_TWO_STEP_FIXED, scheme="two_step")
_INTERMEDIATE_FREQUENCY = SweepSpec(
    axes=(
        Axis("temperatures.T2", "log", 0.01, 1.0, 2),
        Axis("frequencies.omega_i", "log", OMEGA_I_RANGE[0], OMEGA_I_RANGE[1], GRID_POINTS),
    ),
    fixed={
        "frequencies.omega_mu": OMEGA_MU,
        "temperatures.T1": T_BASE,
        "geometry.w": 1e-6,
        "geometry.L": 300e-6,
    },
    scheme="two_step",
)

# figure id -> (spec, {output column: record column})
FIGURES = {
    "fig1c": (_SINGLE_GEOMETRY, {"w_m": "w_m", "L_m": "L_m", "eta1": "eta_total"}),
    "fig1d": (_SINGLE_GEOMETRY, {"w_m": "w_m", "L_m": "L_m", "n_mu1": "n_total"}),
    "fig2c": (_TWO_STEP_GEOMETRY, {"w_m": "w_m", "L_m": "L_m", "eta2": "eta_total"}),
    "fig2d": (_TWO_STEP_GEOMETRY, {"w_m": "w_m", "L_m": "L_m", "n_mu2": "n_total"}),
    "fig3e": (
        _INTERMEDIATE_FREQUENCY,
        {"omega_i_rad_s": "omega_i_rad_s", "T2_K": "T2_K", "eta2": "eta_total", "n_mu2": "n_total"},
    ),
    "fig3f": (
        _INTERMEDIATE_FREQUENCY,
        {"omega_i_rad_s": "omega_i_rad_s", "T2_K": "T2_K", "eta2": "eta_total", "n_mu2": "n_total"},
    ),
    # open-loop (base-temperature) stage heating
    "figIII": (_TWO_STEP_GEOMETRY, {"w_m": "w_m", "L_m": "L_m", "dT_KI_K": "ki_dT_open_loop_K"}),
    "figIV": (_TWO_STEP_GEOMETRY, {"w_m": "w_m", "L_m": "L_m", "dT_EO_K": "eo_dT_open_loop_K"}),
}

FIGURE_IDS = tuple(FIGURES)


@dataclass(frozen=True)
class FigureData:
    """Figure table plus the spec that produced it"""

    figure_id: str
    table: pd.DataFrame
    spec: SweepSpec
    spec_hash: str
    resolution: Optional[int] = None


def spec_hash(spec: SweepSpec) -> str:
    """SHA-256 of the canonical YAML serialization of a spec"""
    text = yaml.safe_dump(spec.to_dict(), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()


def figure_spec(figure_id: str, resolution: Optional[int] = None) -> SweepSpec:
    """
    Frozen spec of a figure, optionally re-gridded

    Args:
        figure_id: One of FIGURE_IDS
        resolution: Point count replacing every axis with more than two points
    """
    try:
        spec, _ = FIGURES[figure_id]
    except KeyError:
        raise SpecError(f"unknown figure '{figure_id}' (known: {', '.join(FIGURE_IDS)})")
    if resolution is None:
        return spec
    if resolution < 2:
        raise SpecError(f"resolution must be at least 2, got {resolution}")
    axes = tuple(
        dataclasses.replace(axis, count=resolution) if axis.count > 2 else axis
        for axis in spec.axes
    )
    return dataclasses.replace(spec, axes=axes)


def figure_data(
    figure_id: str,
    registry: MaterialRegistry,
    jobs: int = 1,
    resolution: Optional[int] = None,
    base_config: Optional[RunConfig] = None,
) -> FigureData:
    """
    Reproduce a figure dataset

    Args:
        figure_id: One of FIGURE_IDS
        registry: Material registry
        jobs: Worker processes
        resolution: Optional re-gridding for previews
        base_config: Configuration the frozen spec is applied to (defaults otherwise)

    Returns:
        FigureData with the selected, renamed columns plus ``flags``
    """
    spec = figure_spec(figure_id, resolution)
    _, columns = FIGURES[figure_id]
    base = base_config or resolve_run_config({})

    logger.info(f"Generating {figure_id} on a {'x'.join(map(str, spec.shape))} grid")
    frame = run_sweep(spec, registry, base, jobs=jobs)
    table = frame[list(columns.values()) + ["flags"]].copy()
    table.columns = list(columns) + ["flags"]
    return FigureData(
        figure_id=figure_id,
        table=table.reset_index(drop=True),
        spec=spec,
        spec_hash=spec_hash(FIGURES[figure_id][0]),
        resolution=resolution,
    )


def figure_provenance(data: FigureData) -> Dict[str, Any]:
    return {
        "figure": data.figure_id,
        "spec": data.spec.to_dict(),
        "frozen_spec_sha256": data.spec_hash,
        "resolution": data.resolution,
    }
