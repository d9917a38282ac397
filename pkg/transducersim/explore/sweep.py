"""
Cartesian parameter sweeps over design points
"""

import dataclasses
import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from transducersim.exceptions import ConfigError, SpecError
from transducersim.materials.registry import MaterialRegistry
from transducersim.transducer.device import TransductionPoint, evaluate
from transducersim.utils.config import PARAMETER_PATHS, SCHEMES, RunConfig
from transducersim.utils.io import records_to_frame
from transducersim.utils.units import parse_quantity

logger = logging.getLogger(__name__)

GRIDS = ("linear", "log")


@dataclass(frozen=True)
class Axis:
    """
    One sweep axis; values are SI (rad/s for frequency paths)
    """

    path: str
    grid: str
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.path not in PARAMETER_PATHS:
            raise SpecError(f"unknown parameter path '{self.path}'")
        if self.grid not in GRIDS:
            raise SpecError(f"axis {self.path}: grid must be linear or log, got '{self.grid}'")
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise SpecError(
                f"axis {self.path}: count must be a positive integer, got {self.count!r}"
            )
        if self.count == 1:
            if self.min != self.max:
                raise SpecError(f"axis {self.path}: a single-point axis needs min == max")
        elif not self.min < self.max:
            raise SpecError(f"axis {self.path}: min must be below max")
        if self.grid == "log" and not self.min > 0:
            raise SpecError(f"axis {self.path}: log grid needs min > 0")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.min])
        if self.grid == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "path": self.path,
            "grid": self.grid,
            "min": self.min,
            "max": self.max,
            "count": self.count,
        }


@dataclass(frozen=True)
class SweepSpec:
    """Sweep axes (last axis fastest), fixed overrides and conversion scheme"""

    axes: Tuple[Axis, ...]
    fixed: Dict[str, float] = field(default_factory=dict)
    scheme: str = "single"

    def __post_init__(self):
        if not self.axes:
            raise SpecError("sweep needs at least one axis")
        if self.scheme not in SCHEMES:
            raise SpecError(f"scheme must be one of {SCHEMES}, got '{self.scheme}'")
        paths = [axis.path for axis in self.axes]
        if len(set(paths)) != len(paths):
            raise SpecError("duplicate sweep axis path")
        for path in self.fixed:
            if path not in PARAMETER_PATHS:
                raise SpecError(f"unknown parameter path '{path}'")
            if path in paths:
                raise SpecError(f"'{path}' is both fixed and swept")

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(axis.count for axis in self.axes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheme": self.scheme,
            "axes": [axis.to_dict() for axis in self.axes],
            "fixed": dict(sorted(self.fixed.items())),
        }

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> "SweepSpec":
        """
        Build a spec from its YAML form

        Axis bounds and fixed values go through the unit parsers, so bare
        numbers on frequency paths are Hz and suffixed strings are accepted.
        """
        if not isinstance(document, Mapping):
            raise SpecError("sweep spec must be a mapping")
        try:
            axes = []
            for entry in document.get("axes") or []:
                path = entry["path"]
                axes.append(
                    Axis(
                        path=path,
                        grid=entry.get("grid", "linear"),
                        min=parse_path_value(path, entry["min"]),
                        max=parse_path_value(path, entry["max"]),
                        count=entry["count"],
                    )
                )
            fixed = {
                path: parse_path_value(path, value)
                for path, value in (document.get("fixed") or {}).items()
            }
        except (KeyError, TypeError, ValueError) as e:
            raise SpecError(f"malformed sweep spec: {e!r}") from e
        except ConfigError as e:
            raise SpecError(str(e)) from e
        return cls(axes=tuple(axes), fixed=fixed, scheme=document.get("scheme", "single"))


def parse_path_value(path: str, value: Any) -> float:
    """Parse a spec-file value for a parameter path (bare frequencies are Hz)"""
    kind = PARAMETER_PATHS.get(path)
    if kind is None:
        raise SpecError(f"unknown parameter path '{path}'")
    if kind == "number":
        return float(value)
    return parse_quantity(value, kind)


def base_config_for(spec: SweepSpec, base: RunConfig) -> RunConfig:
    """Switch a base configuration to the spec's scheme and apply its fixed values"""
    if spec.scheme == "single":
        config = dataclasses.replace(base, scheme="single", omega_i=None)
    else:
        omega_i = spec.fixed.get("frequencies.omega_i", base.omega_i)
        for axis in spec.axes:
            if axis.path == "frequencies.omega_i":
                omega_i = axis.min
        if omega_i is None:
            raise SpecError(
                "two_step sweep needs frequencies.omega_i (fixed, swept or in the base config)"
            )
        config = dataclasses.replace(base, scheme="two_step", omega_i=omega_i)
    return config.with_overrides(spec.fixed)


def evaluate_record(config: RunConfig, registry: MaterialRegistry) -> Dict[str, Any]:
    """Evaluate one configuration and flatten it (worker entry point)"""
    return evaluate(config, registry).to_record()


def evaluate_point(config: RunConfig, registry: MaterialRegistry) -> TransductionPoint:
    """Evaluate one configuration (worker entry point)"""
    return evaluate(config, registry)


def parallel_map(
    function, configs: List[RunConfig], registry: MaterialRegistry, jobs: int = 1
) -> List[Any]:
    """
    Apply ``function(config, registry)`` to every configuration

    Results come back in input order whatever the completion order.
    """
    if jobs <= 1 or len(configs) <= 1:
        return [function(config, registry) for config in configs]
    workers = min(jobs, len(configs), os.cpu_count() or 1)
    chunksize = max(1, len(configs) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, configs, itertools.repeat(registry), chunksize=chunksize))


def grid_configs(
    spec: SweepSpec, base: RunConfig
) -> Tuple[List[Tuple[float, ...]], List[RunConfig]]:
    """Cartesian grid cells (last axis fastest) and their configurations"""
    config = base_config_for(spec, base)
    paths = [axis.path for axis in spec.axes]
    cells = list(itertools.product(*(axis.values().tolist() for axis in spec.axes)))
    configs = [config.with_overrides(dict(zip(paths, cell))) for cell in cells]
    return cells, configs


def run_sweep(
    spec: SweepSpec,
    registry: MaterialRegistry,
    base_config: RunConfig,
    jobs: int = 1,
) -> pd.DataFrame:
    """
    Evaluate every cell of a sweep

    Args:
        spec: Sweep spec
        registry: Material registry
        base_config: Configuration the overrides apply to
        jobs: Worker processes

    Returns:
        One row per cell: axis values (columns named by parameter path) then
        the TransductionPoint record
    """
    cells, configs = grid_configs(spec, base_config)
    paths = [axis.path for axis in spec.axes]
    logger.info(f"Sweeping {len(configs)} cells {spec.shape} ({spec.scheme}) with {jobs} job(s)")

    results = parallel_map(evaluate_record, configs, registry, jobs)
    frame = records_to_frame(_with_axes(paths, cells, results))

    runaway = int(frame["flag_runaway"].sum())
    if runaway:
        logger.warning(f"{runaway} of {len(frame)} cells ran away thermally (flagged, kept)")
    return frame


def _with_axes(
    paths: List[str], cells: Iterable[Tuple[float, ...]], records: Iterable[Dict[str, Any]]
):
    for cell, record in zip(cells, records):
        row = dict(zip(paths, cell))
        row.update(record)
        yield row


def load_sweep_spec(document: Optional[Mapping[str, Any]]) -> SweepSpec:
    """Sweep spec from a parsed document"""
    if document is None:
        raise SpecError("empty sweep spec")
    return SweepSpec.from_document(document)
