"""
Derivative-free geometry optimization by coarse-to-fine grid refinement

Each round evaluates a log-spaced grid (9 points per free dimension by
default) and shrinks the bounds to one grid step around the incumbent.
The objective is eta_total; a point is feasible when its referred added
occupancy is at most n_max and no stage ran away or saturated.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from transducersim.exceptions import ConfigError, SpecError
from transducersim.explore.sweep import (
    Axis,
    SweepSpec,
    base_config_for,
    evaluate_point,
    parallel_map,
    parse_path_value,
)
from transducersim.materials.registry import MaterialRegistry
from transducersim.transducer.device import TransductionPoint
from transducersim.utils.config import SCHEMES, RunConfig
from transducersim.utils.units import parse_frequency, parse_length

logger = logging.getLogger(__name__)

Bounds = Tuple[float, float]

DIMENSIONS = {
    "w": "geometry.w",
    "L": "geometry.L",
    "omega_i": "frequencies.omega_i",
}


@dataclass(frozen=True)
class OptimizeSpec:
    """
    Search bounds, constraint and budget

    Args:
        w: (min, max) width in m
        L: (min, max) length in m
        omega_i: Optional (min, max) intermediate frequency in rad/s (two-step only)
        n_max: Upper bound on n_total
        budget: Maximum number of distinct evaluations (None for no limit)
        rounds: Refinement rounds
        points: Grid points per free dimension and round
        scheme: single or two_step
        fixed: Extra parameter-path overrides
    """

    w: Bounds
    L: Bounds
    omega_i: Optional[Bounds] = None
    n_max: float = math.inf
    budget: Optional[int] = None
    rounds: int = 3
    points: int = 9
    scheme: str = "two_step"
    fixed: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise SpecError(f"scheme must be one of {SCHEMES}, got '{self.scheme}'")
        for name, bounds in self.bounds().items():
            lo, hi = bounds
            if not (lo > 0 and hi > 0):
                raise SpecError(f"bounds on {name} must be positive")
            if lo > hi:
                raise SpecError(f"bounds on {name} are empty ({lo} > {hi})")
        if self.omega_i is not None and self.scheme == "single":
            raise SpecError("omega_i bounds need the two_step scheme")
        if not self.n_max > 0:
            raise SpecError(f"n_max must be positive, got {self.n_max}")
        if self.budget is not None and self.budget < 1:
            raise SpecError(f"budget must be at least 1, got {self.budget}")
        if self.rounds < 1 or self.points < 2:
            raise SpecError("need at least one round and two points per dimension")

    def bounds(self) -> Dict[str, Bounds]:
        bounds = {"w": tuple(self.w), "L": tuple(self.L)}
        if self.omega_i is not None:
            bounds["omega_i"] = tuple(self.omega_i)
        return bounds

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheme": self.scheme,
            "bounds": {k: list(v) for k, v in self.bounds().items()},
            "n_max": None if math.isinf(self.n_max) else self.n_max,
            "budget": self.budget,
            "rounds": self.rounds,
            "points": self.points,
            "fixed": dict(sorted(self.fixed.items())),
        }

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> "OptimizeSpec":
        """Spec from YAML: bounds accept unit suffixes; bare frequencies are Hz"""
        if not isinstance(document, Mapping):
            raise SpecError("optimize spec must be a mapping")
        try:
            bounds = document["bounds"]
            w = tuple(parse_length(v) for v in bounds["w"])
            L = tuple(parse_length(v) for v in bounds["L"])
            omega_i = None
            if "omega_i" in bounds:
                omega_i = tuple(parse_frequency(v) for v in bounds["omega_i"])
            n_max = document.get("n_max")
            return cls(
                w=w,
                L=L,
                omega_i=omega_i,
                n_max=math.inf if n_max is None else float(n_max),
                budget=document.get("budget"),
                rounds=int(document.get("rounds", 3)),
                points=int(document.get("points", 9)),
                scheme=document.get("scheme", "two_step"),
                fixed={
                    path: parse_path_value(path, value)
                    for path, value in (document.get("fixed") or {}).items()
                },
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SpecError(f"malformed optimize spec: {e!r}") from e
        except ConfigError as e:
            raise SpecError(str(e)) from e


@dataclass(frozen=True)
class OptimizationResult:
    """Best feasible point (None when infeasible) and the full search trace"""

    best: Optional[TransductionPoint]
    feasible: bool
    evaluations: int
    trace: pd.DataFrame
    message: str


def is_feasible(point: TransductionPoint, n_max: float) -> bool:
    return point.physical and point.n_total <= n_max


def _grid(bounds: Bounds, points: int) -> List[float]:
    lo, hi = bounds
    if lo == hi:
        return [lo]
    return np.geomspace(lo, hi, points).tolist()


def _refine(center: float, bounds: Bounds, limits: Bounds, points: int) -> Bounds:
    lo, hi = bounds
    if lo == hi:
        return bounds
    step = (math.log(hi) - math.log(lo)) / (points - 1)
    new_lo = max(limits[0], math.exp(math.log(center) - step))
    new_hi = min(limits[1], math.exp(math.log(center) + step))
    return (new_lo, new_hi)


def optimize_geometry(
    spec: OptimizeSpec,
    registry: MaterialRegistry,
    base_config: RunConfig,
    jobs: int = 1,
) -> OptimizationResult:
    """
    Maximize eta_total subject to n_total <= n_max

    Args:
        spec: Optimization spec
        registry: Material registry
        base_config: Configuration the searched parameters override
        jobs: Worker processes per round

    Returns:
        OptimizationResult; deterministic for a given spec
    """
    limits = spec.bounds()
    names = list(limits)
    paths = [DIMENSIONS[name] for name in names]

    anchor = SweepSpec(
        axes=tuple(
            Axis(path, "log", limits[name][0], limits[name][0], 1)
            for name, path in zip(names, paths)
        ),
        fixed=spec.fixed,
        scheme=spec.scheme,
    )
    config = base_config_for(anchor, base_config)

    cache: Dict[Tuple[float, ...], TransductionPoint] = {}
    trace: List[Dict[str, Any]] = []
    bounds = dict(limits)
    best_key: Optional[Tuple[float, ...]] = None
    budget = spec.budget

    for round_index in range(spec.rounds):
        cells = list(itertools.product(*(_grid(bounds[name], spec.points) for name in names)))
        pending = [cell for cell in dict.fromkeys(cells) if cell not in cache]
        if budget is not None:
            pending = pending[: max(0, budget - len(cache))]
        configs = [config.with_overrides(dict(zip(paths, cell))) for cell in pending]
        for cell, point in zip(pending, parallel_map(evaluate_point, configs, registry, jobs)):
            cache[cell] = point
            trace.append(
                {
                    "round": round_index,
                    **dict(zip(names, cell)),
                    "eta_total": point.eta_total,
                    "n_total": point.n_total,
                    "feasible": is_feasible(point, spec.n_max),
                    "flags": point.to_record()["flags"],
                }
            )

        evaluated = [cell for cell in dict.fromkeys(cells) if cell in cache]
        feasible = [cell for cell in cache if is_feasible(cache[cell], spec.n_max)]
        if feasible:
            best_key = max(feasible, key=lambda c: cache[c].eta_total)
            center = best_key
        elif evaluated:
            center = min(evaluated, key=lambda c: cache[c].n_total)
        else:
            break
        logger.info(
            f"Round {round_index}: {len(cache)} evaluations, "
            f"best eta = {cache[best_key].eta_total if best_key is not None else float('nan'):.4g}"
        )
        if budget is not None and len(cache) >= budget:
            break
        bounds = {
            name: _refine(value, bounds[name], limits[name], spec.points)
            for name, value in zip(names, center)
        }

    trace_frame = pd.DataFrame.from_records(trace)
    if best_key is None:
        message = f"no feasible point with n_total <= {spec.n_max:g} in {len(cache)} evaluations"
        logger.warning(message)
        return OptimizationResult(None, False, len(cache), trace_frame, message)

    best = cache[best_key]
    message = f"eta_total = {best.eta_total:.6g}, n_total = {best.n_total:.4g}"
    return OptimizationResult(best, True, len(cache), trace_frame, message)
