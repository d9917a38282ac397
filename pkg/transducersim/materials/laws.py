"""
Temperature-dependent material laws

Each law is a frozen dataclass callable on a scalar or an array of
temperatures. ``describe()`` returns the descriptor the law was built from,
so registries can be dumped back to the config dialect they were read from.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from transducersim.exceptions import DomainError, MaterialLoadError, RangeError

ArrayLike = Union[float, np.ndarray]

LAW_KINDS = ("power_law", "polynomial", "anchors", "table")


def _temperatures(T: ArrayLike) -> np.ndarray:
    temperatures = np.asarray(T, dtype=float)
    if np.any(temperatures <= 0):
        raise DomainError(f"temperature must be positive, got {temperatures.min()}")
    return temperatures


def _as_output(values: np.ndarray, T: ArrayLike) -> ArrayLike:
    return float(values) if np.ndim(T) == 0 else values


@dataclass(frozen=True)
class PowerLaw:
    """coefficient * T**exponent"""

    coefficient: float
    exponent: float

    def __call__(self, T: ArrayLike) -> ArrayLike:
        temperatures = _temperatures(T)
        return _as_output(self.coefficient * temperatures**self.exponent, T)

    def describe(self) -> Dict[str, Any]:
        return {"kind": "power_law", "coefficient": self.coefficient, "exponent": self.exponent}


@dataclass(frozen=True)
class PolynomialLaw:
    """sum of c_k * T**k over (k, c_k) terms"""

    terms: Tuple[Tuple[float, float], ...]

    def __call__(self, T: ArrayLike) -> ArrayLike:
        temperatures = _temperatures(T)
        total = np.zeros_like(temperatures)
        for power, coefficient in self.terms:
            total = total + coefficient * temperatures**power
        return _as_output(total, T)

    def describe(self) -> Dict[str, Any]:
        return {"kind": "polynomial", "coefficients": {p: c for p, c in self.terms}}


@dataclass(frozen=True)
class AnchorLaw:
    """
    Log-log interpolation through (T, value) anchors

    Outside the anchors the first/last segment is extended as a power law.
    Queries exactly at an anchor return the anchor value unchanged.
    """

    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise DomainError("anchor law needs at least two anchors")
        temps = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(temps, temps[1:])):
            raise DomainError("anchor temperatures must be strictly increasing")
        if any(t <= 0 or v <= 0 for t, v in self.points):
            raise DomainError("anchor temperatures and values must be positive")

    def __call__(self, T: ArrayLike) -> ArrayLike:
        temperatures = _temperatures(T)
        log_t = np.log([p[0] for p in self.points])
        log_v = np.log([p[1] for p in self.points])
        x = np.log(temperatures)

        segment = np.clip(np.searchsorted(log_t, x) - 1, 0, len(log_t) - 2)
        slope = (log_v[segment + 1] - log_v[segment]) / (log_t[segment + 1] - log_t[segment])
        values = np.exp(log_v[segment] + slope * (x - log_t[segment]))

        for anchor_t, anchor_v in self.points:
            values = np.where(temperatures == anchor_t, anchor_v, values)
        return _as_output(values, T)

    def describe(self) -> Dict[str, Any]:
        return {"kind": "anchors", "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class TableLaw:
    """Log-log interpolation of a two-column CSV (T_K, value); no extrapolation"""

    path: str
    temperatures: Tuple[float, ...]
    values: Tuple[float, ...]

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "TableLaw":
        frame = pd.read_csv(path, float_precision="round_trip")
        if frame.shape[1] != 2 or frame.columns[0] != "T_K":
            raise DomainError(f"{path}: expected columns T_K,<value>")
        temps = frame.iloc[:, 0].to_numpy(dtype=float)
        values = frame.iloc[:, 1].to_numpy(dtype=float)
        if np.any(np.diff(temps) <= 0):
            raise DomainError(f"{path}: T_K must be strictly increasing")
        if np.any(values <= 0) or np.any(temps <= 0):
            raise DomainError(f"{path}: temperatures and values must be positive")
        return cls(str(path), tuple(temps), tuple(values))

    def __call__(self, T: ArrayLike) -> ArrayLike:
        temperatures = _temperatures(T)
        lo, hi = self.temperatures[0], self.temperatures[-1]
        if np.any(temperatures < lo) or np.any(temperatures > hi):
            raise RangeError(f"T outside law table range [{lo}, {hi}] K ({self.path})")
        log_values = np.interp(np.log(temperatures), np.log(self.temperatures), np.log(self.values))
        values = np.exp(log_values)
        return _as_output(values, T)

    def describe(self) -> Dict[str, Any]:
        return {"kind": "table", "path": self.path}


Law = Union[PowerLaw, PolynomialLaw, AnchorLaw, TableLaw]


def law_from_descriptor(
    entry: str, descriptor: Dict[str, Any], base_dir: Optional[Path] = None
) -> Law:
    """
    Build a law from its config descriptor

    Args:
        entry: Owning material name, used in error messages
        descriptor: Mapping with a ``kind`` key and the kind's parameters
        base_dir: Directory relative table paths are resolved against

    Returns:
        The law object
    """
    if not isinstance(descriptor, dict):
        raise MaterialLoadError(entry, f"law descriptor must be a mapping, got {descriptor!r}")
    kind = descriptor.get("kind")
    try:
        if kind == "power_law":
            return PowerLaw(float(descriptor["coefficient"]), float(descriptor["exponent"]))
        if kind == "polynomial":
            terms = tuple(
                sorted((float(p), float(c)) for p, c in descriptor["coefficients"].items())
            )
            return PolynomialLaw(terms)
        if kind == "anchors":
            return AnchorLaw(tuple((float(t), float(v)) for t, v in descriptor["points"]))
        if kind == "table":
            path = Path(descriptor["path"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            if not path.exists():
                raise MaterialLoadError(entry, f"law table file not found: {path}")
            return TableLaw.from_file(path)
    except MaterialLoadError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise MaterialLoadError(entry, f"malformed '{kind}' law: {e}") from e
    raise MaterialLoadError(entry, f"unknown law kind '{kind}' (known: {', '.join(LAW_KINDS)})")


def thermal_conductivity(mat, T: ArrayLike) -> ArrayLike:
    """Thermal conductivity g_th(T) of a ThermalMaterialParams in W/(m K)"""
    return mat.g_th_law(T)


def heat_capacity(mat, T: ArrayLike) -> ArrayLike:
    """Specific heat c_th(T) of a ThermalMaterialParams in J/(kg K)"""
    return mat.c_th_law(T)
