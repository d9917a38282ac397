"""
Configuration utilities

Process-level settings come from the environment (optionally a ``.env``
file). Run configurations are YAML documents resolved into a frozen
RunConfig; frequencies are converted from Hz to rad/s here and nowhere else.
"""

import dataclasses
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import yaml
from dotenv import load_dotenv

from transducersim.exceptions import ConfigError, SpecError, TransducerError
from transducersim.rates.coupling import XiTable
from transducersim.rates.geometry import FrequencyPlan, Geometry
from transducersim.utils.units import (
    parse_frequency,
    parse_length,
    parse_quantity,
    parse_temperature,
)

logger = logging.getLogger(__name__)

SCHEMES = ("single", "two_step")
OUTPUT_FORMATS = ("csv", "json")
OCCUPANCY_BRANCHES = ("physical", "as_printed")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

DEFAULTS = {
    "frequencies.f_mu": "8GHz",
    "frequencies.f_po": "200THz",
    "geometry.w": "1um",
    "geometry.L": "300um",
    "geometry.t": "20nm",
    "temperatures.T1": "10mK",
    "temperatures.T2": "10mK",
    "model.xi": 1.0,
    "model.occupancy_branch": "physical",
}

SECTIONS = {
    "scheme": None,
    "frequencies": ("f_mu", "f_i", "f_po"),
    "geometry": ("w", "L", "t"),
    "geometry_ki": ("w", "L", "t"),
    "temperatures": ("T1", "T2"),
    "model": (
        "xi",
        "xi_table",
        "occupancy_branch",
        "dielectric_loss",
        "heat_sink_eo",
        "heat_sink_ki",
    ),
    "materials": None,
    "output": ("format",),
}

PARAMETER_PATHS = {
    "geometry.w": "length",
    "geometry.L": "length",
    "geometry.t": "length",
    "geometry_ki.w": "length",
    "geometry_ki.L": "length",
    "geometry_ki.t": "length",
    "frequencies.omega_mu": "frequency",
    "frequencies.omega_i": "frequency",
    "frequencies.omega_po": "frequency",
    "temperatures.T1": "temperature",
    "temperatures.T2": "temperature",
    "model.xi": "number",
}


def load_config() -> Dict[str, Any]:
    """
    Load process configuration from environment variables

    Returns:
        Configuration dictionary
    """
    load_dotenv()

    return {
        "materials": os.getenv("TRANSDUCER_MATERIALS") or None,
        "jobs": os.getenv("TRANSDUCER_JOBS", "1"),
        "output_format": os.getenv("TRANSDUCER_FORMAT", "csv").lower(),
        "log_level": os.getenv("LOG_LEVEL", "INFO").upper(),
        "log_file": os.getenv("LOG_FILE") or None,
    }


def validate_config(config: Dict[str, Any]) -> bool:
    """
    Validate process configuration

    Args:
        config: Configuration dictionary

    Returns:
        True if configuration is valid
    """
    try:
        jobs = int(config.get("jobs", 1))
    except (TypeError, ValueError):
        return False
    if jobs < 1:
        return False
    if config.get("output_format") not in OUTPUT_FORMATS:
        return False
    if config.get("log_level") not in LOG_LEVELS:
        return False
    materials = config.get("materials")
    if materials and not Path(materials).exists():
        return False
    return True


@dataclass(frozen=True)
class RunConfig:
    """
    Fully resolved run configuration, SI units with angular frequencies
    """

    scheme: str
    omega_mu: float
    omega_po: float
    geometry: Geometry
    T1: float
    T2: float
    omega_i: Optional[float] = None
    geometry_ki: Optional[Geometry] = None
    xi: float = 1.0
    xi_table: Optional[XiTable] = None
    occupancy_branch: str = "physical"
    dielectric_loss: bool = False
    heat_sink_eo: str = "LiNbO3"
    heat_sink_ki: str = "NbN"
    materials: Optional[str] = None
    output_format: str = "csv"
    defaults_applied: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got '{self.scheme}'")
        if self.scheme == "two_step" and self.omega_i is None:
            raise ConfigError("frequencies.f_i is required for scheme two_step")
        if self.scheme == "single" and self.omega_i is not None:
            raise ConfigError("frequencies.f_i is only meaningful for scheme two_step")
        if self.occupancy_branch not in OCCUPANCY_BRANCHES:
            raise ConfigError(f"model.occupancy_branch must be one of {OCCUPANCY_BRANCHES}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be one of {OUTPUT_FORMATS}")
        if not 0 < self.xi <= 1:
            raise ConfigError(f"model.xi must lie in (0, 1], got {self.xi}")
        for name in ("T1", "T2"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"temperatures.{name} must be positive")

    def frequency_plan(self) -> FrequencyPlan:
        try:
            if self.scheme == "single":
                return FrequencyPlan.single_step(self.omega_mu, self.omega_po)
            return FrequencyPlan.two_step(self.omega_mu, self.omega_i, self.omega_po)
        except TransducerError as e:
            raise ConfigError(f"inconsistent frequencies: {e}") from e

    def with_overrides(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """
        Return a copy with parameter-path overrides applied

        Numbers are taken as SI (rad/s for frequencies); strings may carry unit suffixes.
        """
        changes: Dict[str, Any] = {}
        geometry = self.geometry
        geometry_ki = self.geometry_ki
        for path, value in overrides.items():
            kind = PARAMETER_PATHS.get(path)
            if kind is None:
                raise SpecError(f"unknown parameter path '{path}'")
            resolved = _override_value(value, kind)
            section, name = path.split(".")
            try:
                if section == "geometry":
                    geometry = dataclasses.replace(geometry, **{name: resolved})
                elif section == "geometry_ki":
                    geometry_ki = dataclasses.replace(
                        geometry_ki or self.geometry, **{name: resolved}
                    )
                else:
                    changes[name] = resolved
            except TransducerError as e:
                raise ConfigError(f"{path}: {e}") from e
        config = dataclasses.replace(self, geometry=geometry, geometry_ki=geometry_ki, **changes)
        config.frequency_plan()
        return config

    def to_dict(self) -> Dict[str, Any]:
        """Resolved configuration for provenance dumps"""

        def geom(g: Optional[Geometry]):
            return None if g is None else {"w_m": g.w, "L_m": g.L, "t_m": g.t}

        return {
            "scheme": self.scheme,
            "frequencies": {
                "omega_mu_rad_s": self.omega_mu,
                "omega_i_rad_s": self.omega_i,
                "omega_po_rad_s": self.omega_po,
            },
            "geometry": geom(self.geometry),
            "geometry_ki": geom(self.geometry_ki),
            "temperatures": {"T1_K": self.T1, "T2_K": self.T2},
            "model": {
                "xi": self.xi,
                "xi_table": self.xi_table.describe() if self.xi_table else None,
                "occupancy_branch": self.occupancy_branch,
                "dielectric_loss": self.dielectric_loss,
                "heat_sink_eo": self.heat_sink_eo,
                "heat_sink_ki": self.heat_sink_ki,
            },
            "materials": self.materials,
            "output": {"format": self.output_format},
            "defaults_applied": list(self.defaults_applied),
        }


def _override_value(value: Any, kind: str) -> float:
    if kind == "number":
        try:
            return float(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"expected a number, got {value!r}") from e
    if isinstance(value, str):
        return parse_quantity(value, kind)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a {kind}, got {value!r}")
    return float(value)


def _section(document: Mapping[str, Any], name: str) -> Dict[str, Any]:
    section = document.get(name) or {}
    if not isinstance(section, Mapping):
        raise ConfigError(f"'{name}' must be a mapping")
    unknown = set(section) - set(SECTIONS[name])
    if unknown:
        raise ConfigError(f"unknown key(s) in '{name}': {', '.join(sorted(unknown))}")
    return dict(section)


def _geometry(
    section: Dict[str, Any], prefix: str, defaults: list, use_defaults: bool = True
) -> Geometry:
    values = {}
    for key, parser in (("w", parse_length), ("L", parse_length), ("t", parse_length)):
        if key in section:
            values[key] = parser(section[key])
        elif use_defaults:
            default = DEFAULTS[f"geometry.{key}"]
            values[key] = parser(default)
            defaults.append(f"{prefix}.{key} = {default}")
    try:
        return Geometry(**values)
    except TransducerError as e:
        raise ConfigError(f"{prefix}: {e}") from e


def _xi_table(value: Any, base_dir: Optional[Path]) -> XiTable:
    if isinstance(value, (str, Path)):
        path = Path(value)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return XiTable.from_file(path)
    try:
        return XiTable(tuple((parse_frequency(f), float(xi)) for f, xi in value))
    except (TypeError, ValueError) as e:
        raise ConfigError(
            f"model.xi_table must be a path or a list of [frequency, xi] pairs: {e}"
        ) from e


def resolve_run_config(
    document: Optional[Mapping[str, Any]],
    base_dir: Optional[Union[str, Path]] = None,
) -> RunConfig:
    """
    Resolve a run-configuration document

    Args:
        document: Parsed YAML mapping (None for all defaults)
        base_dir: Directory relative paths in the document are resolved against

    Returns:
        RunConfig with every filled default listed in ``defaults_applied``
    """
    document = document or {}
    if not isinstance(document, Mapping):
        raise ConfigError("run configuration must be a mapping")
    unknown = set(document) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(sorted(unknown))}")
    base = Path(base_dir) if base_dir is not None else None
    defaults: list = []

    scheme = document.get("scheme")
    if scheme is None:
        scheme = "single"
        defaults.append("scheme = single")

    freqs = _section(document, "frequencies")
    omega = {}
    for key in ("f_mu", "f_po"):
        if key in freqs:
            omega[key] = parse_frequency(freqs[key])
        else:
            omega[key] = parse_frequency(DEFAULTS[f"frequencies.{key}"])
            defaults.append(f"frequencies.{key} = {DEFAULTS[f'frequencies.{key}']}")
    omega_i = parse_frequency(freqs["f_i"]) if "f_i" in freqs else None

    geometry = _geometry(_section(document, "geometry"), "geometry", defaults)
    geometry_ki = None
    if document.get("geometry_ki"):
        ki_section = _section(document, "geometry_ki")
        for key in ("w", "L", "t"):
            ki_section.setdefault(key, getattr(geometry, key))
        geometry_ki = _geometry(ki_section, "geometry_ki", defaults, use_defaults=False)

    temps = _section(document, "temperatures")
    T = {}
    for key in ("T1", "T2"):
        if key in temps:
            T[key] = parse_temperature(temps[key])
        else:
            T[key] = parse_temperature(DEFAULTS[f"temperatures.{key}"])
            defaults.append(f"temperatures.{key} = {DEFAULTS[f'temperatures.{key}']}")

    model = _section(document, "model")
    if "xi" not in model:
        defaults.append("model.xi = 1")
    if "occupancy_branch" not in model:
        defaults.append("model.occupancy_branch = physical")
    xi_table = _xi_table(model["xi_table"], base) if model.get("xi_table") is not None else None

    materials = document.get("materials")
    if materials is not None:
        path = Path(materials)
        if base is not None and not path.is_absolute():
            path = base / path
        materials = str(path)

    output = _section(document, "output")
    if "format" not in output:
        defaults.append("output.format = csv")

    try:
        xi = float(model.get("xi", DEFAULTS["model.xi"]))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"model.xi must be a number: {e}") from e

    config = RunConfig(
        scheme=scheme,
        omega_mu=omega["f_mu"],
        omega_po=omega["f_po"],
        omega_i=omega_i,
        geometry=geometry,
        geometry_ki=geometry_ki,
        T1=T["T1"],
        T2=T["T2"],
        xi=xi,
        xi_table=xi_table,
        occupancy_branch=model.get("occupancy_branch", DEFAULTS["model.occupancy_branch"]),
        dielectric_loss=bool(model.get("dielectric_loss", False)),
        heat_sink_eo=model.get("heat_sink_eo", "LiNbO3"),
        heat_sink_ki=model.get("heat_sink_ki", "NbN"),
        materials=materials,
        output_format=str(output.get("format", "csv")).lower(),
        defaults_applied=tuple(defaults),
    )
    config.frequency_plan()
    for entry in defaults:
        logger.debug(f"default applied: {entry}")
    return config


def load_yaml(path: Union[str, Path]) -> Any:
    """Read a YAML document, reporting failures as ConfigError"""
    path = Path(path)
    try:
        return yaml.safe_load(path.read_text())
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"malformed YAML in {path}: {e}") from e


def load_run_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """Load and resolve a run-configuration file (all defaults when path is None)"""
    if path is None:
        return resolve_run_config({})
    return resolve_run_config(load_yaml(path), Path(path).parent)
