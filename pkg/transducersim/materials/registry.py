"""
Material registry

Built-in materials (LiNbO3, SiO2, NbN) are described in the same structured
dialect users write override documents in. Loading deep-merges the user
document over the built-in descriptors, so an override may touch a single
field; the merged entry is then rebuilt and validated as a whole.
"""

import copy
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
import yaml

from transducersim.exceptions import DomainError, MaterialLoadError, TransducerError
from transducersim.materials.conductivity import SuperconductorParams
from transducersim.materials.constants import C, K_B
from transducersim.materials.laws import Law, law_from_descriptor

logger = logging.getLogger(__name__)

BANDS = ("mu", "i", "po", "o")

BUILTIN_MATERIALS: Dict[str, Dict[str, Any]] = {
    "LiNbO3": {
        "density": 4640.0,  # kg/m^3, handbook
        "thermal": {
            "g_th": {"kind": "power_law", "coefficient": 4.0, "exponent": 3.0},
            "c_th": {"kind": "power_law", "coefficient": 2.705e-4, "exponent": 3.0},
        },
        "optical": {
            # 0.84 1/cm at 200 THz
            "alpha": {"po": 84.0, "o": 84.0},
            # 4.9 - 5 up to 1.2 THz, 2.3 at 200 THz
            "n": {"mu": 4.95, "i": 4.95, "po": 2.3, "o": 2.3},
            "eps": {"mu": 4.95**2, "i": 4.95**2, "po": 2.3**2, "o": 2.3**2},
            "n_g": 2.3,
            "d33": 27e-12,
            "chi2": 54e-12,
            # 2 - 5 1/cm up to 1.2 THz
            "thz_alpha": [200.0, 500.0],
            "thz_max_frequency_hz": 1.2e12,
        },
    },
    "SiO2": {
        "density": 2200.0,
        "thermal": {
            "g_th": {"kind": "anchors", "points": [[0.01, 1e-4], [1.0, 0.01]]},
            "c_th": {"kind": "anchors", "points": [[0.01, 1e-5], [1.0, 1e-4]]},
        },
    },
    "NbN": {
        "density": 8470.0,
        "thermal": {
            "g_th": {"kind": "anchors", "points": [[0.01, 0.005], [1.0, 5.0]]},
            "c_th": {"kind": "polynomial", "coefficients": {1: 0.0283, 3: 0.0012}},
        },
        # typical thin-film values
        "superconductor": {
            "Tc": 13.0,
            "gap_ratio": 2.08,
            "N0": 2.4e47,
            "rho_n": 2.0e-6,
            "sigma_model": "analytic",
        },
    },
}

ALIASES = {"LN": "LiNbO3", "LNO": "LiNbO3", "SiO₂": "SiO2", "silica": "SiO2"}

VALIDATION_GRID = np.geomspace(1e-3, 10.0, 64)


@dataclass(frozen=True)
class ThermalMaterialParams:
    """Thermal conductivity and specific heat laws plus mass density"""

    name: str
    g_th_law: Law
    c_th_law: Law
    density: float

    def __post_init__(self):
        if not self.density > 0:
            raise DomainError(f"{self.name}: density must be positive, got {self.density}")


@dataclass(frozen=True)
class OpticalMaterialParams:
    """
    Electro-optic medium parameters, per band where a band matters

    Bands: ``mu`` (microwave signal), ``i`` (intermediate), ``po`` (optical
    pump), ``o`` (optical sideband).
    """

    alpha: Mapping[str, float]
    n: Mapping[str, float]
    eps: Mapping[str, float]
    n_g: float
    chi2: float
    d33: Optional[float] = None
    thz_alpha: tuple = (200.0, 500.0)
    thz_max_frequency_hz: float = 1.2e12

    def __post_init__(self):
        for band, value in self.alpha.items():
            if value < 0:
                raise DomainError(f"alpha[{band}] must be non-negative, got {value}")
        for band, value in self.n.items():
            if value < 1:
                raise DomainError(f"n[{band}] must be >= 1, got {value}")
        for band, value in self.eps.items():
            if value < 1:
                raise DomainError(f"eps[{band}] must be >= 1, got {value}")
        if self.n_g < 1:
            raise DomainError(f"n_g must be >= 1, got {self.n_g}")
        if not self.chi2 > 0:
            raise DomainError(f"chi2 must be positive, got {self.chi2}")

    def thz_absorption(self, omega: float) -> float:
        """Absorption coefficient (1/m) of the sub-THz band, linear in frequency"""
        low, high = self.thz_alpha
        f = omega / (2.0 * np.pi)
        if not 0 < f <= self.thz_max_frequency_hz:
            raise DomainError(
                f"sub-THz absorption defined up to {self.thz_max_frequency_hz:.3g} Hz, "
                f"got {f:.3g} Hz"
            )
        return float(low + (high - low) * f / self.thz_max_frequency_hz)

    def optical_cutoff_width(self, omega_po: float) -> float:
        """In-medium pump wavelength 2*pi*c/(n*omega_po)"""
        return 2.0 * np.pi * C / (self.n["po"] * omega_po)


@dataclass(frozen=True)
class Material:
    """One registry entry"""

    name: str
    thermal: ThermalMaterialParams
    optical: Optional[OpticalMaterialParams] = None
    superconductor: Optional[SuperconductorParams] = None
    provenance: str = "builtin"
    descriptor: Dict[str, Any] = field(default_factory=dict, compare=False, repr=False)


def _law_kind(value: Any) -> Optional[str]:
    return value.get("kind") if isinstance(value, Mapping) else None


def _deep_merge(base: Dict[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        base_value = merged.get(key)
        # a law that changes kind is replaced, not merged
        same_kind = isinstance(base_value, dict) and _law_kind(value) in (
            None,
            base_value.get("kind"),
        )
        if isinstance(value, Mapping) and same_kind:
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _build_material(
    name: str, descriptor: Dict[str, Any], provenance: str, base_dir: Optional[Path]
) -> Material:
    if not isinstance(descriptor, Mapping):
        raise MaterialLoadError(name, "entry must be a mapping")
    try:
        thermal_desc = descriptor["thermal"]
        thermal = ThermalMaterialParams(
            name=name,
            g_th_law=law_from_descriptor(name, thermal_desc["g_th"], base_dir),
            c_th_law=law_from_descriptor(name, thermal_desc["c_th"], base_dir),
            density=float(descriptor["density"]),
        )

        optical = None
        if descriptor.get("optical"):
            o = descriptor["optical"]
            optical = OpticalMaterialParams(
                alpha={k: float(v) for k, v in o.get("alpha", {}).items()},
                n={k: float(v) for k, v in o.get("n", {}).items()},
                eps={k: float(v) for k, v in o.get("eps", {}).items()},
                n_g=float(o["n_g"]),
                chi2=float(o["chi2"]) if "chi2" in o else 2.0 * float(o["d33"]),
                d33=float(o["d33"]) if "d33" in o else None,
                thz_alpha=tuple(float(v) for v in o.get("thz_alpha", (200.0, 500.0))),
                thz_max_frequency_hz=float(o.get("thz_max_frequency_hz", 1.2e12)),
            )

        superconductor = None
        if descriptor.get("superconductor"):
            s = descriptor["superconductor"]
            Tc = float(s["Tc"])
            if "gap0" in s:
                gap0 = float(s["gap0"])
            elif "gap_ratio" in s:
                gap0 = float(s["gap_ratio"]) * K_B * Tc
            else:
                gap0 = None
            model = s.get("sigma_model", "analytic")
            table = None
            if isinstance(model, Mapping):
                table = Path(model["table"])
                if base_dir is not None and not table.is_absolute():
                    table = base_dir / table
                if not table.exists():
                    raise MaterialLoadError(name, f"conductivity table not found: {table}")
                model, table = "table", str(table)
            superconductor = SuperconductorParams(
                name=name,
                Tc=Tc,
                N0=float(s["N0"]),
                rho_n=float(s["rho_n"]),
                gap0=gap0,
                sigma_model=model,
                sigma_table=table,
            )
    except MaterialLoadError:
        raise
    except DomainError as e:
        raise MaterialLoadError(name, str(e)) from e
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise MaterialLoadError(name, f"malformed entry: {e!r}") from e

    return Material(
        name=name,
        thermal=thermal,
        optical=optical,
        superconductor=superconductor,
        provenance=provenance,
        descriptor=dict(descriptor),
    )


class MaterialRegistry:
    """
    Read-only mapping of material names to Material entries
    """

    def __init__(self, materials: Dict[str, Material]):
        self._materials = dict(materials)
        self.logger = logging.getLogger(__name__)

    def __contains__(self, name: str) -> bool:
        return ALIASES.get(name, name) in self._materials

    def __len__(self) -> int:
        return len(self._materials)

    def names(self) -> List[str]:
        """Material names in registration order"""
        return list(self._materials)

    def get(self, name: str) -> Material:
        """Look up a material by name or alias"""
        key = ALIASES.get(name, name)
        try:
            return self._materials[key]
        except KeyError:
            raise MaterialLoadError(name, f"not in registry (known: {', '.join(self.names())})")

    def provenance(self, name: str) -> str:
        """'builtin' or 'file'"""
        return self.get(name).provenance

    def thermal(self, name: str) -> ThermalMaterialParams:
        return self.get(name).thermal

    def optical(self, name: str) -> OpticalMaterialParams:
        material = self.get(name)
        if material.optical is None:
            raise MaterialLoadError(name, "has no optical parameters")
        return material.optical

    def superconductor(self, name: str) -> SuperconductorParams:
        material = self.get(name)
        if material.superconductor is None:
            raise MaterialLoadError(name, "has no superconductor parameters")
        return material.superconductor

    def validate(self) -> List[str]:
        """
        Check every law on a 1 mK - 10 K grid

        Returns:
            List of problems, each naming material and law; empty when valid
        """
        problems = []
        for name, material in self._materials.items():
            for law_name in ("g_th_law", "c_th_law"):
                law = getattr(material.thermal, law_name)
                try:
                    values = np.asarray(law(VALIDATION_GRID))
                except TransducerError as e:
                    problems.append(f"{name}: {law_name} failed: {e}")
                    continue
                if not np.all(np.isfinite(values)) or np.any(values <= 0):
                    problems.append(f"{name}: {law_name} is not strictly positive on (0, 10] K")
        for problem in problems:
            self.logger.warning(problem)
        return problems

    def describe(self, name: str) -> Dict[str, Any]:
        """Merged descriptor of one material, with provenance"""
        material = self.get(name)
        return {"name": material.name, "provenance": material.provenance, **material.descriptor}


def _read_source(source) -> tuple:
    if source is None:
        return {}, None
    if isinstance(source, Mapping):
        return dict(source), None
    path = Path(source)
    if not path.exists():
        raise MaterialLoadError(str(path), "material document not found")
    try:
        document = yaml.safe_load(path.read_text()) or {}
    except yaml.YAMLError as e:
        raise MaterialLoadError(str(path), f"malformed document: {e}") from e
    return document, path.parent


def load_material_db(source: Union[None, str, Path, Mapping[str, Any]] = None) -> MaterialRegistry:
    """
    Build the material registry

    Args:
        source: None, a parsed mapping, or a path to a YAML document of the form
            ``{materials: {<name>: <entry>}}``

    Returns:
        Registry with built-in materials overridden/extended by the document
    """
    document, base_dir = _read_source(source)
    if not isinstance(document, Mapping):
        raise MaterialLoadError(str(source), "document must be a mapping")
    overrides = document.get("materials", {}) or {}
    if not isinstance(overrides, Mapping):
        raise MaterialLoadError(str(source), "'materials' must be a mapping of entries")

    materials: Dict[str, Material] = {}
    for name, descriptor in BUILTIN_MATERIALS.items():
        materials[name] = _build_material(name, descriptor, "builtin", None)

    for raw_name, entry in overrides.items():
        name = ALIASES.get(str(raw_name), str(raw_name))
        if not isinstance(entry, Mapping):
            raise MaterialLoadError(name, "entry must be a mapping")
        base = BUILTIN_MATERIALS.get(name, {})
        materials[name] = _build_material(name, _deep_merge(base, entry), "file", base_dir)
        logger.debug(f"Material '{name}' loaded from override document")

    return MaterialRegistry(materials)
