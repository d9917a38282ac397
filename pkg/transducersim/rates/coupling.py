"""
Nonlinear coupling rates, cooperativities and unit-cooperativity pump requirements
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np
import pandas as pd

from transducersim.exceptions import ConfigError, DomainError, InfeasibleError
from transducersim.materials.conductivity import SuperconductorParams
from transducersim.materials.constants import EPS0, HBAR
from transducersim.materials.registry import OpticalMaterialParams
from transducersim.rates.geometry import FrequencyPlan, Geometry, KineticInductorParams

ArrayLike = Union[float, np.ndarray]

EO_MODES = ("low", "po", "o")


def mode_volumes(geom: Geometry) -> Dict[str, float]:
    """Box mode volumes w^2 L for the three electro-optically mixed modes"""
    return {mode: geom.volume for mode in EO_MODES}


def eo_coupling(
    freqs: FrequencyPlan, opt: OpticalMaterialParams, geom: Geometry, xi: float = 1.0
) -> float:
    """
    Electro-optic (three-wave) coupling rate per unit pump amplitude

        g = sqrt(hbar w_low w_po w_o / (8 eps0 e_low e_po e_o)) chi2 xi
            / sqrt(V_low^1/3 V_po^1/3 V_o^1/3)

    The low-frequency band is the microwave mode for a single-step plan and
    the intermediate mode for a two-step plan.

    Args:
        freqs: Frequency plan
        opt: Electro-optic medium
        geom: Device geometry (box mode volumes)
        xi: Spatial overlap in (0, 1]

    Returns:
        g_EO in rad/s
    """
    if not 0 < xi <= 1:
        raise DomainError(f"xi must lie in (0, 1], got {xi}")
    low_band = "mu" if freqs.omega_i is None else "i"
    missing = [band for band in (low_band, "po", "o") if band not in opt.eps]
    if missing:
        raise ConfigError(f"missing relative permittivity for band(s) {', '.join(missing)}")

    eps_product = opt.eps[low_band] * opt.eps["po"] * opt.eps["o"]
    prefactor = math.sqrt(
        HBAR * freqs.low * freqs.omega_po * freqs.omega_o / (8.0 * EPS0 * eps_product)
    )
    volumes = mode_volumes(geom)
    volume_term = math.sqrt(math.prod(v ** (1.0 / 3.0) for v in volumes.values()))
    return prefactor * opt.chi2 * xi / volume_term


def ki_params(geom: Geometry, sc: SuperconductorParams) -> KineticInductorParams:
    """
    Scaling current and kinetic inductance of a film strip

        I_star = sqrt(pi N0 gap0^3 / (hbar rho_n)) w t
        L_k = hbar rho_n / (pi gap0) L / (w t)
    """
    cross_section = geom.w * geom.t
    I_star = math.sqrt(math.pi * sc.N0 * sc.gap0**3 / (HBAR * sc.rho_n)) * cross_section
    L_k = HBAR * sc.rho_n / (math.pi * sc.gap0) * geom.L / cross_section
    return KineticInductorParams(I_star=I_star, L_k=L_k)


def ki_coupling(freqs: FrequencyPlan, kip: KineticInductorParams) -> float:
    """
    Kinetic-inductance four-wave-mixing coupling rate

        g = 3/32 hbar w_pi sqrt(w_mu w_i) / (L_k I_star^2)
    """
    if freqs.omega_pi is None or freqs.omega_i is None:
        raise ConfigError("kinetic-inductance coupling needs omega_i and omega_pi")
    return (
        3.0
        / 32.0
        * HBAR
        * freqs.omega_pi
        * math.sqrt(freqs.omega_mu * freqs.omega_i)
        / (kip.L_k * kip.I_star**2)
    )


def _check_rates(**rates):
    for name, value in rates.items():
        if np.any(np.asarray(value) < 0):
            raise DomainError(f"{name} must be non-negative")


def pump_photons_eo(g_eo: float, kappa_low: ArrayLike, kappa_o: ArrayLike) -> ArrayLike:
    """Optical pump photon number for unit EO cooperativity: kappa_low kappa_o / (4 g^2)"""
    if g_eo == 0:
        raise InfeasibleError("zero electro-optic coupling: unit cooperativity unreachable")
    _check_rates(kappa_low=kappa_low, kappa_o=kappa_o)
    return kappa_low * kappa_o / (4.0 * g_eo**2)


def pump_photons_ki(g_ki: float, kappa_mu: ArrayLike, kappa_i: ArrayLike) -> ArrayLike:
    """Microwave pump photon number for unit KI cooperativity: sqrt(kappa_mu kappa_i / (4 g^2))"""
    if g_ki == 0:
        raise InfeasibleError("zero kinetic-inductance coupling: unit cooperativity unreachable")
    _check_rates(kappa_mu=kappa_mu, kappa_i=kappa_i)
    return np.sqrt(kappa_mu * kappa_i / (4.0 * g_ki**2))


def cooperativity_eo(
    g: float, pump_photons: ArrayLike, kappa_a: ArrayLike, kappa_b: ArrayLike
) -> ArrayLike:
    """C_EO = 4 g^2 n_p / (kappa_a kappa_b)"""
    return 4.0 * g**2 * pump_photons / (kappa_a * kappa_b)


def cooperativity_ki(
    g: float, pump_photons: ArrayLike, kappa_mu: ArrayLike, kappa_i: ArrayLike
) -> ArrayLike:
    """C_KI = 4 g^2 n_p^2 / (kappa_mu kappa_i)"""
    return 4.0 * g**2 * pump_photons**2 / (kappa_mu * kappa_i)


@dataclass(frozen=True)
class XiTable:
    """
    Mode overlap as a function of the intermediate frequency

    Interpolated linearly in log(omega) and clamped to the end values outside
    the table.
    """

    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        if len(self.points) < 1:
            raise ConfigError("xi table needs at least one (omega, xi) pair")
        omegas = [p[0] for p in self.points]
        if any(w <= 0 for w in omegas) or any(b <= a for a, b in zip(omegas, omegas[1:])):
            raise ConfigError("xi table frequencies must be positive and strictly increasing")
        if any(not 0 < xi <= 1 for _, xi in self.points):
            raise ConfigError("xi table values must lie in (0, 1]")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "XiTable":
        """Read a CSV with columns frequency_hz,xi (ordinary frequency)"""
        try:
            frame = pd.read_csv(path, float_precision="round_trip")
            omegas = 2.0 * np.pi * frame["frequency_hz"].to_numpy(dtype=float)
            values = frame["xi"].to_numpy(dtype=float)
        except (OSError, KeyError, ValueError) as e:
            raise ConfigError(f"cannot read xi table {path}: {e}") from e
        return cls(tuple(zip(omegas.tolist(), values.tolist())))

    def __call__(self, omega_i: float) -> float:
        log_w = np.log([p[0] for p in self.points])
        values = np.array([p[1] for p in self.points])
        return float(np.interp(np.log(omega_i), log_w, values))

    def describe(self):
        return [[w / (2.0 * math.pi), xi] for w, xi in self.points]
