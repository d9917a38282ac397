"""
Superconductor complex conductivity sigma = sigma1 - i*sigma2

Two models are available:

* ``analytic`` - low-frequency Mattis-Bardeen limits with the zero-temperature gap

      sigma1/sigma_n = (4 D / hbar w) exp(-D / kT) sinh(hbar w / 2kT) K0(hbar w / 2kT)
      sigma2/sigma_n = (pi D / hbar w) tanh(D / 2kT)

  with sigma_n = 1 / rho_n. ``sinh(x) K0(x)`` is evaluated as
  ``k0e(x) (1 - exp(-2x)) / 2`` so it stays finite for large x.

* ``table`` - log-log interpolation of a CSV grid with the header
  ``T_K,omega_rad_s,sigma1_S_m,sigma2_S_m`` (T ascending, omega ascending within T).
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.interpolate import RegularGridInterpolator
from scipy.special import k0e

from transducersim.exceptions import (
    DomainError,
    MaterialLoadError,
    NormalStateError,
    PairBreakingError,
    RangeError,
)
from transducersim.materials.constants import HBAR, K_B

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

SIGMA1_FLOOR = 1e-30  # S/m
BCS_GAP_RATIO = 1.76
TABLE_COLUMNS = ("T_K", "omega_rad_s", "sigma1_S_m", "sigma2_S_m")


@dataclass(frozen=True)
class SuperconductorParams:
    """
    Superconducting film parameters

    Args:
        name: Material identifier
        Tc: Critical temperature in K
        N0: Single-spin density of states at the Fermi level in 1/(J m^3)
        rho_n: Normal-state resistivity in Ohm m
        gap0: Zero-temperature gap in J; 1.76 k_B Tc when omitted
        sigma_model: "analytic" or "table"
        sigma_table: CSV path, required by the table model
    """

    name: str
    Tc: float
    N0: float
    rho_n: float
    gap0: Optional[float] = None
    sigma_model: str = "analytic"
    sigma_table: Optional[str] = None

    def __post_init__(self):
        if self.gap0 is None:
            object.__setattr__(self, "gap0", BCS_GAP_RATIO * K_B * self.Tc)
        for attr in ("Tc", "gap0", "N0", "rho_n"):
            value = getattr(self, attr)
            if not value > 0:
                raise DomainError(f"{self.name}: {attr} must be positive, got {value}")
        if self.sigma_model not in ("analytic", "table"):
            raise DomainError(f"{self.name}: unknown sigma model '{self.sigma_model}'")
        if self.sigma_model == "table" and not self.sigma_table:
            raise DomainError(f"{self.name}: table sigma model needs a table path")

    @property
    def sigma_n(self) -> float:
        """Normal-state conductivity in S/m"""
        return 1.0 / self.rho_n

    @property
    def pair_breaking_omega(self) -> float:
        """Angular frequency at which hbar*omega = 2*gap0"""
        return 2.0 * self.gap0 / HBAR


@dataclass(frozen=True)
class ComplexConductivity:
    """sigma1 and sigma2 in S/m at (omega, T); arrays when T is an array"""

    sigma1: ArrayLike
    sigma2: ArrayLike
    omega: float
    T: ArrayLike = field(repr=False)

    @property
    def ratio(self) -> ArrayLike:
        """sigma1/sigma2, the loss tangent entering the microwave internal loss"""
        return self.sigma1 / self.sigma2


def _check_domain(sc: SuperconductorParams, omega: float, T: np.ndarray):
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if np.any(T <= 0):
        raise DomainError(f"temperature must be positive, got {T.min()}")
    if np.any(T >= sc.Tc):
        raise NormalStateError(
            f"{sc.name} is in the normal state at T = {T.max():.6g} K (Tc = {sc.Tc} K)"
        )
    if HBAR * omega >= 2.0 * sc.gap0:
        raise PairBreakingError(
            f"{sc.name}: hbar*omega = {HBAR * omega:.4g} J reaches 2*gap = {2 * sc.gap0:.4g} J"
        )


def _analytic(sc: SuperconductorParams, omega: float, T: np.ndarray) -> Tuple:
    gap = sc.gap0
    photon = HBAR * omega
    x = photon / (2.0 * K_B * T)
    sinh_k0 = 0.5 * k0e(x) * -np.expm1(-2.0 * x)
    sigma1 = sc.sigma_n * (4.0 * gap / photon) * np.exp(-gap / (K_B * T)) * sinh_k0
    sigma2 = sc.sigma_n * (np.pi * gap / photon) * np.tanh(gap / (2.0 * K_B * T))
    return np.maximum(sigma1, SIGMA1_FLOOR), sigma2


class ConductivityTable:
    """
    Tabulated sigma1/sigma2 on a regular (T, omega) grid, interpolated in log-log space
    """

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.logger = logging.getLogger(__name__)

        if not self.path.exists():
            raise MaterialLoadError(str(self.path), "conductivity table not found")

        frame = pd.read_csv(self.path, float_precision="round_trip")
        missing = [c for c in TABLE_COLUMNS if c not in frame.columns]
        if missing:
            raise MaterialLoadError(str(self.path), f"missing columns {missing}")

        self.temperatures = np.unique(frame["T_K"].to_numpy(dtype=float))
        self.omegas = np.unique(frame["omega_rad_s"].to_numpy(dtype=float))
        n_t, n_w = len(self.temperatures), len(self.omegas)
        if len(frame) != n_t * n_w:
            raise MaterialLoadError(str(self.path), "rows do not form a full (T, omega) grid")
        ordered = frame.sort_values(["T_K", "omega_rad_s"], kind="mergesort")
        if not ordered.index.equals(frame.index):
            raise MaterialLoadError(str(self.path), "rows must be sorted by T then omega")

        sigma1 = np.maximum(ordered["sigma1_S_m"].to_numpy(dtype=float), SIGMA1_FLOOR)
        sigma2 = ordered["sigma2_S_m"].to_numpy(dtype=float)
        if np.any(sigma2 <= 0):
            raise MaterialLoadError(str(self.path), "sigma2 must be positive")

        self._sigma1 = sigma1.reshape(n_t, n_w)
        self._sigma2 = sigma2.reshape(n_t, n_w)
        self._log_sigma1 = np.log(self._sigma1)
        self._log_sigma2 = np.log(self._sigma2)
        self._log_t = np.log(self.temperatures)
        self._log_w = np.log(self.omegas)
        self.logger.debug(f"Loaded conductivity table {self.path} ({n_t} x {n_w})")

    def _interpolate(self, values: np.ndarray, log_t: np.ndarray, log_w: float) -> np.ndarray:
        n_t, n_w = values.shape
        if n_t > 1 and n_w > 1:
            interpolator = RegularGridInterpolator((self._log_t, self._log_w), values)
            points = np.column_stack([log_t, np.full_like(log_t, log_w)])
            return interpolator(points)
        if n_t > 1:
            return np.interp(log_t, self._log_t, values[:, 0])
        if n_w > 1:
            return np.full_like(log_t, np.interp(log_w, self._log_w, values[0, :]))
        return np.full_like(log_t, values[0, 0])

    def lookup(self, omega: float, T: np.ndarray) -> Tuple:
        """Return (sigma1, sigma2) arrays at the given omega and temperatures"""
        t_lo, t_hi = self.temperatures[0], self.temperatures[-1]
        w_lo, w_hi = self.omegas[0], self.omegas[-1]
        if np.any(T < t_lo) or np.any(T > t_hi):
            raise RangeError(f"T outside table range [{t_lo}, {t_hi}] K ({self.path.name})")
        if omega < w_lo or omega > w_hi:
            raise RangeError(
                f"omega = {omega:.6g} rad/s outside table range [{w_lo}, {w_hi}] ({self.path.name})"
            )

        log_t = np.log(np.atleast_1d(T))
        log_w = np.log(omega)
        sigma1 = np.exp(self._interpolate(self._log_sigma1, log_t, log_w))
        sigma2 = np.exp(self._interpolate(self._log_sigma2, log_t, log_w))

        # grid nodes return the tabulated values exactly
        w_node = np.flatnonzero(self.omegas == omega)
        if w_node.size:
            temperatures = np.atleast_1d(np.asarray(T, dtype=float))
            t_node = np.minimum(
                np.searchsorted(self.temperatures, temperatures), len(self.temperatures) - 1
            )
            on_grid = self.temperatures[t_node] == temperatures
            sigma1 = np.where(on_grid, self._sigma1[t_node, w_node[0]], sigma1)
            sigma2 = np.where(on_grid, self._sigma2[t_node, w_node[0]], sigma2)
        return sigma1.reshape(np.shape(T)), sigma2.reshape(np.shape(T))


@lru_cache(maxsize=16)
def load_conductivity_table(path: str) -> ConductivityTable:
    """Load (once per process) a conductivity table"""
    return ConductivityTable(path)


def sc_conductivity(sc: SuperconductorParams, omega: float, T: ArrayLike) -> ComplexConductivity:
    """
    Complex conductivity of a superconductor

    Args:
        sc: Superconductor parameters
        omega: Angular frequency in rad/s
        T: Temperature(s) in K, scalar or array, 0 < T < Tc

    Returns:
        ComplexConductivity with the same shape as T
    """
    temperatures = np.asarray(T, dtype=float)
    _check_domain(sc, omega, temperatures)

    if sc.sigma_model == "table":
        sigma1, sigma2 = load_conductivity_table(str(sc.sigma_table)).lookup(omega, temperatures)
    else:
        sigma1, sigma2 = _analytic(sc, omega, temperatures)

    if temperatures.ndim == 0:
        sigma1, sigma2 = float(sigma1), float(sigma2)
        return ComplexConductivity(sigma1=sigma1, sigma2=sigma2, omega=omega, T=float(temperatures))
    return ComplexConductivity(sigma1=sigma1, sigma2=sigma2, omega=omega, T=temperatures)
