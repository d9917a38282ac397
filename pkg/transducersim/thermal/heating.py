"""
Pump-absorption heating of the nonlinear medium

Absorbed pump power n * hbar * omega * kappa_abs flows out radially through
the conductance G_th = g_th(T) * L, giving the steady-state rise

    dT = n hbar omega kappa_abs / (g_th(T) L)

The transient rise approaches it as dT_ss * (1 - exp(-t / tau_th)) with
tau_th = C_th / G_th and C_th = density * c_th * w^2 * L.
"""

import math
from dataclasses import dataclass
from typing import Optional

from transducersim.exceptions import DomainError
from transducersim.materials.constants import HBAR
from transducersim.materials.laws import Law
from transducersim.materials.registry import ThermalMaterialParams
from transducersim.rates.geometry import Geometry


@dataclass(frozen=True)
class HeatingInputs:
    """
    Inputs of the heating laws for one pumped medium

    Args:
        pump_photons: Number of pump photons in the medium
        omega_pump: Pump angular frequency in rad/s
        kappa_pump_abs: Pump absorption rate in 1/s
        g_th_law: Thermal conductivity law of the heat-sinking material
        L: Device length in m
        T_eval: Temperature at which g_th (and c_th) are evaluated, in K
        C_th: Heat capacity in J/K; needed for the transient law only
    """

    pump_photons: float
    omega_pump: float
    kappa_pump_abs: float
    g_th_law: Law
    L: float
    T_eval: float
    C_th: Optional[float] = None

    def __post_init__(self):
        if self.pump_photons < 0 or self.kappa_pump_abs < 0:
            raise DomainError("pump photons and absorption rate must be non-negative")
        if not (self.omega_pump > 0 and self.L > 0 and self.T_eval > 0):
            raise DomainError("omega_pump, L and T_eval must be positive")
        if self.C_th is not None and not self.C_th > 0:
            raise DomainError(f"C_th must be positive, got {self.C_th}")

    @classmethod
    def from_geometry(
        cls,
        pump_photons: float,
        omega_pump: float,
        kappa_pump_abs: float,
        material: ThermalMaterialParams,
        geom: Geometry,
        T_eval: float,
    ) -> "HeatingInputs":
        """Build inputs with C_th = density * c_th(T_eval) * w^2 * L"""
        C_th = material.density * material.c_th_law(T_eval) * geom.volume
        return cls(
            pump_photons=pump_photons,
            omega_pump=omega_pump,
            kappa_pump_abs=kappa_pump_abs,
            g_th_law=material.g_th_law,
            L=geom.L,
            T_eval=T_eval,
            C_th=C_th,
        )

    @property
    def absorbed_power(self) -> float:
        """Absorbed pump power in W"""
        return self.pump_photons * HBAR * self.omega_pump * self.kappa_pump_abs

    @property
    def G_th(self) -> float:
        """Thermal conductance g_th(T_eval) * L in W/K"""
        return self.g_th_law(self.T_eval) * self.L

    @property
    def tau_th(self) -> float:
        """Thermal time constant C_th / G_th in s"""
        if self.C_th is None:
            raise DomainError("tau_th needs C_th; build the inputs with from_geometry")
        return self.C_th / self.G_th


def steady_state_dT(h: HeatingInputs) -> float:
    """Steady-state temperature rise in K with g_th taken at h.T_eval"""
    return h.absorbed_power / h.G_th


def transient_heating(h: HeatingInputs, t_elapsed: float) -> float:
    """
    Temperature rise after pumping for t_elapsed seconds

    Returns 0 at t = 0 and the steady-state rise as t goes to infinity.
    """
    if t_elapsed < 0:
        raise DomainError(f"elapsed time must be non-negative, got {t_elapsed}")
    if t_elapsed == 0:
        return 0.0
    steady = steady_state_dT(h)
    if math.isinf(t_elapsed):
        return steady
    return steady * -math.expm1(-t_elapsed / h.tau_th)
