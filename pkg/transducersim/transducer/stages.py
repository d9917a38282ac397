"""
Conversion stages: assembly of loss, coupling and heating laws, and their solution
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from transducersim.exceptions import DomainError
from transducersim.materials.conductivity import sc_conductivity
from transducersim.materials.constants import C
from transducersim.materials.occupancy import bose_einstein
from transducersim.materials.registry import MaterialRegistry, ThermalMaterialParams
from transducersim.rates.coupling import (
    eo_coupling,
    ki_coupling,
    ki_params,
    pump_photons_eo,
    pump_photons_ki,
)
from transducersim.rates.geometry import FrequencyPlan, Geometry, LossBudget
from transducersim.rates.losses import (
    intermediate_loss_rates,
    microwave_loss_rates,
    optical_loss_rates,
)
from transducersim.thermal.solver import (
    CAP_FRACTION_OF_TC,
    HeatingStage,
    ThermalSolution,
    solve_self_consistent_dT,
)

logger = logging.getLogger(__name__)

OCCUPANCY_BRANCHES = ("physical", "as_printed")

EO_MEDIUM = "LiNbO3"
SUPERCONDUCTOR = "NbN"


@dataclass(frozen=True)
class StageModel:
    """
    Temperature-dependent laws of one conversion stage

    ``loss_low`` is the input mode (whose added occupancy is reported),
    ``loss_high`` the output mode. Both accept scalar or array temperatures.
    """

    name: str
    g: float
    omega_low: float
    omega_pump: float
    loss_low: Callable[[np.ndarray], LossBudget]
    loss_high: Callable[[np.ndarray], LossBudget]
    pump_absorption: Callable[[np.ndarray], np.ndarray]
    photons_for_unit_cooperativity: Callable[[float, np.ndarray, np.ndarray], np.ndarray]
    heat_sink: ThermalMaterialParams
    L: float
    T_base: float
    T_max: float

    def pump_photons(self, T):
        return self.photons_for_unit_cooperativity(
            self.g, self.loss_low(T).kappa_tot, self.loss_high(T).kappa_tot
        )

    def heating_stage(self) -> HeatingStage:
        return HeatingStage(
            name=self.name,
            pump_photons=self.pump_photons,
            pump_absorption=self.pump_absorption,
            omega_pump=self.omega_pump,
            g_th_law=self.heat_sink.g_th_law,
            L=self.L,
            T_base=self.T_base,
            T_max=self.T_max,
        )


@dataclass(frozen=True)
class StageResult:
    """Evaluation of one stage at its self-consistent temperature"""

    name: str
    g: float
    loss_low: LossBudget
    loss_high: LossBudget
    pump_photons: float
    thermal: ThermalSolution
    eta_ext: float
    n_added: float
    n_added_physical: float
    n_added_as_printed: float
    dT_open_loop: float

    def __post_init__(self):
        if not 0.0 <= self.eta_ext <= 1.0:
            raise DomainError(f"{self.name}: external efficiency {self.eta_ext} outside [0, 1]")
        if self.n_added < 0:
            raise DomainError(f"{self.name}: negative added occupancy {self.n_added}")


def external_efficiency(loss_a: LossBudget, loss_b: LossBudget) -> float:
    """Product of the extraction ratios kappa_ext/kappa_tot of both modes"""
    if not (loss_a.kappa_tot > 0 and loss_b.kappa_tot > 0):
        raise DomainError("external efficiency needs positive total loss rates")
    return float(loss_a.extraction * loss_b.extraction)


def added_occupancy(
    loss: LossBudget, omega: float, T_hot: float, T_base: float
) -> Dict[str, float]:
    """
    Thermal occupancy of a mode coupled to a heated medium and a cold bath

    The ``physical`` branch weights the heated medium by the internal
    (absorption) ratio and the cryostat by the extraction ratio; ``as_printed``
    swaps the two weights.
    """
    n_hot = bose_einstein(omega, T_hot)
    n_cold = bose_einstein(omega, T_base)
    internal = float(loss.kappa_int / loss.kappa_tot)
    external = float(loss.extraction)
    return {
        "physical": n_hot * internal + n_cold * external,
        "as_printed": n_hot * external + n_cold * internal,
    }


def solve_stage(model: StageModel, branch: str = "physical") -> StageResult:
    """Solve a stage's heating and evaluate its efficiency and added noise"""
    if branch not in OCCUPANCY_BRANCHES:
        raise DomainError(f"unknown occupancy branch '{branch}'")
    heating = model.heating_stage()
    thermal = solve_self_consistent_dT(heating)

    T_hot = thermal.T_hot
    low = model.loss_low(T_hot)
    high = model.loss_high(T_hot)
    occupancy = added_occupancy(low, model.omega_low, T_hot, model.T_base)
    logger.debug(
        f"{model.name} stage: dT = {thermal.delta_T:.4g} K, runaway = {thermal.runaway}, "
        f"n = {occupancy[branch]:.4g}"
    )
    return StageResult(
        name=model.name,
        g=model.g,
        loss_low=low,
        loss_high=high,
        pump_photons=float(model.pump_photons(T_hot)),
        thermal=thermal,
        eta_ext=external_efficiency(low, high),
        n_added=occupancy[branch],
        n_added_physical=occupancy["physical"],
        n_added_as_printed=occupancy["as_printed"],
        dT_open_loop=heating.open_loop(),
    )


def eo_stage_model(
    geom: Geometry,
    freqs: FrequencyPlan,
    registry: MaterialRegistry,
    T_base: float,
    xi: float = 1.0,
    heat_sink: str = EO_MEDIUM,
    dielectric_loss: bool = False,
) -> StageModel:
    """
    Electro-optic stage: optical pump on the EO medium between superconducting films

    The input mode is the microwave mode for a single-step plan and the
    intermediate mode for a two-step plan.
    """
    opt = registry.optical(EO_MEDIUM)
    sc = registry.superconductor(SUPERCONDUCTOR)
    omega_low = freqs.low
    dielectric_alpha = None
    if dielectric_loss and freqs.omega_i is not None:
        dielectric_alpha = opt.thz_absorption(omega_low)

    def loss_low(T):
        sigma = sc_conductivity(sc, omega_low, T)
        if freqs.omega_i is None:
            return microwave_loss_rates(omega_low, geom, sigma)
        return intermediate_loss_rates(omega_low, geom, sigma, dielectric_alpha)

    optical = optical_loss_rates(opt.alpha["o"], opt.n_g, geom.L)
    kappa_po_abs = opt.alpha["po"] * C

    return StageModel(
        name="EO",
        g=eo_coupling(freqs, opt, geom, xi),
        omega_low=omega_low,
        omega_pump=freqs.omega_po,
        loss_low=loss_low,
        loss_high=lambda T: optical,
        pump_absorption=lambda T: kappa_po_abs,
        photons_for_unit_cooperativity=pump_photons_eo,
        heat_sink=registry.thermal(heat_sink),
        L=geom.L,
        T_base=T_base,
        T_max=CAP_FRACTION_OF_TC * sc.Tc,
    )


def ki_stage_model(
    geom: Geometry,
    freqs: FrequencyPlan,
    registry: MaterialRegistry,
    T_base: float,
    heat_sink: str = SUPERCONDUCTOR,
) -> StageModel:
    """
    Kinetic-inductance stage: microwave pump at omega_pi mixing omega_mu up to omega_i

    Both signal modes and the pump are confined by the film, so all three
    take the superconductor loss law.
    """
    sc = registry.superconductor(SUPERCONDUCTOR)
    g = ki_coupling(freqs, ki_params(geom, sc))

    def loss_mu(T):
        return microwave_loss_rates(freqs.omega_mu, geom, sc_conductivity(sc, freqs.omega_mu, T))

    def loss_i(T):
        return microwave_loss_rates(freqs.omega_i, geom, sc_conductivity(sc, freqs.omega_i, T))

    def pump_absorption(T):
        return freqs.omega_pi * sc_conductivity(sc, freqs.omega_pi, T).ratio

    return StageModel(
        name="KI",
        g=g,
        omega_low=freqs.omega_mu,
        omega_pump=freqs.omega_pi,
        loss_low=loss_mu,
        loss_high=loss_i,
        pump_absorption=pump_absorption,
        photons_for_unit_cooperativity=pump_photons_ki,
        heat_sink=registry.thermal(heat_sink),
        L=geom.L,
        T_base=T_base,
        T_max=CAP_FRACTION_OF_TC * sc.Tc,
    )
