"""
Device-level evaluation of single-step and two-step transducers
"""

import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from transducersim.exceptions import DomainError
from transducersim.materials.registry import MaterialRegistry
from transducersim.rates.coupling import XiTable, mode_volumes
from transducersim.rates.geometry import CouplingRates, FrequencyPlan, Geometry
from transducersim.transducer.stages import (
    EO_MEDIUM,
    SUPERCONDUCTOR,
    StageResult,
    eo_stage_model,
    ki_stage_model,
    solve_stage,
)

logger = logging.getLogger(__name__)

SATURATED_OCCUPANCY = sys.float_info.max

FLAG_NAMES = ("runaway", "multi_root", "cutoff", "aspect", "overlap_degraded", "saturated")

XiLike = Union[float, XiTable]


def occupancy_composition(
    stage_occupancies: Sequence[float], stage_efficiencies: Sequence[float]
) -> float:
    """
    Added occupancy of a cascade referred to its input

        n_total = sum_k n_k / prod_{j<k} eta_j

    Returns SATURATED_OCCUPANCY when a stage with noise sits behind a zero
    efficiency (or the sum overflows).
    """
    if len(stage_occupancies) != len(stage_efficiencies):
        raise DomainError("occupancy and efficiency lists differ in length")
    if any(not 0.0 <= eta <= 1.0 for eta in stage_efficiencies):
        raise DomainError("stage efficiencies must lie in [0, 1]")

    total = 0.0
    gain = 1.0
    for n, eta in zip(stage_occupancies, stage_efficiencies):
        if n > 0:
            if gain == 0.0:
                return SATURATED_OCCUPANCY
            total += n / gain
        gain *= eta
    if not math.isfinite(total):
        return SATURATED_OCCUPANCY
    return total


@dataclass(frozen=True)
class TransductionPoint:
    """Full evaluation of one design point"""

    geometry: Geometry
    freqs: FrequencyPlan
    T_bases: Tuple[float, ...]
    stages: List[StageResult]
    couplings: CouplingRates
    eta_total: float
    n_total: float
    n_total_physical: float
    n_total_as_printed: float
    occupancy_branch: str
    flags: Dict[str, bool]
    geometry_ki: Optional[Geometry] = None
    meta: Dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def scheme(self) -> str:
        return self.freqs.scheme

    @property
    def physical(self) -> bool:
        """False when any stage ran away or the occupancy saturated"""
        return not (self.flags["runaway"] or self.flags["saturated"])

    def stage(self, name: str) -> StageResult:
        for result in self.stages:
            if result.name == name:
                return result
        raise KeyError(name)

    def to_record(self) -> Dict[str, Any]:
        """Flat record with stable, unit-suffixed column names"""
        record: Dict[str, Any] = {
            "scheme": self.scheme,
            "w_m": self.geometry.w,
            "L_m": self.geometry.L,
            "t_m": self.geometry.t,
        }
        if self.geometry_ki is not None:
            record.update(
                {
                    "w_ki_m": self.geometry_ki.w,
                    "L_ki_m": self.geometry_ki.L,
                    "t_ki_m": self.geometry_ki.t,
                }
            )
        record.update(
            {
                "omega_mu_rad_s": self.freqs.omega_mu,
                "omega_i_rad_s": self.freqs.omega_i,
                "omega_pi_rad_s": self.freqs.omega_pi,
                "omega_po_rad_s": self.freqs.omega_po,
                "omega_o_rad_s": self.freqs.omega_o,
                "T1_K": self.T_bases[0],
            }
        )
        if len(self.T_bases) > 1:
            record["T2_K"] = self.T_bases[1]
        record.update(
            {
                "xi": self.couplings.xi,
                "g_EO_rad_s": self.couplings.g_EO,
                "g_KI_rad_s": self.couplings.g_KI,
                "eta_total": self.eta_total,
                "n_total": self.n_total,
                "n_total_physical": self.n_total_physical,
                "n_total_as_printed": self.n_total_as_printed,
                "occupancy_branch": self.occupancy_branch,
            }
        )
        for result in self.stages:
            prefix = result.name.lower()
            thermal = result.thermal
            record.update(
                {
                    f"{prefix}_kappa_low_int_rad_s": float(result.loss_low.kappa_int),
                    f"{prefix}_kappa_low_ext_rad_s": float(result.loss_low.kappa_ext),
                    f"{prefix}_kappa_high_int_rad_s": float(result.loss_high.kappa_int),
                    f"{prefix}_kappa_high_ext_rad_s": float(result.loss_high.kappa_ext),
                    f"{prefix}_pump_photons": result.pump_photons,
                    f"{prefix}_dT_K": thermal.delta_T,
                    f"{prefix}_dT_open_loop_K": result.dT_open_loop,
                    f"{prefix}_T_hot_K": thermal.T_hot,
                    f"{prefix}_eta_ext": result.eta_ext,
                    f"{prefix}_n_added": result.n_added,
                    f"{prefix}_converged": thermal.converged,
                    f"{prefix}_residual_K": thermal.residual,
                    f"{prefix}_iterations": thermal.iterations,
                }
            )
        for name in FLAG_NAMES:
            record[f"flag_{name}"] = self.flags[name]
        record["flags"] = "|".join(name for name in FLAG_NAMES if self.flags[name])
        return record


def _resolve_xi(xi: XiLike, freqs: FrequencyPlan) -> float:
    if isinstance(xi, XiTable):
        return xi(freqs.low)
    return float(xi)


def _assemble(
    geom: Geometry,
    freqs: FrequencyPlan,
    T_bases: Tuple[float, ...],
    stages: List[StageResult],
    couplings: CouplingRates,
    branch: str,
    cutoff: bool,
    geometry_ki: Optional[Geometry] = None,
) -> TransductionPoint:
    efficiencies = [s.eta_ext for s in stages]
    n_physical = occupancy_composition([s.n_added_physical for s in stages], efficiencies)
    n_as_printed = occupancy_composition([s.n_added_as_printed for s in stages], efficiencies)
    n_total = n_physical if branch == "physical" else n_as_printed

    eta_total = math.prod(efficiencies)
    aspect = geom.aspect_degraded or (geometry_ki is not None and geometry_ki.aspect_degraded)
    flags = {
        "runaway": any(s.thermal.runaway for s in stages),
        "multi_root": any(s.thermal.multi_root for s in stages),
        "cutoff": cutoff,
        "aspect": aspect,
        "overlap_degraded": couplings.xi < 1.0,
        "saturated": n_total == SATURATED_OCCUPANCY,
    }
    return TransductionPoint(
        geometry=geom,
        freqs=freqs,
        T_bases=T_bases,
        stages=stages,
        couplings=couplings,
        eta_total=eta_total,
        n_total=n_total,
        n_total_physical=n_physical,
        n_total_as_printed=n_as_printed,
        occupancy_branch=branch,
        flags=flags,
        geometry_ki=geometry_ki,
    )


def single_step_point(
    geom: Geometry,
    freqs: FrequencyPlan,
    T1: float,
    materials: MaterialRegistry,
    xi: XiLike = 1.0,
    branch: str = "physical",
    heat_sink: str = EO_MEDIUM,
) -> TransductionPoint:
    """
    Evaluate a single-step electro-optic transducer

    Args:
        geom: Device geometry
        freqs: Single-step frequency plan
        T1: Base temperature in K
        materials: Material registry
        xi: Mode overlap (constant or table over the low band)
        branch: Occupancy branch reported as n_total
        heat_sink: Material conducting the pump heat away

    Returns:
        TransductionPoint with one EO stage
    """
    if freqs.omega_i is not None:
        raise DomainError("single-step evaluation takes a plan without an intermediate band")
    xi_value = _resolve_xi(xi, freqs)
    model = eo_stage_model(geom, freqs, materials, T1, xi_value, heat_sink=heat_sink)
    result = solve_stage(model, branch)

    opt = materials.optical(EO_MEDIUM)
    couplings = CouplingRates(g_EO=model.g, xi=xi_value, mode_volumes=mode_volumes(geom))
    point = _assemble(
        geom,
        freqs,
        (T1,),
        [result],
        couplings,
        branch,
        cutoff=geom.below_optical_cutoff(opt.n["po"], freqs.omega_po),
    )
    logger.debug(
        f"single-step w={geom.w:.3g} L={geom.L:.3g}: "
        f"eta={point.eta_total:.4g} n={point.n_total:.4g}"
    )
    return point


def two_step_point(
    geom_ki: Geometry,
    geom_eo: Geometry,
    freqs: FrequencyPlan,
    T1: float,
    T2: float,
    materials: MaterialRegistry,
    xi: XiLike = 1.0,
    branch: str = "physical",
    heat_sink_ki: str = SUPERCONDUCTOR,
    heat_sink_eo: str = EO_MEDIUM,
    dielectric_loss: bool = False,
) -> TransductionPoint:
    """
    Evaluate a two-step (kinetic-inductance then electro-optic) transducer

    The KI stage converts omega_mu to omega_i at base T1, the EO stage
    converts omega_i to the optical sideband at base T2. Efficiencies
    multiply; added occupancies are referred to the microwave input.
    """
    if freqs.omega_i is None:
        raise DomainError("two-step evaluation needs an intermediate band")
    xi_value = _resolve_xi(xi, freqs)

    ki_model = ki_stage_model(geom_ki, freqs, materials, T1, heat_sink=heat_sink_ki)
    eo_model = eo_stage_model(
        geom_eo,
        freqs,
        materials,
        T2,
        xi_value,
        heat_sink=heat_sink_eo,
        dielectric_loss=dielectric_loss,
    )
    ki_result = solve_stage(ki_model, branch)
    eo_result = solve_stage(eo_model, branch)

    opt = materials.optical(EO_MEDIUM)
    couplings = CouplingRates(
        g_EO=eo_model.g, g_KI=ki_model.g, xi=xi_value, mode_volumes=mode_volumes(geom_eo)
    )
    point = _assemble(
        geom_eo,
        freqs,
        (T1, T2),
        [ki_result, eo_result],
        couplings,
        branch,
        cutoff=geom_eo.below_optical_cutoff(opt.n["po"], freqs.omega_po),
        geometry_ki=geom_ki,
    )
    logger.debug(
        f"two-step w={geom_eo.w:.3g} L={geom_eo.L:.3g} omega_i={freqs.omega_i:.4g}: "
        f"eta={point.eta_total:.4g} n={point.n_total:.4g}"
    )
    return point


def evaluate(config, registry: MaterialRegistry) -> TransductionPoint:
    """
    Evaluate the design point described by a resolved RunConfig

    Args:
        config: transducersim.utils.config.RunConfig
        registry: Material registry

    Returns:
        TransductionPoint
    """
    freqs = config.frequency_plan()
    xi = config.xi_table if config.xi_table is not None else config.xi
    if config.scheme == "single":
        return single_step_point(
            config.geometry,
            freqs,
            config.T1,
            registry,
            xi=xi,
            branch=config.occupancy_branch,
            heat_sink=config.heat_sink_eo,
        )
    return two_step_point(
        config.geometry_ki or config.geometry,
        config.geometry,
        freqs,
        config.T1,
        config.T2,
        registry,
        xi=xi,
        branch=config.occupancy_branch,
        heat_sink_ki=config.heat_sink_ki,
        heat_sink_eo=config.heat_sink_eo,
        dielectric_loss=config.dielectric_loss,
    )
