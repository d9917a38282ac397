"""
Self-consistent heating under the unit-cooperativity constraint

Heating raises the loss rates, the loss rates raise the pump needed for unit
cooperativity, and the pump heats the medium. The stage temperature rise is
the smallest root of

    f(dT) = dT - rhs(dT),    rhs(dT) = n_p(T) hbar omega_p kappa_abs(T) / (g_th(T) L)

with T = T_base + dT, searched on [0, T_max - T_base].
"""

import logging
from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np
from scipy.optimize import root_scalar

from transducersim.exceptions import SolverError, TransducerError
from transducersim.materials.constants import HBAR
from transducersim.materials.laws import Law
from transducersim.rates.coupling import pump_photons_eo, pump_photons_ki

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

DEFAULT_TOL = 1e-6  # K
DEFAULT_MAX_ITER = 200
DEFAULT_SCAN_POINTS = 1000
ROOT_XTOL = 1e-12  # K
CAP_FRACTION_OF_TC = 0.9


@dataclass(frozen=True)
class HeatingStage:
    """
    One pumped stage as seen by the heating solver

    pump_photons and pump_absorption map absolute temperature (scalar or
    array) to the unit-cooperativity photon number and the pump absorption
    rate in 1/s.
    """

    name: str
    pump_photons: Callable[[ArrayLike], ArrayLike]
    pump_absorption: Callable[[ArrayLike], ArrayLike]
    omega_pump: float
    g_th_law: Law
    L: float
    T_base: float
    T_max: float

    def rhs(self, delta_T: ArrayLike) -> ArrayLike:
        """Heating produced at T_base + delta_T"""
        T = self.T_base + np.asarray(delta_T, dtype=float)
        power = self.pump_photons(T) * HBAR * self.omega_pump * self.pump_absorption(T)
        values = power / (self.g_th_law(T) * self.L)
        return float(values) if np.ndim(delta_T) == 0 else np.broadcast_to(values, T.shape)

    def evaluate(self, delta_T: ArrayLike) -> ArrayLike:
        """rhs with law failures reported as SolverError at the failing temperature"""
        try:
            values = self.rhs(delta_T)
        except TransducerError as e:
            for dT in np.atleast_1d(delta_T):
                try:
                    self.rhs(float(dT))
                except TransducerError:
                    raise SolverError(f"{self.name} stage: {e}", self.T_base + float(dT)) from e
            raise SolverError(f"{self.name} stage: {e}") from e

        bad = ~np.isfinite(np.atleast_1d(values))
        if np.any(bad):
            dT = float(np.atleast_1d(delta_T)[np.argmax(bad)])
            raise SolverError(f"{self.name} stage: non-finite heating", self.T_base + dT)
        return values

    def open_loop(self) -> float:
        """Temperature rise with every law held at T_base"""
        return self.evaluate(0.0)


@dataclass(frozen=True)
class ThermalSolution:
    """
    Result of the self-consistent heating solve

    On runaway delta_T is the bracket cap, converged is False and the
    residual is |f| at the cap.
    """

    delta_T: float
    T_base: float
    converged: bool
    iterations: int
    residual: float
    runaway: bool
    bracket: Tuple[float, float]
    multi_root: bool = False

    @property
    def T_hot(self) -> float:
        return self.T_base + self.delta_T


def solve_self_consistent_dT(
    stage: HeatingStage,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> ThermalSolution:
    """
    Solve dT = rhs(dT) for the cold-branch root

    A uniform scan of f over the bracket locates the first sign change,
    bisection refines it. A second sign change sets ``multi_root``; no sign
    change at all means the heating outruns conduction everywhere (runaway).

    Args:
        stage: Stage description
        tol: Absolute tolerance on |f| in K
        max_iter: Bisection iteration limit
        scan_points: Number of scan intervals over the bracket

    Returns:
        ThermalSolution
    """
    cap = stage.T_max - stage.T_base
    if not cap > 0:
        raise SolverError(
            f"{stage.name} stage: base temperature above solver cap {stage.T_max:.6g} K",
            stage.T_base,
        )
    bracket = (0.0, cap)

    if stage.evaluate(0.0) == 0.0:
        return ThermalSolution(0.0, stage.T_base, True, 0, 0.0, False, bracket)

    grid = np.linspace(0.0, cap, scan_points + 1)
    f = grid - stage.evaluate(grid)
    positive = f >= 0
    changes = np.flatnonzero(positive[:-1] != positive[1:])

    if changes.size == 0:
        residual = abs(cap - stage.evaluate(cap))
        logger.debug(f"{stage.name} stage runaway at T_base = {stage.T_base:.6g} K")
        return ThermalSolution(cap, stage.T_base, False, 0, residual, True, bracket)

    k = changes[0]
    result = root_scalar(
        lambda dT: dT - stage.evaluate(dT),
        bracket=(grid[k], grid[k + 1]),
        method="bisect",
        xtol=ROOT_XTOL,
        maxiter=max_iter,
        options={"disp": False},
    )
    delta_T = float(result.root)
    residual = abs(delta_T - stage.evaluate(delta_T))
    multi_root = changes.size >= 2
    if multi_root:
        logger.debug(f"{stage.name} stage has {changes.size} sign changes; cold root kept")
    return ThermalSolution(
        delta_T=delta_T,
        T_base=stage.T_base,
        converged=bool(result.converged) and residual <= tol,
        iterations=int(result.iterations),
        residual=float(residual),
        runaway=False,
        bracket=bracket,
        multi_root=multi_root,
    )


def dT_scaling_eo(
    g_eo: float,
    kappa_low: float,
    kappa_o: float,
    omega_po: float,
    kappa_po_abs: float,
    g_th: float,
    L: float,
) -> float:
    """Open-loop EO-stage rise: unit-cooperativity optical pump, all rates at T_base"""
    return pump_photons_eo(g_eo, kappa_low, kappa_o) * HBAR * omega_po * kappa_po_abs / (g_th * L)


def dT_scaling_ki(
    g_ki: float,
    kappa_mu: float,
    kappa_i: float,
    omega_pi: float,
    kappa_pi_abs: float,
    g_th: float,
    L: float,
) -> float:
    """Open-loop KI-stage rise: unit-cooperativity microwave pump, all rates at T_base"""
    return pump_photons_ki(g_ki, kappa_mu, kappa_i) * HBAR * omega_pi * kappa_pi_abs / (g_th * L)
