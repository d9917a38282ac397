"""
Loss-rate laws for the superconducting and optical modes
"""

from typing import Optional

from transducersim.exceptions import DomainError
from transducersim.materials.conductivity import ComplexConductivity
from transducersim.materials.constants import C
from transducersim.rates.geometry import Geometry, LossBudget


def microwave_loss_rates(omega: float, geom: Geometry, sigma: ComplexConductivity) -> LossBudget:
    """
    Loss budget of a mode confined by the superconducting films

    kappa_int = omega * sigma1/sigma2 (kinetic loss), kappa_ext = omega * (w/L)^2 (radiation).

    Args:
        omega: Mode angular frequency in rad/s
        geom: Device geometry
        sigma: Film conductivity at (omega, T); array-valued over T is allowed

    Returns:
        LossBudget, array-valued when sigma is
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    return LossBudget(
        kappa_int=omega * sigma.ratio,
        kappa_ext=omega * (geom.w / geom.L) ** 2,
    )


def optical_loss_rates(alpha: float, n_g: float, L: float) -> LossBudget:
    """
    Loss budget of a travelling optical mode

    Args:
        alpha: Absorption coefficient in 1/m
        n_g: Group index
        L: Optical path length in m
    """
    if alpha < 0:
        raise DomainError(f"alpha must be non-negative, got {alpha}")
    if n_g < 1:
        raise DomainError(f"n_g must be >= 1, got {n_g}")
    if not L > 0:
        raise DomainError(f"L must be positive, got {L}")
    return LossBudget(kappa_int=alpha * C, kappa_ext=C / (n_g * L))


def intermediate_loss_rates(
    omega_i: float,
    geom: Geometry,
    sigma: ComplexConductivity,
    dielectric_alpha: Optional[float] = None,
) -> LossBudget:
    """
    Loss budget of the intermediate (sub-THz) mode

    Superconductor-dominated by default; a dielectric absorption coefficient
    (1/m) adds alpha * c to the internal loss when given.
    """
    budget = microwave_loss_rates(omega_i, geom, sigma)
    if dielectric_alpha is None:
        return budget
    if dielectric_alpha < 0:
        raise DomainError(f"dielectric alpha must be non-negative, got {dielectric_alpha}")
    return LossBudget(
        kappa_int=budget.kappa_int + dielectric_alpha * C,
        kappa_ext=budget.kappa_ext,
    )
