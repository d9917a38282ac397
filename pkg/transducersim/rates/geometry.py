"""
Geometry, frequency plan and rate containers shared by the rate laws
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from transducersim.exceptions import ConfigError, DomainError
from transducersim.materials.constants import C

ArrayLike = Union[float, np.ndarray]

DEFAULT_FILM_THICKNESS = 20e-9  # m
ASPECT_LIMIT = 10.0
FREQUENCY_RTOL = 1e-12


@dataclass(frozen=True)
class Geometry:
    """
    Transducer cross-section and length

    Args:
        w: Waveguide width, equal to the superconducting film separation, in m
        L: Device length in m
        t: Superconducting film thickness in m
    """

    w: float
    L: float
    t: float = DEFAULT_FILM_THICKNESS

    def __post_init__(self):
        for attr in ("w", "L", "t"):
            value = getattr(self, attr)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"geometry {attr} must be positive and finite, got {value}")

    @property
    def volume(self) -> float:
        """Box mode volume w^2 L"""
        return self.w**2 * self.L

    @property
    def aspect_degraded(self) -> bool:
        """True when L < 10 w and radial heat flow is a poor approximation"""
        return self.L < ASPECT_LIMIT * self.w

    def below_optical_cutoff(self, n_po: float, omega_po: float) -> bool:
        """True when w is below the in-medium pump wavelength 2*pi*c/(n*omega_po)"""
        return self.w < 2.0 * math.pi * C / (n_po * omega_po)


@dataclass(frozen=True)
class FrequencyPlan:
    """
    Angular frequencies (rad/s) of the conversion chain

    Single-step: omega_o = omega_po + omega_mu.
    Two-step: omega_i = 2 omega_pi + omega_mu and omega_o = omega_po + omega_i.
    Use :meth:`single_step` / :meth:`two_step` to derive the dependent bands.
    """

    omega_mu: float
    omega_po: float
    omega_o: float
    omega_i: Optional[float] = None
    omega_pi: Optional[float] = None

    def __post_init__(self):
        for name in ("omega_mu", "omega_po", "omega_o", "omega_i", "omega_pi"):
            value = getattr(self, name)
            if value is not None and not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value}")

        if (self.omega_i is None) != (self.omega_pi is None):
            raise ConfigError("omega_i and omega_pi must be given together")

        low = self.omega_mu if self.omega_i is None else self.omega_i
        if not math.isclose(self.omega_o, self.omega_po + low, rel_tol=FREQUENCY_RTOL):
            raise DomainError("omega_o must equal omega_po plus the low-frequency band")

        if self.omega_i is not None:
            if not math.isclose(
                self.omega_i, 2.0 * self.omega_pi + self.omega_mu, rel_tol=FREQUENCY_RTOL
            ):
                raise DomainError("omega_i must equal 2*omega_pi + omega_mu")
            if not self.omega_mu < self.omega_i < self.omega_po:
                raise DomainError("band ordering omega_mu < omega_i < omega_po violated")

    @classmethod
    def single_step(cls, omega_mu: float, omega_po: float) -> "FrequencyPlan":
        return cls(omega_mu=omega_mu, omega_po=omega_po, omega_o=omega_po + omega_mu)

    @classmethod
    def two_step(cls, omega_mu: float, omega_i: float, omega_po: float) -> "FrequencyPlan":
        if not omega_i > omega_mu:
            raise DomainError(f"omega_i ({omega_i:.6g}) must exceed omega_mu ({omega_mu:.6g})")
        return cls(
            omega_mu=omega_mu,
            omega_po=omega_po,
            omega_o=omega_po + omega_i,
            omega_i=omega_i,
            omega_pi=0.5 * (omega_i - omega_mu),
        )

    @property
    def scheme(self) -> str:
        return "single" if self.omega_i is None else "two_step"

    @property
    def low(self) -> float:
        """Low-frequency input of the electro-optic stage (omega_mu or omega_i)"""
        return self.omega_mu if self.omega_i is None else self.omega_i


@dataclass(frozen=True)
class LossBudget:
    """
    Internal, external and total loss rates of one mode (rad/s)

    Rates may be numpy arrays when a budget is evaluated over a temperature grid.
    """

    kappa_int: ArrayLike
    kappa_ext: ArrayLike
    kappa_tot: ArrayLike = field(init=False)

    def __post_init__(self):
        if np.any(np.asarray(self.kappa_int) < 0) or np.any(np.asarray(self.kappa_ext) < 0):
            raise DomainError("loss rates must be non-negative")
        object.__setattr__(self, "kappa_tot", self.kappa_int + self.kappa_ext)

    @property
    def extraction(self) -> ArrayLike:
        """kappa_ext / kappa_tot"""
        return self.kappa_ext / self.kappa_tot


@dataclass(frozen=True)
class KineticInductorParams:
    """Scaling current I_star (A) and kinetic inductance L_k (H) of a film strip"""

    I_star: float
    L_k: float

    def __post_init__(self):
        if not (self.I_star > 0 and self.L_k > 0):
            raise DomainError("I_star and L_k must be positive")


@dataclass(frozen=True)
class CouplingRates:
    """Coupling rates of one design point; g_KI is None for single-step devices"""

    g_EO: float
    xi: float
    mode_volumes: Dict[str, float]
    g_KI: Optional[float] = None

    def __post_init__(self):
        if not self.g_EO > 0:
            raise DomainError(f"g_EO must be positive, got {self.g_EO}")
        if self.g_KI is not None and not self.g_KI > 0:
            raise DomainError(f"g_KI must be positive, got {self.g_KI}")
        if not 0 < self.xi <= 1:
            raise DomainError(f"xi must lie in (0, 1], got {self.xi}")
