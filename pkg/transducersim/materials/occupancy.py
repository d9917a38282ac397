"""
Thermal Bose-Einstein occupation
"""

import math

from transducersim.exceptions import DomainError
from transducersim.materials.constants import HBAR, K_B

# above this ratio exp() overflows long before the occupancy matters
UNDERFLOW_RATIO = 700.0
SERIES_RATIO = 1e-6


def bose_einstein(omega: float, T: float) -> float:
    """
    Mean thermal photon number of a mode

    Args:
        omega: Angular frequency of the mode in rad/s
        T: Bath temperature in K

    Returns:
        1 / (exp(hbar*omega / k_B T) - 1); exactly 0 at T = 0
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if T < 0:
        raise DomainError(f"temperature must be non-negative, got {T}")
    if T == 0:
        return 0.0

    x = HBAR * omega / (K_B * T)
    if x > UNDERFLOW_RATIO:
        return 0.0
    if x < SERIES_RATIO:
        # Laurent series of 1/(e^x - 1)
        return 1.0 / x - 0.5 + x / 12.0
    return 1.0 / math.expm1(x)
