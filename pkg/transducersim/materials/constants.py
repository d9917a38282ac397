"""
Physical constants (CODATA 2018)

The values are pinned here instead of read from ``scipy.constants`` so results
do not move when scipy adopts a newer CODATA adjustment.
"""

import math
from dataclasses import dataclass

# exact since the 2019 SI redefinition
PLANCK = 6.62607015e-34  # J s
HBAR = PLANCK / (2.0 * math.pi)  # 1.054571817...e-34 J s
K_B = 1.380649e-23  # J/K
C = 299792458.0  # m/s
# measured; CODATA 2018 recommended value
EPS0 = 8.8541878128e-12  # F/m


@dataclass(frozen=True)
class PhysicalConstants:
    """Read-only bundle of the constants used by the rate and heating laws"""

    hbar: float = HBAR
    k_B: float = K_B
    c: float = C
    eps0: float = EPS0


CONSTANTS = PhysicalConstants()
