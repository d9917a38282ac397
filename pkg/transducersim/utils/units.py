"""
Unit-suffixed quantity parsing

User-facing frequencies are ordinary frequencies (Hz); everything inside the
package is angular (rad/s). :func:`parse_frequency` is the one place where the
2*pi conversion happens.

Accepted suffixes (any SI prefix pint knows works, these are the documented ones):

=============  ======================================  ==================
kind           suffixes                                 stored as
=============  ======================================  ==================
frequency      Hz, kHz, MHz, GHz, THz                   rad/s (times 2*pi)
angular        rad/s, krad/s, Mrad/s, Grad/s, Trad/s    rad/s (as given)
length         m, cm, mm, um, µm, μm, nm, pm            m
temperature    K, mK, uK, µK, μK                        K
=============  ======================================  ==================

Bare numbers carry the base unit of their kind (Hz, m, K).
"""

import math
from typing import Union

import pint

from transducersim.exceptions import ConfigError

ureg = pint.UnitRegistry()

Number = Union[int, float]

FREQUENCY_SUFFIXES = ("Hz", "kHz", "MHz", "GHz", "THz")
ANGULAR_SUFFIXES = ("rad/s", "krad/s", "Mrad/s", "Grad/s", "Trad/s")
LENGTH_SUFFIXES = ("m", "cm", "mm", "um", "µm", "μm", "nm", "pm")
TEMPERATURE_SUFFIXES = ("K", "mK", "uK", "µK", "μK")

_DIMENSIONS = {
    "frequency": ("[frequency]", "Hz"),
    "length": ("[length]", "m"),
    "temperature": ("[temperature]", "K"),
}


def _normalize(text: str) -> str:
    # pint spells micro as "u" or "µ" (U+00B5); accept the Greek mu too
    return text.strip().replace("μ", "µ")


def _quantity(value: Union[str, Number], kind: str):
    dimension, base = _DIMENSIONS[kind]
    if isinstance(value, bool):
        raise ConfigError(f"expected a {kind}, got boolean {value!r}")
    if isinstance(value, (int, float)):
        return ureg.Quantity(float(value), base)
    try:
        quantity = ureg.Quantity(_normalize(str(value)))
    except (pint.errors.PintError, ValueError, TypeError, AttributeError) as e:
        raise ConfigError(f"cannot parse {kind} '{value}': {e}") from e
    if not isinstance(quantity, ureg.Quantity):
        return ureg.Quantity(float(quantity), base)
    if quantity.dimensionless:
        return ureg.Quantity(float(quantity.magnitude), base)
    if not quantity.check(dimension):
        raise ConfigError(f"'{value}' is not a {kind}")
    return quantity


def parse_frequency(value: Union[str, Number]) -> float:
    """
    Parse a frequency and return it as an angular frequency in rad/s

    Args:
        value: "8GHz", "200 THz", "5e10 rad/s" or a bare number in Hz

    Returns:
        Angular frequency in rad/s
    """
    if isinstance(value, str) and "rad" in value:
        try:
            quantity = ureg.Quantity(_normalize(value))
            return float(quantity.to("rad/s").magnitude)
        except (pint.errors.PintError, ValueError, AttributeError) as e:
            raise ConfigError(f"cannot parse angular frequency '{value}': {e}") from e
    hertz = float(_quantity(value, "frequency").to("Hz").magnitude)
    return 2.0 * math.pi * hertz


def parse_length(value: Union[str, Number]) -> float:
    """Parse a length into metres"""
    return float(_quantity(value, "length").to("m").magnitude)


def parse_temperature(value: Union[str, Number]) -> float:
    """Parse an absolute temperature into kelvin"""
    return float(_quantity(value, "temperature").to("K").magnitude)


PARSERS = {
    "frequency": parse_frequency,
    "length": parse_length,
    "temperature": parse_temperature,
}


def parse_quantity(value: Union[str, Number], kind: str) -> float:
    """Dispatch to the parser for ``kind`` (frequency, length, temperature)"""
    try:
        parser = PARSERS[kind]
    except KeyError:
        raise ConfigError(f"unknown quantity kind '{kind}'")
    return parser(value)
