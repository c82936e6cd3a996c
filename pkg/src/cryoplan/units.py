"""Strict parsing and rendering of unit-suffixed quantities.

Scenario and data files never carry bare numbers for physical quantities;
every value is written as ``<number> <unit>`` and parsed against the
dimension expected by the field, so a duty cycle can never be silently
read as a power.
"""

from __future__ import annotations

import math

from .errors import ParseError

# unit -> (dimension, factor to SI base)
_UNITS: dict[str, tuple[str, float]] = {
    "K": ("temperature", 1.0),
    "mK": ("temperature", 1e-3),
    "uK": ("temperature", 1e-6),
    "W": ("power", 1.0),
    "mW": ("power", 1e-3),
    "uW": ("power", 1e-6),
    "nW": ("power", 1e-9),
    "pW": ("power", 1e-12),
    "dB": ("decibel", 1.0),
    "dBm": ("power_dbm", 1.0),
    "m": ("length", 1.0),
    "cm": ("length", 1e-2),
    "mm": ("length", 1e-3),
    "m2": ("area", 1.0),
    "mm2": ("area", 1e-6),
    "um2": ("area", 1e-12),
    "Hz": ("frequency", 1.0),
    "kHz": ("frequency", 1e3),
    "MHz": ("frequency", 1e6),
    "GHz": ("frequency", 1e9),
    "s": ("time", 1.0),
    "ms": ("time", 1e-3),
    "us": ("time", 1e-6),
    "h": ("time", 3600.0),
    "%": ("fraction", 1e-2),
    "frac": ("fraction", 1.0),
    "mol/s": ("molar_flow", 1.0),
    "mmol/s": ("molar_flow", 1e-3),
    "umol/s": ("molar_flow", 1e-6),
    "J/mol": ("molar_heat", 1.0),
}

# aliases people actually type
_ALIASES = {"µW": "uW", "µK": "uK", "µs": "us", "µmol/s": "umol/s", "um": "mm2_invalid"}


def parse_quantity(text: str, dimension: str, *, field: str = "", line: int = 0, column: int = 0) -> float:
    """Parse ``"-63 dBm"`` / ``"50 uW"`` / ``"33 %"`` into SI base units.

    dBm values are converted to watts when ``dimension == "power"`` is not
    requested; callers asking for ``power_dbm`` get the raw dBm number.
    Raises ParseError with position info on malformed input or a unit of
    the wrong dimension.
    """
    parts = text.strip().split()
    if len(parts) == 1:
        # allow "33%" without a space
        for u in sorted(_UNITS, key=len, reverse=True):
            if parts[0].endswith(u) and len(parts[0]) > len(u):
                parts = [parts[0][: -len(u)], u]
                break
    if len(parts) != 2:
        raise ParseError(
            f"expected '<number> <unit>' for {field or dimension}, got {text!r}",
            line=line, column=column,
        )
    num_s, unit = parts
    unit = _ALIASES.get(unit, unit)
    try:
        value = float(num_s)
    except ValueError:
        raise ParseError(f"bad number {num_s!r} in {field or dimension}", line=line, column=column) from None
    if unit not in _UNITS:
        raise ParseError(f"unknown unit {unit!r}", line=line, column=column)
    dim, factor = _UNITS[unit]
    if dim == "power_dbm" and dimension == "power":
        return dbm_to_watts(value)
    if dim != dimension:
        raise ParseError(
            f"{field or 'value'}: unit {unit!r} has dimension {dim}, expected {dimension}",
            line=line, column=column,
        )
    return value * factor


def dbm_to_watts(dbm: float) -> float:
    return 1e-3 * 10.0 ** (dbm / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise ValueError("dBm undefined for non-positive power")
    return 10.0 * math.log10(watts / 1e-3)


def db_to_linear(db: float) -> float:
    """Attenuation in dB -> linear power ratio (>= 1 for db >= 0)."""
    return 10.0 ** (db / 10.0)


def format_si(value: float, unit: str, sig: int = 4) -> str:
    """Render with a fixed unit at `sig` significant digits (sig=0: full repr)."""
    if sig <= 0:
        return f"{value!r} {unit}"
    if value == 0:
        return f"0 {unit}"
    return f"{_round_sig(value, sig):g} {unit}"


def _round_sig(value: float, sig: int) -> float:
    if value == 0 or not math.isfinite(value):
        return value
    return round(value, -int(math.floor(math.log10(abs(value)))) + (sig - 1))
