"""Photon-occupation propagation through attenuating chains.

Every attenuating element at physical temperature T mixes its input
occupation toward the element's thermal occupation:

    n_out = n_in / A + (1 - 1/A) * n_BE(T, f),   A = 10^(dB/10)

applied element by element from the source side to the device side.
The map is affine in the source occupation, so the inverse (inferring a
source from a measured output) is exact: subtract the chain's thermal
floor and multiply by the total linear attenuation.  Temperatures are
Bose-Einstein effective temperatures throughout; every value carries
its evaluation frequency and mixed frequencies are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    FrequencyMismatchError,
    UnreachableTargetError,
    ValidationError,
    ZeroOccupationError,
)
from .units import db_to_linear

# h / k_B in kelvin seconds (exact SI constants)
PLANCK_OVER_BOLTZMANN_K_S = 6.62607015e-34 / 1.380649e-23


@dataclass(frozen=True)
class OccupationState:
    occupation: float
    frequency_hz: float

    def __post_init__(self):
        if self.occupation < 0:
            raise ValidationError("occupation must be >= 0", field="occupation")
        if self.frequency_hz <= 0:
            raise ValidationError("frequency must be > 0", field="frequency")


@dataclass(frozen=True)
class NoiseElement:
    attenuation_db: float
    temperature_k: float
    label: str = ""
    assumed: bool = False

    def __post_init__(self):
        if self.attenuation_db < 0:
            raise ValidationError("attenuation must be >= 0 dB", field=f"element.{self.label}")
        if self.temperature_k <= 0:
            raise ValidationError("temperature must be > 0", field=f"element.{self.label}")


@dataclass(frozen=True)
class NoiseChain:
    elements: tuple[NoiseElement, ...]
    frequency_hz: float
    name: str = ""

    def __post_init__(self):
        if not self.elements:
            raise ValidationError("chain must have at least one element", field="noise_chain")
        if self.frequency_hz <= 0:
            raise ValidationError("frequency must be > 0", field="noise_chain.frequency")

    @property
    def total_attenuation_db(self) -> float:
        return sum(e.attenuation_db for e in self.elements)


def bose_einstein_occupation(temperature_k: float, frequency_hz: float) -> float:
    """Mean thermal photon number n = 1 / (exp(hf/kT) - 1)."""
    if temperature_k <= 0 or frequency_hz <= 0:
        raise ValidationError("temperature and frequency must be > 0", field="bose_einstein")
    x = PLANCK_OVER_BOLTZMANN_K_S * frequency_hz / temperature_k
    if x > 700.0:  # expm1 overflows; n underflows through exp(-x) to the 0 K limit
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def effective_temperature(state: OccupationState) -> float:
    """Exact inverse of bose_einstein_occupation at the state's frequency."""
    if state.occupation == 0.0:
        raise ZeroOccupationError("occupation 0: effective temperature is the 0 K limit")
    return PLANCK_OVER_BOLTZMANN_K_S * state.frequency_hz / math.log1p(1.0 / state.occupation)


def _check_frequency(a_hz: float, b_hz: float) -> None:
    if a_hz != b_hz:
        raise FrequencyMismatchError(
            f"mixed evaluation frequencies: {a_hz:.6g} Hz vs {b_hz:.6g} Hz (no silent conversion)"
        )


def cascade_forward(source: OccupationState, chain: NoiseChain) -> OccupationState:
    """Propagate a source occupation through the chain, source side first."""
    _check_frequency(source.frequency_hz, chain.frequency_hz)
    n = source.occupation
    for el in chain.elements:
        a = db_to_linear(el.attenuation_db)
        n = n / a + (1.0 - 1.0 / a) * bose_einstein_occupation(el.temperature_k, chain.frequency_hz)
    return OccupationState(occupation=n, frequency_hz=chain.frequency_hz)


def chain_floor(chain: NoiseChain) -> OccupationState:
    """Chain output when the source radiates nothing: the thermal floor."""
    n = 0.0
    for el in chain.elements:
        a = db_to_linear(el.attenuation_db)
        n = n / a + (1.0 - 1.0 / a) * bose_einstein_occupation(el.temperature_k, chain.frequency_hz)
    return OccupationState(occupation=n, frequency_hz=chain.frequency_hz)


def infer_source_temperature(target: OccupationState, chain: NoiseChain) -> float:
    """Source effective temperature that reproduces `target` at the chain output.

    Exact affine inversion; cascade_forward of the result round-trips to
    the target occupation at machine precision.
    """
    _check_frequency(target.frequency_hz, chain.frequency_hz)
    floor = chain_floor(chain)
    if target.occupation <= floor.occupation:
        try:
            floor_t = effective_temperature(floor)
        except ZeroOccupationError:
            floor_t = 0.0
        raise UnreachableTargetError(
            f"unreachable: chain thermal floor exceeds target "
            f"(floor occupation {floor.occupation:.6g}, target {target.occupation:.6g})",
            floor_occupation=floor.occupation,
            floor_temperature_k=floor_t,
        )
    n_source = (target.occupation - floor.occupation) * db_to_linear(chain.total_attenuation_db)
    return effective_temperature(OccupationState(n_source, chain.frequency_hz))


def combine_directional_coupler(
    main: OccupationState, coupled: OccupationState, coupling_db: float
) -> OccupationState:
    """Two-port power combination at a directional coupler's output.

    Convention: the coupled port is injected with coupling C = 10^(dB/10),
    so the output occupation is ``n_main * (1 - 1/C) + n_coupled / C``,
    which conserves the power split between the two ports.
    """
    _check_frequency(main.frequency_hz, coupled.frequency_hz)
    if coupling_db < 0:
        raise ValidationError("coupling must be >= 0 dB", field="coupler.coupling")
    c = db_to_linear(coupling_db)
    n = main.occupation * (1.0 - 1.0 / c) + coupled.occupation / c
    return OccupationState(occupation=n, frequency_hz=main.frequency_hz)


def dephasing_interpolator(pairs: list[tuple[float, float]]):
    """Interpolation hook over user-supplied (noise temperature, dephasing time) pairs.

    No calibration data ships with the package; callers provide measured
    pairs and get back a monotone-grid interpolator that refuses to
    extrapolate.
    """
    if len(pairs) < 2:
        raise ValidationError("need at least two calibration pairs", field="dephasing_curve")
    pts = sorted(pairs)
    t_in = np.array([p[0] for p in pts], dtype=float)
    t_phi = np.array([p[1] for p in pts], dtype=float)
    if np.any(np.diff(t_in) <= 0):
        raise ValidationError("noise temperatures must be distinct", field="dephasing_curve")

    def interp(temperature_k: float) -> float:
        if not (t_in[0] <= temperature_k <= t_in[-1]):
            raise ValidationError(
                f"temperature {temperature_k:.4g} K outside calibrated range "
                f"[{t_in[0]:.4g}, {t_in[-1]:.4g}] K",
                field="dephasing_curve",
            )
        return float(np.interp(temperature_k, t_in, t_phi))

    return interp
