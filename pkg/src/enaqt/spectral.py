"""Ohmic bath model: temperature to pure-dephasing rate.

The bath is characterized by an Ohmic spectral density with exponential
cutoff,

    J(omega) = (E_R / omega_c) * omega * exp(-omega / omega_c),

normalized so that E_R is the reorganization energy and the maximum sits
at omega = omega_c. In the high-temperature (Markovian) limit the
pure-dephasing rate is set by the zero-frequency slope of J,

    gamma_phi(T) = 2 pi * kT * dJ/domega|_0 = 2 pi * kT * E_R / omega_c,

linear in T. With kT in cm^-1 the rate comes out in cm^-1; the engine
needs it in angular ps^-1, so both are returned.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .units import BOLTZMANN_CM1_PER_K, cm1_to_angular


@dataclass(frozen=True)
class OhmicBath:
    reorganization_energy_cm1: float = 35.0
    cutoff_cm1: float = 150.0

    def __post_init__(self):
        if not self.reorganization_energy_cm1 > 0.0:
            raise ConfigurationError("reorganization energy must be > 0")
        if not self.cutoff_cm1 > 0.0:
            raise ConfigurationError("cutoff frequency must be > 0")


def spectral_density(bath, omega_cm1):
    """J(omega), dimensionless, for omega in cm^-1 (scalar or array)."""
    omega = np.asarray(omega_cm1, dtype=float)
    if np.any(omega < 0.0):
        raise ConfigurationError("spectral density is defined for omega >= 0")
    out = (bath.reorganization_energy_cm1 / bath.cutoff_cm1) * omega \
        * np.exp(-omega / bath.cutoff_cm1)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class DephasingRate:
    """gamma_phi expressed in both unit systems."""

    gamma_cm1: float
    gamma_ps: float


def dephasing_rate(bath, temperature_k):
    """gamma_phi(T) = 2 pi * (kT in cm^-1) * E_R / omega_c.

    Returns the rate in cm^-1 together with its angular ps^-1 equivalent.
    """
    if not temperature_k > 0.0:
        raise ConfigurationError("temperature must be > 0 K")
    kt_cm1 = BOLTZMANN_CM1_PER_K * temperature_k
    gamma_cm1 = 2.0 * math.pi * kt_cm1 * bath.reorganization_energy_cm1 \
        / bath.cutoff_cm1
    return DephasingRate(gamma_cm1=gamma_cm1, gamma_ps=cm1_to_angular(gamma_cm1))
