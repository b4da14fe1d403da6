"""Closed-form two-site system.

The two-site Hamiltonian is taken in the symmetric form

    H = (eps/2) sigma_z + (V/2) sigma_x

so the full energy mismatch between the sites is eps and the gap is
hbar * Omega = sqrt(eps^2 + V^2) (the Larmor frequency of the equivalent
spin). Note the general N-site model builds H from site energies and
couplings literally, without the factors of 1/2; to_transport_system()
applies the halved convention explicitly so the formulas here are exact
for the system it returns.

Starting from site 1 with no dephasing, direct diagonalization gives

    P2(t) = (V^2 / (eps^2 + V^2)) sin^2(Omega t / 2)

with maximum sin^2(theta), theta = arcsin(V / hbar Omega). The
random-walk picture of dephased transport gives the order-of-magnitude
diffusion time (pi / theta)^2 / gamma_phi for reaching the equilibrium
populations, which are 1/2 per site for any eps as long as V != 0: pure
dephasing plus coherent mixing drives the populations to the uniform
fixed point regardless of bias.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .model import TransportSystem
from .units import cm1_to_angular


@dataclass(frozen=True)
class TwoLevelParams:
    """Energy mismatch eps and coupling V in cm^-1, dephasing in ps^-1."""

    energy_mismatch_cm1: float
    coupling_cm1: float
    dephasing_rate: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.energy_mismatch_cm1)
                and math.isfinite(self.coupling_cm1)):
            raise ConfigurationError("eps and V must be finite")
        if self.dephasing_rate < 0.0:
            raise ConfigurationError("dephasing rate must be >= 0")


def larmor_frequency(p):
    """Omega = sqrt(eps^2 + V^2) / hbar in angular ps^-1."""
    return cm1_to_angular(math.hypot(p.energy_mismatch_cm1, p.coupling_cm1))


def tilt_angle(p):
    """theta = arcsin(V / hbar Omega), the mixing angle of the eigenstates.

    Returns 0 for V = 0 (uncoupled sites).
    """
    hyp = math.hypot(p.energy_mismatch_cm1, p.coupling_cm1)
    if hyp == 0.0:
        raise ConfigurationError("eps = V = 0 leaves the angle undefined")
    return math.asin(abs(p.coupling_cm1) / hyp)


def coherent_population_2(p, t):
    """P2(t) for gamma_phi = 0, starting in site 1. t in ps (scalar or array)."""
    if p.dephasing_rate != 0.0:
        raise ConfigurationError(
            "coherent_population_2 is the gamma_phi = 0 closed form; "
            "got dephasing_rate = %g" % p.dephasing_rate)
    eps2 = p.energy_mismatch_cm1 ** 2
    v2 = p.coupling_cm1 ** 2
    if eps2 + v2 == 0.0:
        return np.zeros_like(np.asarray(t, dtype=float)) + 0.0
    omega = larmor_frequency(p)
    amp = v2 / (eps2 + v2)
    return amp * np.sin(0.5 * omega * np.asarray(t, dtype=float)) ** 2


def diffusion_time_estimate(p):
    """Order-of-magnitude time to spread the populations under dephasing,
    (pi / theta)^2 / gamma_phi. Infinite for V = 0 (no transport channel)."""
    if p.dephasing_rate <= 0.0:
        raise ConfigurationError(
            "diffusion time is defined for gamma_phi > 0 only")
    if p.coupling_cm1 == 0.0:
        return math.inf
    theta = tilt_angle(p)
    return (math.pi / theta) ** 2 / p.dephasing_rate


def equilibrium_population_2(p):
    """Stationary population of site 2 under dephasing: exactly 1/2.

    The pure-dephasing master equation without traps has the maximally
    mixed state as its unique fixed point whenever the sites are coupled.
    """
    if p.coupling_cm1 == 0.0:
        raise ConfigurationError(
            "V = 0: dephasing alone moves no population, site populations "
            "are conserved and never equilibrate")
    if p.dephasing_rate <= 0.0:
        raise ConfigurationError(
            "equilibrium population is defined for gamma_phi > 0")
    return 0.5


def to_transport_system(p, trap_rate_2=0.0, recomb_rate=0.0):
    """TransportSystem with site energies +-eps/2 and coupling V/2, so the
    closed forms above apply exactly. Optional trap on site 2."""
    e = 0.5 * p.energy_mismatch_cm1
    v = 0.5 * p.coupling_cm1
    return TransportSystem(
        n_sites=2,
        site_energies=[e, -e],
        couplings=[[0.0, v], [v, 0.0]],
        trap_rates=[0.0, float(trap_rate_2)],
        recomb_rate=float(recomb_rate),
        dephasing_rate=p.dephasing_rate,
    )
