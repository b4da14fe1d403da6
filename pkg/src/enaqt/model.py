"""Transport problem definition.

A TransportSystem holds the tight-binding Hamiltonian (site energies and
couplings, in cm^-1) together with the dissipative rates (trapping kappa_m,
recombination Gamma, pure dephasing gamma_phi, all in ps^-1). The system
Hamiltonian is

    H_S = sum_m eps_m |m><m| + sum_{m<n} V_mn (|m><n| + |n><m|)

and the trapping/recombination channels enter as anti-Hermitian diagonal
terms of the effective Hamiltonian,

    H_eff = H_S - i Gamma sum_m |m><m| - i sum_m kappa_m |m><m|

(hbar = 1, angular ps^-1 units). A site population subject only to these
terms decays as exp(-2 (Gamma + kappa_m) t).

Site indices are 1-based in every user-facing interface, matching the usual
chromophore numbering; internal arrays are 0-based.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .units import cm1_to_angular


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TransportSystem:
    """Immutable description of a transport problem.

    Fields
    ------
    n_sites : int
    site_energies : (N,) array, cm^-1
    couplings : (N, N) symmetric array with zero diagonal, cm^-1
    trap_rates : (N,) array of kappa_m >= 0, ps^-1
    recomb_rate : Gamma >= 0, ps^-1
    dephasing_rate : gamma_phi >= 0, ps^-1
    """

    n_sites: int
    site_energies: np.ndarray
    couplings: np.ndarray
    trap_rates: np.ndarray
    recomb_rate: float
    dephasing_rate: float

    def __post_init__(self):
        n = int(self.n_sites)
        if n < 1:
            raise ConfigurationError("n_sites must be >= 1, got %r" % (self.n_sites,))
        eps = _readonly(self.site_energies)
        V = _readonly(self.couplings)
        kap = _readonly(self.trap_rates)
        if eps.shape != (n,):
            raise ConfigurationError(
                "site_energies has shape %s, expected (%d,)" % (eps.shape, n))
        if V.shape != (n, n):
            raise ConfigurationError(
                "couplings has shape %s, expected (%d, %d)" % (V.shape, n, n))
        if kap.shape != (n,):
            raise ConfigurationError(
                "trap_rates has shape %s, expected (%d,)" % (kap.shape, n))
        if not (np.all(np.isfinite(eps)) and np.all(np.isfinite(V))
                and np.all(np.isfinite(kap))):
            raise ConfigurationError("non-finite entries in system arrays")
        if np.any(np.diag(V) != 0.0):
            raise ConfigurationError("couplings must have a zero diagonal")
        if np.any(V != V.T):
            raise ConfigurationError("couplings must be symmetric")
        if np.any(kap < 0.0):
            raise ConfigurationError("trap rates must be non-negative")
        gam = float(self.recomb_rate)
        dep = float(self.dephasing_rate)
        if not np.isfinite(gam) or gam < 0.0:
            raise ConfigurationError("recomb_rate must be finite and >= 0")
        if not np.isfinite(dep) or dep < 0.0:
            raise ConfigurationError("dephasing_rate must be finite and >= 0")
        object.__setattr__(self, "n_sites", n)
        object.__setattr__(self, "site_energies", eps)
        object.__setattr__(self, "couplings", V)
        object.__setattr__(self, "trap_rates", kap)
        object.__setattr__(self, "recomb_rate", gam)
        object.__setattr__(self, "dephasing_rate", dep)

    def with_dephasing(self, gamma_phi):
        """Copy of this system with a different pure-dephasing rate."""
        return TransportSystem(self.n_sites, self.site_energies, self.couplings,
                               self.trap_rates, self.recomb_rate, float(gamma_phi))

    def with_rates(self, trap_rates=None, recomb_rate=None, dephasing_rate=None):
        """Copy with any of the dissipative rates replaced."""
        return TransportSystem(
            self.n_sites,
            self.site_energies,
            self.couplings,
            self.trap_rates if trap_rates is None else trap_rates,
            self.recomb_rate if recomb_rate is None else recomb_rate,
            self.dephasing_rate if dephasing_rate is None else dephasing_rate,
        )

    def hamiltonian_angular(self):
        """Hermitian system Hamiltonian in angular ps^-1 units."""
        return cm1_to_angular(np.diag(self.site_energies) + self.couplings)


def effective_hamiltonian(sys):
    """Non-Hermitian effective Hamiltonian in angular ps^-1 units (hbar = 1).

    Hermitian part is the converted tight-binding Hamiltonian; the
    anti-Hermitian part is diagonal with entries -(Gamma + kappa_m), so that
    an isolated site population decays at rate 2(Gamma + kappa_m).
    """
    H = sys.hamiltonian_angular().astype(complex)
    H -= 1j * np.diag(sys.recomb_rate + sys.trap_rates)
    return H


VALID_STATE_KINDS = ("site", "mixture", "coherent")


@dataclass(frozen=True)
class InitialState:
    """Initial excitation: a single site, a uniform statistical mixture over
    a site set, or a uniform coherent superposition over a site set.

    Sites use 1-based labels.
    """

    kind: str
    sites: tuple

    def __post_init__(self):
        if self.kind not in VALID_STATE_KINDS:
            raise ConfigurationError(
                "initial state kind must be one of %s, got %r"
                % (VALID_STATE_KINDS, self.kind))
        sites = tuple(int(s) for s in self.sites)
        if len(sites) == 0:
            raise ConfigurationError("initial state needs a non-empty site set")
        if len(set(sites)) != len(sites):
            raise ConfigurationError("initial state sites must be distinct")
        if self.kind == "site" and len(sites) != 1:
            raise ConfigurationError("kind 'site' takes exactly one site")
        object.__setattr__(self, "sites", sites)


def initial_density_matrix(state, n_sites):
    """Build the N x N density matrix for an InitialState. Trace is exactly 1."""
    n = int(n_sites)
    for s in state.sites:
        if not 1 <= s <= n:
            raise ConfigurationError(
                "initial site %d outside the valid range 1..%d" % (s, n))
    idx = [s - 1 for s in state.sites]
    rho = np.zeros((n, n), dtype=complex)
    if state.kind in ("site", "mixture"):
        rho[idx, idx] = 1.0 / len(idx)
    else:
        psi = np.zeros(n, dtype=complex)
        psi[idx] = 1.0 / np.sqrt(len(idx))
        rho = np.outer(psi, psi.conj())
    return rho


# ---------------------------------------------------------------------------
# Serialization. A system is stored as a JSON document with explicit unit
# tags so a file can't silently be read in the wrong convention.

_UNIT_TAGS = {
    "site_energies": "cm-1",
    "couplings": "cm-1",
    "trap_rates": "ps-1",
    "recomb_rate": "ps-1",
    "dephasing_rate": "ps-1",
}


def system_to_document(sys):
    """Represent a TransportSystem as a plain dict suitable for JSON."""
    doc = {"n_sites": sys.n_sites}
    values = {
        "site_energies": sys.site_energies.tolist(),
        "couplings": sys.couplings.tolist(),
        "trap_rates": sys.trap_rates.tolist(),
        "recomb_rate": sys.recomb_rate,
        "dephasing_rate": sys.dephasing_rate,
    }
    for key, unit in _UNIT_TAGS.items():
        doc[key] = {"unit": unit, "value": values[key]}
    return doc


def system_from_document(doc):
    """Inverse of system_to_document. Unknown keys and wrong unit tags are
    rejected rather than ignored."""
    if not isinstance(doc, dict):
        raise ConfigurationError("system document must be a mapping")
    expected = {"n_sites"} | set(_UNIT_TAGS)
    unknown = set(doc) - expected
    if unknown:
        raise ConfigurationError("unknown keys in system document: %s"
                                 % ", ".join(sorted(unknown)))
    missing = expected - set(doc)
    if missing:
        raise ConfigurationError("missing keys in system document: %s"
                                 % ", ".join(sorted(missing)))
    fields = {"n_sites": doc["n_sites"]}
    for key, unit in _UNIT_TAGS.items():
        entry = doc[key]
        if not isinstance(entry, dict) or set(entry) != {"unit", "value"}:
            raise ConfigurationError(
                "field %r must be an object with 'unit' and 'value'" % key)
        if entry["unit"] != unit:
            raise ConfigurationError(
                "field %r has unit %r, expected %r" % (key, entry["unit"], unit))
        fields[key] = entry["value"]
    return TransportSystem(**fields)


def save_system(sys, path):
    with open(path, "w") as f:
        json.dump(system_to_document(sys), f, indent=2)
        f.write("\n")


def load_system(path):
    try:
        f = open(path)
    except OSError as exc:
        raise ConfigurationError(
            "cannot read system file %s: %s" % (path, exc)) from exc
    with f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(
                "could not parse system file %s: line %d column %d: %s"
                % (path, exc.lineno, exc.colno, exc.msg)) from exc
    return system_from_document(doc)
