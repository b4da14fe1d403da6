"""Haken-Strobl dynamics with trapping and recombination.

The master equation propagated here is

    drho/dt = -i (H_eff rho - rho H_eff^dag)
              + gamma_phi * sum_m (A_m rho A_m - 1/2 {A_m, rho})

with A_m = |m><m| and H_eff from model.effective_hamiltonian. Because the
A_m are projectors, the dephasing dissipator reduces to

    gamma_phi * (diag(rho) - rho)

which leaves populations untouched and damps every coherence at gamma_phi.

Two independent computational routes are provided. propagate() integrates
the equation in time with a classic fixed-order RK4 stepper under
step-doubling error control. integrated_state() never touches time at all:
it writes the equation as vec(drho/dt) = L vec(rho) with a column-stacked
Liouvillian and obtains S1 = int_0^inf rho dt and S2 = int_0^inf t rho dt
by solving linear systems (L S1 = -rho0, L S2 = -S1), which is exact up to
linear-algebra roundoff. The two routes cross-check each other in the test
suite.

vec() convention: columns are stacked, so vec(rho)[col * N + row] =
rho[row, col] and vec(A rho B) = (B^T kron A) vec(rho). Mixing this up
transposes the Liouvillian, so it is asserted by a property test against
master_equation_rhs.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve, get_lapack_funcs

from .errors import (ConfigurationError, NonConvergentIntegralError,
                     StiffnessError)
from .model import effective_hamiltonian

MIN_STEP_PS = 1e-9


def _vec(mat):
    """Column-stacked vectorization."""
    return mat.flatten(order="F")


def _unvec(v, n):
    return v.reshape((n, n), order="F")


def _rhs_kernel(heff, gamma_phi, rho):
    """drho/dt for precomputed H_eff. Written so exact Hermiticity of the
    result is preserved when rho is Hermitian: -i(M - M^dag) with
    M = H_eff rho is manifestly anti-symmetrized."""
    M = heff @ rho
    out = -1j * (M - M.conj().T)
    if gamma_phi != 0.0:
        out -= gamma_phi * rho
        d = np.einsum("ii->i", out)
        d += gamma_phi * np.einsum("ii->i", rho)
    return out


def master_equation_rhs(sys, rho):
    """Right-hand side drho/dt (ps^-1) for a density matrix rho."""
    rho = np.asarray(rho, dtype=complex)
    n = sys.n_sites
    if rho.shape != (n, n):
        raise ConfigurationError(
            "density matrix has shape %s, system has %d sites" % (rho.shape, n))
    return _rhs_kernel(effective_hamiltonian(sys), sys.dephasing_rate, rho)


@dataclass(frozen=True, eq=False)
class Liouvillian:
    """Dense superoperator L with vec(drho/dt) = L vec(rho)."""

    matrix: np.ndarray
    n_sites: int

    def apply(self, rho):
        n = self.n_sites
        return _unvec(self.matrix @ _vec(np.asarray(rho, dtype=complex)), n)


def _dephasing_diagonal(n):
    """Diagonal of the dephasing superoperator sum_m E_mm kron E_mm - I.

    It is -1 on coherence indices and 0 on population indices, so the full
    dephasing contribution to L is gamma_phi times this diagonal.
    """
    d = -np.ones(n * n)
    d[(n + 1) * np.arange(n)] = 0.0
    return d


def _coherent_liouvillian(heff):
    """Superoperator for -i(H_eff rho - rho H_eff^dag) alone."""
    n = heff.shape[0]
    eye = np.eye(n)
    return -1j * (np.kron(eye, heff) - np.kron(heff.conj(), eye))


def build_liouvillian(sys):
    """Assemble the full N^2 x N^2 Liouvillian for a system."""
    heff = effective_hamiltonian(sys)
    L = _coherent_liouvillian(heff)
    if sys.dephasing_rate != 0.0:
        idx = np.arange(sys.n_sites * sys.n_sites)
        L[idx, idx] += sys.dephasing_rate * _dephasing_diagonal(sys.n_sites)
    return Liouvillian(matrix=L, n_sites=sys.n_sites)


# ---------------------------------------------------------------------------
# Time-domain propagation


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled time evolution.

    times : (T,) array, ps, starting at 0
    states : (T, N, N) complex array of density matrices
    loss_integral : (T,) array, the accumulated bleed
        int_0^t (2 Gamma Tr rho + 2 sum_m kappa_m rho_mm) dt',
        integrated with the same RK4 stages as the state itself, so
        trace(rho(t)) + loss_integral(t) stays equal to trace(rho(0))
        to integrator accuracy.
    """

    times: np.ndarray
    states: np.ndarray
    loss_integral: np.ndarray = field(default=None)

    def populations(self):
        return np.real(np.einsum("tii->ti", self.states))

    def trace(self):
        return np.real(np.einsum("tii->t", self.states))

    def coherence_l1(self):
        """Sum of |rho_mn| over m != n at each sample."""
        absval = np.abs(self.states)
        total = absval.sum(axis=(1, 2))
        diag = np.einsum("tii->t", absval)
        return total - diag

    def write_csv(self, f):
        """Write `t_ps,p_1,...,p_N,trace,coherence_l1` rows."""
        n = self.states.shape[1]
        pops = self.populations()
        tr = self.trace()
        coh = self.coherence_l1()
        header = "t_ps," + ",".join("p_%d" % (m + 1) for m in range(n))
        header += ",trace,coherence_l1"
        f.write(header + "\n")
        for i, t in enumerate(self.times):
            row = [repr(float(t))]
            row += [repr(float(p)) for p in pops[i]]
            row.append(repr(float(tr[i])))
            row.append(repr(float(coh[i])))
            f.write(",".join(row) + "\n")


def _bleed_rate(rho, gamma, kappa):
    """Instantaneous probability outflow 2 Gamma Tr rho + 2 sum kappa_m rho_mm."""
    diag = np.real(np.einsum("ii->i", rho))
    return 2.0 * gamma * diag.sum() + 2.0 * float(kappa @ diag)


def _rk4_step(heff, gamma_phi, gamma, kappa, rho, b, h):
    """One classic RK4 step of size h on the pair (rho, bleed integral)."""
    k1 = _rhs_kernel(heff, gamma_phi, rho)
    c1 = _bleed_rate(rho, gamma, kappa)
    r2 = rho + (0.5 * h) * k1
    k2 = _rhs_kernel(heff, gamma_phi, r2)
    c2 = _bleed_rate(r2, gamma, kappa)
    r3 = rho + (0.5 * h) * k2
    k3 = _rhs_kernel(heff, gamma_phi, r3)
    c3 = _bleed_rate(r3, gamma, kappa)
    r4 = rho + h * k3
    k4 = _rhs_kernel(heff, gamma_phi, r4)
    c4 = _bleed_rate(r4, gamma, kappa)
    rho_new = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    b_new = b + (h / 6.0) * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
    return rho_new, b_new


def propagate(sys, rho0, t_final, sample_times=None, rtol=1e-9,
              min_step=MIN_STEP_PS):
    """Integrate the master equation from t=0 to t_final.

    Error control is by step doubling: each accepted step compares one RK4
    step of size h against two of size h/2, with the max-abs difference
    measured relative to the state scale against rtol. The two-half-step
    result is kept. If the controller pushes h below min_step a
    StiffnessError is raised naming the failing time.

    sample_times selects the output grid (values in [0, t_final]; 0 is
    always included). When omitted, every accepted step is recorded.
    """
    t_final = float(t_final)
    if not t_final > 0.0:
        raise ConfigurationError("t_final must be positive, got %r" % t_final)
    n = sys.n_sites
    rho = np.array(rho0, dtype=complex)
    if rho.shape != (n, n):
        raise ConfigurationError(
            "initial state has shape %s, system has %d sites" % (rho.shape, n))

    heff = effective_hamiltonian(sys)
    gamma_phi = sys.dephasing_rate
    gamma = sys.recomb_rate
    kappa = sys.trap_rates

    if sample_times is not None:
        samples = np.unique(np.asarray(sample_times, dtype=float))
        if samples.size and (samples[0] < 0.0 or samples[-1] > t_final * (1 + 1e-12)):
            raise ConfigurationError("sample times must lie in [0, t_final]")
        if samples.size == 0 or samples[0] > 0.0:
            samples = np.concatenate([[0.0], samples])
    else:
        samples = None

    # Initial step from the fastest scale in the generator.
    scale = np.max(np.abs(heff)) * n + gamma_phi + 1e-12
    h = min(0.1 / scale, t_final / 10.0)

    times = [0.0]
    states = [rho.copy()]
    bleeds = [0.0]
    t = 0.0
    b = 0.0
    next_sample = 1 if samples is not None else None

    while t < t_final * (1.0 - 1e-15):
        # Never step past t_final or the next requested sample.
        target = t_final
        if samples is not None and next_sample < samples.size:
            target = samples[next_sample]
        h_try = min(h, target - t)
        if h_try <= 0.0:
            # Degenerate duplicate sample time; emit and move on.
            next_sample += 1
            continue

        while True:
            full, b_full = _rk4_step(heff, gamma_phi, gamma, kappa, rho, b, h_try)
            half, b_half = _rk4_step(heff, gamma_phi, gamma, kappa, rho, b,
                                     0.5 * h_try)
            two, b_two = _rk4_step(heff, gamma_phi, gamma, kappa, half, b_half,
                                   0.5 * h_try)
            scale_now = max(np.max(np.abs(two)), 1e-300)
            err = np.max(np.abs(full - two)) / scale_now
            if err <= rtol:
                break
            h_try *= max(0.2, 0.9 * (rtol / err) ** 0.2)
            if h_try < min_step:
                raise StiffnessError(
                    "step size underflow (%.3e ps < %.3e ps) at t = %.6f ps; "
                    "the system is too stiff for the requested tolerance"
                    % (h_try, min_step, t), t=t)

        t += h_try
        rho = two
        b = b_two
        if err > 0.0:
            h = h_try * min(5.0, 0.9 * (rtol / err) ** 0.2)
        else:
            h = h_try * 5.0

        if samples is None:
            times.append(t)
            states.append(rho.copy())
            bleeds.append(b)
        elif next_sample < samples.size and t >= samples[next_sample] * (1 - 1e-15):
            times.append(samples[next_sample])
            states.append(rho.copy())
            bleeds.append(b)
            next_sample += 1

    return Trajectory(times=np.array(times), states=np.array(states),
                      loss_integral=np.array(bleeds))


def default_horizon(sys, cap=1000.0):
    """Default trajectory length: ten lifetimes of the slowest decay channel,
    capped. Uses 10 / (2 Gamma + min active kappa); falls back to the cap when
    there is no decay at all."""
    active = sys.trap_rates[sys.trap_rates > 0.0]
    rate = 2.0 * sys.recomb_rate + (active.min() if active.size else 0.0)
    if rate <= 0.0:
        return float(cap)
    return float(min(10.0 / rate, cap))


# ---------------------------------------------------------------------------
# Algebraic route: infinite-horizon moments by linear solves

_COND_LIMIT = 1e12


def _lu_with_condition(L):
    """LU-factor L and estimate its 1-norm condition number."""
    anorm = np.linalg.norm(L, 1)
    lu, piv = lu_factor(L)
    gecon = get_lapack_funcs("gecon", (lu,))
    rcond, info = gecon(lu, anorm)
    if info != 0:
        raise NonConvergentIntegralError(
            "condition estimate failed (LAPACK info=%d)" % info)
    return (lu, piv), rcond


def integrated_state(sys, rho0):
    """First two time moments of the evolution, S1 = int rho dt and
    S2 = int t rho dt, via the Liouvillian inverse.

    S1 solves L vec(S1) = -vec(rho0); S2 solves L vec(S2) = -vec(S1)
    (integration by parts moves the factor of t into a second solve).
    Both are computed from one dense LU factorization with partial
    pivoting. A condition estimate above 1e12 aborts: the integrals are
    then dominated by a near-null mode, which means some population has
    no decay channel to reach.
    """
    n = sys.n_sites
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (n, n):
        raise ConfigurationError(
            "initial state has shape %s, system has %d sites" % (rho0.shape, n))
    if sys.recomb_rate == 0.0 and not np.any(sys.trap_rates > 0.0):
        raise NonConvergentIntegralError(
            "no decay channel anywhere (all kappa_m = 0 and Gamma = 0): "
            "int_0^inf rho dt diverges")

    L = build_liouvillian(sys).matrix
    try:
        factors, rcond = _lu_with_condition(L)
    except np.linalg.LinAlgError as exc:
        raise NonConvergentIntegralError(
            "Liouvillian is singular: likely some initial population cannot "
            "reach a decay channel") from exc
    if rcond == 0.0 or 1.0 / rcond > _COND_LIMIT:
        raise NonConvergentIntegralError(
            "Liouvillian condition estimate %.3e exceeds 1e12: the integrals "
            "do not converge reliably; likely cause is a site (or subspace) "
            "with no reachable decay channel"
            % (np.inf if rcond == 0.0 else 1.0 / rcond))
    s1 = lu_solve(factors, -_vec(rho0))
    s2 = lu_solve(factors, -s1)
    return _unvec(s1, n), _unvec(s2, n)
