"""Command-line interface.

Subcommands:
    fmo-sweep            efficiency/transfer-time vs dephasing for FMO
    tree-ensemble        disorder ensembles on binary trees
    two-level            closed-form checks and the biased-dimer sweep
    propagate            trajectory export for any serialized system
    temperature-to-rate  Ohmic-bath dephasing rate at a temperature

Every run writes CSV data plus a key-value manifest echoing the full
configuration, the physical constants, data checksums, and the wall time,
so any output file can be reproduced exactly from its manifest. Output
files are written atomically (temp file + rename): a failing run leaves no
partial outputs behind.
"""

import argparse
import hashlib
import os
import sys as _sys
import time

import numpy as np

from . import __version__
from .dynamics import default_horizon, propagate
from .errors import ConfigurationError, DataIntegrityError, EnaqtError
from .fmo import (data_checksum, dephasing_sweep, load_fmo_model,
                  trap_dephasing_surface, write_surface_csv, write_sweep_csv)
from .model import InitialState, initial_density_matrix, load_system
from .observables import transport_result
from .spectral import OhmicBath, dephasing_rate
from .sweep import SweepPlan, run_sweep
from .tree import (DEFAULT_COUPLING_CM1, TreeSpec, disorder_ensemble)
from .twolevel import (TwoLevelParams, coherent_population_2, larmor_frequency,
                       to_transport_system)
from .units import BOLTZMANN_CM1_PER_K, CM1_TO_PS_ANGULAR


def _atomic_write(path, writer):
    """Write a text file via a temp sibling and atomic rename."""
    tmp = path + ".tmp"
    try:
        with open(tmp, "w") as f:
            writer(f)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256_file(path):
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()


def _write_manifest(out_dir, name, command, config, extras, outputs, wall_s):
    """Key-value manifest: config echo, constants, checksums, wall time."""
    lines = ["command = %s" % command, "version = %s" % __version__]
    for key in sorted(config):
        lines.append("config.%s = %r" % (key, config[key]))
    lines.append("constant.cm1_to_ps_angular = %r" % CM1_TO_PS_ANGULAR)
    lines.append("constant.boltzmann_cm1_per_k = %r" % BOLTZMANN_CM1_PER_K)
    for key in sorted(extras):
        value = extras[key]
        lines.append("%s = %s" % (key, value if isinstance(value, str)
                                  else repr(value)))
    for path in outputs:
        lines.append("output.%s.sha256 = %s"
                     % (os.path.basename(path), _sha256_file(path)))
    lines.append("wall_time_s = %.3f" % wall_s)
    path = os.path.join(out_dir, name)
    _atomic_write(path, lambda f: f.write("\n".join(lines) + "\n"))
    return path


def _config_dict(args):
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    return cfg


def _ensure_out_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise ConfigurationError("cannot create output directory %s: %s"
                                 % (path, exc)) from exc
    if not os.access(path, os.W_OK):
        raise ConfigurationError("output directory %s is not writable" % path)


# ---------------------------------------------------------------------------
# fmo-sweep


def cmd_fmo_sweep(args):
    t0 = time.perf_counter()
    _ensure_out_dir(args.out_dir)
    model = load_fmo_model(data_path=args.data_file, trap_rate=args.kappa3,
                           recomb_rate=args.recomb_rate)
    if args.gamma_points < 2 or args.gamma_min <= 0 or args.gamma_max <= args.gamma_min:
        raise ConfigurationError("need gamma-max > gamma-min > 0 and >= 2 points")
    grid = np.logspace(np.log10(args.gamma_min), np.log10(args.gamma_max),
                       args.gamma_points)
    results = dephasing_sweep(model, grid, width=args.width)
    outputs = []
    sweep_path = os.path.join(args.out_dir, "fmo_sweep.csv")
    _atomic_write(sweep_path, lambda f: write_sweep_csv(results, f))
    outputs.append(sweep_path)

    if args.surface:
        kgrid = np.logspace(np.log10(args.surface_kappa_min),
                            np.log10(args.surface_kappa_max),
                            args.surface_kappa_points)
        gammas, kappas, tau = trap_dephasing_surface(model, grid, kgrid,
                                                     width=args.width)
        surf_path = os.path.join(args.out_dir, "fmo_surface.csv")
        _atomic_write(surf_path,
                      lambda f: write_surface_csv(gammas, kappas, tau, f))
        outputs.append(surf_path)

    extras = {"data.fmo.sha256": data_checksum(args.data_file)}
    rate = dephasing_rate(OhmicBath(), args.annotate_temperature)
    extras["annotation.temperature_k"] = args.annotate_temperature
    extras["annotation.gamma_phi_cm1"] = rate.gamma_cm1
    extras["annotation.gamma_phi_ps"] = rate.gamma_ps
    etas = [r.efficiency for _, r in results]
    extras["summary.eta_max"] = max(etas)
    extras["summary.eta_first"] = etas[0]
    _write_manifest(args.out_dir, "fmo_sweep_manifest.txt", "fmo-sweep",
                    _config_dict(args), extras, outputs,
                    time.perf_counter() - t0)
    print("wrote %s" % ", ".join(outputs))
    return 0


# ---------------------------------------------------------------------------
# tree-ensemble


def _parse_delta_grid(text):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError(
                "delta grid %r: expected lo:hi:n or a comma list" % text)
        lo, hi, num = float(parts[0]), float(parts[1]), int(parts[2])
        if num < 1:
            raise ConfigurationError("delta grid needs at least one point")
        return np.linspace(lo, hi, num)
    try:
        return np.array([float(tok) for tok in text.split(",") if tok.strip()])
    except ValueError as exc:
        raise ConfigurationError("bad delta grid %r: %s" % (text, exc)) from exc


def cmd_tree_ensemble(args):
    t0 = time.perf_counter()
    _ensure_out_dir(args.out_dir)
    deltas = _parse_delta_grid(args.delta_grid)
    kinds = ("coherent", "mixture") if args.kind == "both" else (args.kind,)
    spec = TreeSpec(generation=args.generation, coupling_cm1=args.coupling,
                    trap_rate_ps=args.trap_rate, recomb_rate_ps=args.recomb_rate,
                    rng_seed=args.seed)
    outputs = []
    extras = {"tree.n_sites": spec.n_sites,
              "tree.trap_rate_ps": spec.trap_rate_ps,
              "tree.recomb_rate_ps": spec.recomb_rate_ps}
    for kind in kinds:
        report = disorder_ensemble(spec, deltas, n_samples=args.samples,
                                   kind=kind, master_seed=args.seed,
                                   width=args.width)
        path = os.path.join(args.out_dir, "tree_ensemble_%s.csv" % kind)
        _atomic_write(path, report.write_csv)
        outputs.append(path)
        extras["summary.%s.eta_quantum_delta0" % kind] = \
            report.records[0].eta_quantum_mean
    _write_manifest(args.out_dir, "tree_ensemble_manifest.txt", "tree-ensemble",
                    _config_dict(args), extras, outputs,
                    time.perf_counter() - t0)
    print("wrote %s" % ", ".join(outputs))
    return 0


# ---------------------------------------------------------------------------
# two-level


def cmd_two_level(args):
    t0 = time.perf_counter()
    if args.epsilon == 0.0 and args.coupling == 0.0:
        raise ConfigurationError("epsilon and coupling are both zero: the "
                                 "two-site system has no dynamics")
    _ensure_out_dir(args.out_dir)
    params = TwoLevelParams(energy_mismatch_cm1=args.epsilon,
                            coupling_cm1=args.coupling)
    outputs = []

    if args.coupling != 0.0:
        # Closed form vs propagated populations over ten oscillation periods.
        omega = larmor_frequency(params)
        t_final = 10.0 * 2.0 * np.pi / omega
        times = np.linspace(0.0, t_final, 400)
        sys = to_transport_system(params)
        rho0 = initial_density_matrix(InitialState("site", (1,)), 2)
        traj = propagate(sys, rho0, t_final, sample_times=times, rtol=1e-11)
        p2 = traj.populations()[:, 1]
        oracle = coherent_population_2(params, traj.times)

        def write_oracle(f):
            f.write("t_ps,p2_oracle,p2_propagated,abs_error\n")
            for i, t in enumerate(traj.times):
                f.write("%r,%r,%r,%r\n" % (float(t), float(oracle[i]),
                                           float(p2[i]),
                                           float(abs(oracle[i] - p2[i]))))

        path = os.path.join(args.out_dir, "two_level_oracle.csv")
        _atomic_write(path, write_oracle)
        outputs.append(path)

    # Dephasing sweep of the trapped, biased dimer (the ENAQT demonstration).
    trapped = to_transport_system(params, trap_rate_2=args.trap_rate,
                                  recomb_rate=args.recomb_rate)
    rho0 = initial_density_matrix(InitialState("site", (1,)), 2)
    grid = np.concatenate([[0.0], np.logspace(-3, 4, args.gamma_points)])

    def solve(gamma):
        return transport_result(trapped.with_dephasing(gamma), rho0)

    results = run_sweep(SweepPlan(tasks=tuple(float(g) for g in grid)), solve)

    def write_sweep(f):
        f.write("gamma_phi_ps^-1,eta,tau_ps,loss\n")
        for r in results:
            res = r.value
            f.write("%r,%r,%r,%r\n" % (float(grid[r.index]),
                                       float(res.efficiency),
                                       float(res.transfer_time_ps),
                                       float(res.loss_probability)))

    path = os.path.join(args.out_dir, "two_level_enaqt.csv")
    _atomic_write(path, write_sweep)
    outputs.append(path)

    etas = [r.value.efficiency for r in results]
    extras = {"summary.eta_gamma0": etas[0], "summary.eta_max": max(etas)}
    _write_manifest(args.out_dir, "two_level_manifest.txt", "two-level",
                    _config_dict(args), extras, outputs,
                    time.perf_counter() - t0)
    print("wrote %s" % ", ".join(outputs))
    return 0


# ---------------------------------------------------------------------------
# propagate


def _parse_initial_state(text):
    """Parse 'site:3', 'mixture:1,6' or 'coherent:8-15' into an InitialState."""
    if ":" not in text:
        raise ConfigurationError(
            "initial state %r: expected kind:sites, e.g. mixture:1,6" % text)
    kind, _, site_text = text.partition(":")
    sites = []
    for tok in site_text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if "-" in tok[1:]:
            lo, _, hi = tok.partition("-")
            sites.extend(range(int(lo), int(hi) + 1))
        else:
            sites.append(int(tok))
    return InitialState(kind=kind, sites=tuple(sites))


def cmd_propagate(args):
    t0 = time.perf_counter()
    sys = load_system(args.system)
    state = _parse_initial_state(args.init)
    rho0 = initial_density_matrix(state, sys.n_sites)
    t_final = args.t_final if args.t_final is not None else default_horizon(sys)
    times = np.linspace(0.0, t_final, args.samples)
    traj = propagate(sys, rho0, t_final, sample_times=times, rtol=args.rtol)
    _ensure_out_dir(args.out_dir)
    path = os.path.join(args.out_dir, "trajectory.csv")
    _atomic_write(path, traj.write_csv)
    extras = {"t_final_ps": t_final,
              "final_trace": float(traj.trace()[-1]),
              "final_loss_integral": float(traj.loss_integral[-1])}
    _write_manifest(args.out_dir, "propagate_manifest.txt", "propagate",
                    _config_dict(args), extras, [path],
                    time.perf_counter() - t0)
    print("wrote %s" % path)
    return 0


# ---------------------------------------------------------------------------
# temperature-to-rate


def cmd_temperature_to_rate(args):
    t0 = time.perf_counter()
    bath = OhmicBath(reorganization_energy_cm1=args.reorganization_energy,
                     cutoff_cm1=args.cutoff)
    rate = dephasing_rate(bath, args.temperature)
    print("gamma_phi_cm1 = %r" % rate.gamma_cm1)
    print("gamma_phi_ps = %r" % rate.gamma_ps)
    _ensure_out_dir(args.out_dir)
    extras = {"gamma_phi_cm1": rate.gamma_cm1, "gamma_phi_ps": rate.gamma_ps}
    _write_manifest(args.out_dir, "temperature_to_rate_manifest.txt",
                    "temperature-to-rate", _config_dict(args), extras, [],
                    time.perf_counter() - t0)
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="enaqt",
        description="Environment-assisted quantum transport simulations")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fmo-sweep", help="dephasing sweep of the FMO complex")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--gamma-min", type=float, default=1e-3,
                   help="lowest dephasing rate, ps^-1 (default 1e-3)")
    p.add_argument("--gamma-max", type=float, default=1e5)
    p.add_argument("--gamma-points", type=int, default=60)
    p.add_argument("--kappa3", type=float, default=1.0,
                   help="trap rate at site 3, ps^-1")
    p.add_argument("--recomb-rate", type=float, default=0.0005,
                   help="recombination rate Gamma, ps^-1 (default 1 ns lifetime)")
    p.add_argument("--data-file", default=None,
                   help="alternative Hamiltonian file (needs a .sha256 sidecar)")
    p.add_argument("--surface", action="store_true",
                   help="also compute the tau(gamma_phi, kappa_3) surface")
    p.add_argument("--surface-kappa-min", type=float, default=1e-2)
    p.add_argument("--surface-kappa-max", type=float, default=1e2)
    p.add_argument("--surface-kappa-points", type=int, default=25)
    p.add_argument("--annotate-temperature", type=float, default=300.0,
                   help="record gamma_phi(T) of the default Ohmic bath in "
                        "the manifest (kelvin)")
    p.add_argument("--width", type=int, default=1, help="parallel tasks")
    p.set_defaults(func=cmd_fmo_sweep)

    p = sub.add_parser("tree-ensemble",
                       help="disorder ensembles on binary trees")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--generation", type=int, default=4)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=2718, help="master seed")
    p.add_argument("--kind", choices=("coherent", "mixture", "both"),
                   default="both")
    p.add_argument("--delta-grid", default="0:4:20",
                   help="disorder grid in units of V: lo:hi:n or a comma list")
    p.add_argument("--coupling", type=float, default=DEFAULT_COUPLING_CM1,
                   help="tree coupling V, cm^-1 (results depend only on "
                        "ratios, so this sets the overall timescale)")
    p.add_argument("--trap-rate", type=float, default=None,
                   help="kappa at site 1, ps^-1 (default 2V)")
    p.add_argument("--recomb-rate", type=float, default=None,
                   help="Gamma, ps^-1 (default 0.005V)")
    p.add_argument("--width", type=int, default=1)
    p.set_defaults(func=cmd_tree_ensemble)

    p = sub.add_parser("two-level", help="closed-form dimer checks")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--epsilon", type=float, default=100.0,
                   help="energy mismatch, cm^-1")
    p.add_argument("--coupling", type=float, default=10.0, help="V, cm^-1")
    p.add_argument("--trap-rate", type=float, default=1.0,
                   help="kappa_2 for the ENAQT sweep, ps^-1")
    p.add_argument("--recomb-rate", type=float, default=0.0005)
    p.add_argument("--gamma-points", type=int, default=40)
    p.set_defaults(func=cmd_two_level)

    p = sub.add_parser("propagate", help="trajectory export for a system file")
    p.add_argument("--system", required=True, help="JSON system document")
    p.add_argument("--init", required=True,
                   help="initial state, e.g. site:1, mixture:1,6, coherent:8-15")
    p.add_argument("--t-final", type=float, default=None,
                   help="horizon in ps (default: ten decay lifetimes)")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("temperature-to-rate",
                       help="Ohmic-bath dephasing rate at temperature T")
    p.add_argument("--temperature", type=float, required=True, help="kelvin")
    p.add_argument("--reorganization-energy", type=float, default=35.0,
                   help="E_R, cm^-1")
    p.add_argument("--cutoff", type=float, default=150.0,
                   help="omega_c, cm^-1")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_temperature_to_rate)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, DataIntegrityError) as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return 2
    except EnaqtError as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return 1


if __name__ == "__main__":
    _sys.exit(main())
