"""Environment-assisted quantum transport.

Simulation engine for excitonic transport under pure-dephasing
(Haken-Strobl) dynamics with trapping and recombination: density-matrix
propagation, exact infinite-horizon efficiency/transfer-time functionals
via the Liouvillian inverse, the seven-site FMO problem, and disordered
binary-tree ensembles.
"""

__version__ = "0.1.0"

from .dynamics import (Liouvillian, Trajectory, build_liouvillian,
                       integrated_state, master_equation_rhs, propagate)
from .errors import (ConfigurationError, DataIntegrityError, EnaqtError,
                     NonConvergentIntegralError, NumericalConsistencyError,
                     StiffnessError, SweepFailureError,
                     UndefinedTransferTimeError)
from .fmo import FmoModel, dephasing_sweep, load_fmo_model, trap_dephasing_surface
from .model import (InitialState, TransportSystem, effective_hamiltonian,
                    initial_density_matrix, load_system, save_system)
from .observables import (TransportResult, efficiency, loss_probability,
                          transfer_time, transport_result)
from .spectral import OhmicBath, dephasing_rate, spectral_density
from .sweep import SweepPlan, derive_seed, run_sweep
from .tree import (DisorderEnsembleReport, SearchConfig, TreeSpec,
                   disorder_ensemble, generate_tree, leaf_initial_state,
                   optimal_dephasing)
from .twolevel import (TwoLevelParams, coherent_population_2,
                       diffusion_time_estimate, equilibrium_population_2,
                       larmor_frequency, to_transport_system)
from .units import BOLTZMANN_CM1_PER_K, CM1_TO_PS_ANGULAR, UnitConvention

__all__ = [
    "BOLTZMANN_CM1_PER_K", "CM1_TO_PS_ANGULAR", "ConfigurationError",
    "DataIntegrityError", "DisorderEnsembleReport", "EnaqtError", "FmoModel",
    "InitialState", "Liouvillian", "NonConvergentIntegralError",
    "NumericalConsistencyError", "OhmicBath", "SearchConfig", "StiffnessError",
    "SweepFailureError", "SweepPlan", "Trajectory", "TransportResult",
    "TransportSystem", "TreeSpec", "TwoLevelParams", "UndefinedTransferTimeError",
    "UnitConvention", "build_liouvillian", "coherent_population_2",
    "dephasing_rate", "dephasing_sweep", "derive_seed",
    "diffusion_time_estimate", "disorder_ensemble", "effective_hamiltonian",
    "efficiency", "equilibrium_population_2", "generate_tree",
    "initial_density_matrix", "integrated_state", "larmor_frequency",
    "leaf_initial_state", "load_fmo_model", "load_system", "loss_probability",
    "master_equation_rhs", "optimal_dephasing", "propagate", "run_sweep",
    "save_system", "spectral_density", "to_transport_system", "transfer_time",
    "transport_result", "trap_dephasing_surface",
]
