"""Shared fixtures.

The heavyweight computations (the default FMO sweep and surface, the
binary-tree disorder ensembles) are session-scoped so the acceptance tests
share one solve. The acceptance tests each append a one-line verdict to
ACCEPTANCE_LINES before asserting; the terminal-summary hook prints the
collected lines at the end of the run whether or not the assertions held.
"""

import time

import pytest

from enaqt.fmo import dephasing_sweep, load_fmo_model, trap_dephasing_surface
from enaqt.tree import TreeSpec, disorder_ensemble

ACCEPTANCE_LINES = []

ENSEMBLE_SEED = 20240817
ENSEMBLE_SAMPLES = 100


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fmo_model():
    return load_fmo_model()


@pytest.fixture(scope="session")
def fmo_sweep_results(fmo_model):
    """The default 60-point dephasing sweep, (gamma, TransportResult) pairs."""
    return dephasing_sweep(fmo_model)


@pytest.fixture(scope="session")
def fmo_surface(fmo_model):
    """The default 60 x 25 transfer-time surface."""
    return trap_dephasing_surface(fmo_model)


@pytest.fixture(scope="session")
def tree_reports():
    """Generation-4 disorder ensembles for both initial-state kinds.

    Returns ({kind: DisorderEnsembleReport}, elapsed_seconds); the elapsed
    time feeds the runtime acceptance bound.
    """
    spec = TreeSpec(generation=4, coupling_cm1=100.0)
    t0 = time.perf_counter()
    reports = {
        kind: disorder_ensemble(spec, n_samples=ENSEMBLE_SAMPLES, kind=kind,
                                master_seed=ENSEMBLE_SEED)
        for kind in ("mixture", "coherent")
    }
    return reports, time.perf_counter() - t0
