"""Deterministic parameter-sweep executor.

Tasks are pure functions of their descriptor; the engine may run them on a
thread pool (the heavy lifting is LAPACK, which releases the GIL) but the
caller always sees results in task-index order, so the output is identical
for any parallelism width. Per-task failures are captured rather than
aborting siblings; the run as a whole fails only when the failure fraction
exceeds the configured threshold.

Randomized tasks never share generator state: each task derives its own
seed from the master seed and its index through a stable cryptographic
hash, so results are reproducible bit for bit across platforms, processes
and widths.
"""

import hashlib
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, SweepFailureError


def derive_seed(master_seed, *indices):
    """Stable 64-bit seed for a task, hashed from the master seed and any
    number of integer indices (for example delta index and sample index)."""
    h = hashlib.blake2b(digest_size=8)
    h.update(int(master_seed).to_bytes(8, "big", signed=True))
    for ix in indices:
        h.update(int(ix).to_bytes(8, "big", signed=True))
    return int.from_bytes(h.digest(), "big")


def sample_mean_std(values):
    """Mean and sample standard deviation (n-1 denominator) of a sequence.

    The std of fewer than two values is reported as 0. Input order matters
    for bitwise reproducibility, so callers must pass index-sorted data.
    """
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        return float("nan"), float("nan")
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std


@dataclass(frozen=True)
class SweepPlan:
    """Tasks to execute: opaque descriptors with dense indices 0..n-1."""

    tasks: tuple
    master_seed: int = 0
    width: int = 1

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        if int(self.width) < 1:
            raise ConfigurationError("parallelism width must be >= 1")
        object.__setattr__(self, "width", int(self.width))


@dataclass(frozen=True)
class TaskResult:
    index: int
    value: object = None
    error: str = field(default=None)

    @property
    def ok(self):
        return self.error is None


def _run_one(index, task, task_fn):
    try:
        return TaskResult(index=index, value=task_fn(task))
    except Exception:
        return TaskResult(index=index, error=traceback.format_exc())


def run_sweep(plan, task_fn, failure_threshold=0.0):
    """Execute every task and return TaskResults in index order.

    failure_threshold is the tolerated fraction of failed tasks; exceeding
    it raises SweepFailureError carrying the first captured traceback.
    """
    n = len(plan.tasks)
    if n == 0:
        return []
    if plan.width == 1:
        results = [_run_one(i, task, task_fn) for i, task in enumerate(plan.tasks)]
    else:
        with ThreadPoolExecutor(max_workers=plan.width) as pool:
            futures = [pool.submit(_run_one, i, task, task_fn)
                       for i, task in enumerate(plan.tasks)]
            results = [f.result() for f in futures]
        results.sort(key=lambda r: r.index)
    failures = [r for r in results if not r.ok]
    if len(failures) > failure_threshold * n:
        raise SweepFailureError(
            "%d of %d sweep tasks failed (threshold %.0f%%); first failure:\n%s"
            % (len(failures), n, 100.0 * failure_threshold, failures[0].error))
    return results
