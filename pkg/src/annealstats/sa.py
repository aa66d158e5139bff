"""Classical simulated annealing with single-spin-flip Metropolis sweeps.

Temperature follows ``T(t) = (tau - t) / t`` for sweeps ``t = t_start..tau-1``,
then one zero-temperature sweep accepts only moves with ``dE <= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .groundstates import GroundStateSet, HitHistogram
from .model import IsingProblem, SpinConfiguration, pack_rows
from .seeding import derive_seed

ENERGY_TOL = 1e-9


@dataclass(frozen=True)
class SaSchedule:
    tau: int
    t_start: int = 1

    def __post_init__(self):
        if self.tau < 2:
            raise ValueError("tau must be >= 2")
        if not 1 <= self.t_start <= self.tau - 1:
            raise ValueError("t_start must lie in [1, tau - 1]")

    def temperature(self, t: int) -> float:
        return (self.tau - t) / t

    def inverse_temperatures(self) -> np.ndarray:
        """``1/T`` per sweep, ending with the zero-temperature sweep."""
        t = np.arange(self.t_start, self.tau, dtype=np.float64)
        return np.append(t / (self.tau - t), math.inf)


@dataclass
class SaResult:
    config: SpinConfiguration
    energy: float
    trace: list[tuple[int, float]]
    quench_trace: np.ndarray
    seed: int


def _arrays(problem: IsingProblem):
    indptr, nbr, J = problem.adjacency
    return indptr, nbr, J, problem.field_h


def _decades(t_start: int, tau: int) -> list[int]:
    marks, t = [], 1
    while t < tau:
        if t >= t_start:
            marks.append(t)
        t *= 10
    return marks


def run_sa(problem: IsingProblem, schedule: SaSchedule, seed: int) -> SaResult:
    """One annealing run from a random start.

    ``trace`` holds the energy after sweeps 1, 10, 100, ... and after the
    final quench; ``quench_trace`` the energy after every site update of the
    zero-temperature sweep.
    """
    n = problem.n_spins
    marks = _decades(schedule.t_start, schedule.tau)
    checkpoints = np.array([t - schedule.t_start for t in marks], dtype=np.int64)
    spins, trace_e, quench = _kernels.run_traced(
        seed, n, *_arrays(problem), schedule.inverse_temperatures(), checkpoints
    )
    e = float(quench[-1])
    trace = list(zip(marks, map(float, trace_e))) + [(schedule.tau, e)]
    return SaResult(SpinConfiguration(pack_rows(spins)[0], n), e, trace, quench, int(seed))


def run_sa_batch(problem: IsingProblem, schedule: SaSchedule, seeds) -> tuple[np.ndarray, np.ndarray]:
    """Final configurations ``(R, N)`` and energies ``(R,)`` of independent runs."""
    seeds = np.asarray(seeds, dtype=np.int64)
    betas = schedule.inverse_temperatures()
    finals = _kernels.anneal_batch(seeds, 1, problem.n_spins, *_arrays(problem), betas, np.zeros(betas.size))
    finals = finals[:, 0, :]
    indptr, nbr, J, h = _arrays(problem)
    return finals, _kernels.slice_energies(finals, indptr, nbr, J, h)


def gs_hit_histogram(
    problem: IsingProblem, gs: GroundStateSet, schedule: SaSchedule, n_runs: int, seed: int
) -> HitHistogram:
    """Which ground state each run ends in; runs above ``e0`` go to the miss bucket."""
    counts = np.zeros(len(gs), dtype=np.int64)
    misses = 0
    seeds = [derive_seed(seed, r) for r in range(n_runs)]
    for start in range(0, n_runs, 5000):
        finals, energies = run_sa_batch(problem, schedule, seeds[start : start + 5000])
        for bits, e in zip(pack_rows(finals), energies):
            k = gs.lookup(bits) if abs(e - gs.e0) <= ENERGY_TOL else None
            if k is None:
                misses += 1
            else:
                counts[k] += 1
    return HitHistogram(counts, misses)


def sample_fixed_temperature(
    problem: IsingProblem, temperature: float, n_sweeps: int, seed: int, burn_in: int = 1000
) -> np.ndarray:
    """Packed configuration after each sweep of Metropolis dynamics at fixed ``T``."""
    if problem.n_spins > 62:
        raise ValueError("packed sampling needs N <= 62")
    return _kernels.sample_codes(
        seed, 1, problem.n_spins, *_arrays(problem), 1.0 / temperature, 0.0, n_sweeps, burn_in
    )
