"""Path-integral Monte Carlo quantum annealing.

The transverse-field Ising model at temperature ``T`` is mapped onto ``M``
coupled classical replicas (Trotter slices). Replicas ``k`` and ``k+1`` of the
same site interact with ``K = 1/2 ln coth(Gamma / (M T))``, periodically in
the Trotter direction. The protocol holds ``T = 1/M``:

1. random start;
2. pre-annealing for ``P`` sweeps at ``T = P / (M t)``, ``t = 1..P``,
   with the field held at ``gamma_pre``;
3. field annealing ``Gamma(t) = (tau - t) / t`` for ``t = 1..tau-1``;
4. one sweep at ``Gamma = 0`` (replicas locked) so each slice is a classical state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .groundstates import GroundStateSet, HitHistogram
from .model import IsingProblem, pack_rows
from .seeding import derive_seed

ENERGY_TOL = 1e-9


def trotter_coupling(gamma: float, m: int, temperature: float) -> float:
    """Inter-slice coupling ``1/2 ln coth(gamma / (m T))``; ``+inf`` for ``gamma <= 0``."""
    if gamma <= 0:
        return math.inf
    x = gamma / (m * temperature)
    if x < 1.0:
        return -0.5 * math.log(math.tanh(x))
    q = math.exp(-2.0 * x)  # coth x = (1 + q) / (1 - q), no cancellation for q <= e^-2
    return 0.5 * (math.log1p(q) - math.log1p(-q))


@dataclass
class TrotterState:
    slices: np.ndarray

    def __post_init__(self):
        self.slices = np.ascontiguousarray(self.slices, dtype=np.int8)
        if self.slices.ndim != 2 or self.slices.shape[0] < 2:
            raise ValueError("TrotterState needs an (M, N) array with M >= 2")
        if not np.all(np.abs(self.slices) == 1):
            raise ValueError("spins must be +1/-1")

    @property
    def m(self) -> int:
        return self.slices.shape[0]

    @classmethod
    def random(cls, m: int, n: int, rng: np.random.Generator) -> "TrotterState":
        return cls(rng.choice(np.array([-1, 1], dtype=np.int8), size=(m, n)))


@dataclass(frozen=True)
class QmcSchedule:
    m: int
    tau: int
    pre_anneal_steps: int = 100
    gamma_pre: float | None = None
    final_quench: bool = True

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need at least two Trotter slices")
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if self.pre_anneal_steps < 0:
            raise ValueError("pre_anneal_steps must be >= 0")

    @property
    def temperature(self) -> float:
        return 1.0 / self.m

    @property
    def gamma_hold(self) -> float:
        # continuous with the first step of the field schedule
        return float(self.tau - 1) if self.gamma_pre is None else float(self.gamma_pre)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-sweep ``beta/M`` (classical weight) and ``K`` for the whole protocol."""
        m, P = self.m, self.pre_anneal_steps
        beta_cl, K = [], []
        for t in range(1, P + 1):
            T = P / (m * t)
            beta_cl.append(1.0 / (m * T))
            K.append(trotter_coupling(self.gamma_hold, m, T))
        T = self.temperature
        for t in range(1, self.tau):
            beta_cl.append(1.0 / (m * T))
            K.append(trotter_coupling((self.tau - t) / t, m, T))
        if self.final_quench:
            beta_cl.append(1.0 / (m * T))
            K.append(math.inf)
        return np.array(beta_cl), np.array(K)

    @property
    def effective_budget(self) -> int:
        return self.tau * self.m


@dataclass
class RunResult:
    slice_energies: np.ndarray
    e_avg: float
    e_best: float
    hits: tuple[int, ...]
    seed: int
    final: np.ndarray | None = field(default=None, repr=False)


def _problem_arrays(problem: IsingProblem):
    indptr, nbr, J = problem.adjacency
    return indptr, nbr, J, problem.field_h


def mc_sweep(
    state: TrotterState, problem: IsingProblem, gamma: float, temperature: float, rng: np.random.Generator
) -> tuple[TrotterState, int]:
    """One Metropolis raster sweep over all slices and sites at fixed (gamma, T)."""
    m, n = state.slices.shape
    if n != problem.n_spins:
        raise ValueError("state and problem disagree on the number of spins")
    spins = state.slices.copy()
    u = rng.random(m * n)
    acc = _kernels.sweep(
        spins, *_problem_arrays(problem), 1.0 / (m * temperature), trotter_coupling(gamma, m, temperature), u
    )
    return TrotterState(spins), int(acc)


def _result(problem, spins, gs, seed, keep_final):
    indptr, nbr, J, h = _problem_arrays(problem)
    e = _kernels.slice_energies(spins, indptr, nbr, J, h)
    hits: list[int] = []
    if gs is not None:
        at_e0 = np.flatnonzero(np.abs(e - gs.e0) <= ENERGY_TOL)
        if at_e0.size:
            for bits in pack_rows(spins[at_e0]):
                k = gs.lookup(bits)
                if k is not None:
                    hits.append(k)
    return RunResult(e, float(e.mean()), float(e.min()), tuple(hits), int(seed), spins if keep_final else None)


def run_qa_batch(
    problem: IsingProblem,
    schedule: QmcSchedule,
    seeds,
    gs: GroundStateSet | None = None,
    keep_final: bool = False,
) -> list[RunResult]:
    seeds = np.asarray(seeds, dtype=np.int64)
    beta_cl, K = schedule.arrays()
    finals = _kernels.anneal_batch(
        seeds, schedule.m, problem.n_spins, *_problem_arrays(problem), beta_cl, K
    )
    return [_result(problem, finals[r], gs, seeds[r], keep_final) for r in range(seeds.size)]


def run_qa(
    problem: IsingProblem, schedule: QmcSchedule, gs: GroundStateSet | None = None, seed: int = 0
) -> RunResult:
    return run_qa_batch(problem, schedule, [seed], gs, keep_final=True)[0]


def qa_hit_histogram(
    problem: IsingProblem, gs: GroundStateSet, schedule: QmcSchedule, n_runs: int, seed: int
) -> HitHistogram:
    """Ground-state hits counted per Trotter slice; a slice above ``e0`` is a miss."""
    counts = np.zeros(len(gs), dtype=np.int64)
    misses = 0
    seeds = [derive_seed(seed, r) for r in range(n_runs)]
    for start in range(0, n_runs, 2000):
        for res in run_qa_batch(problem, schedule, seeds[start : start + 2000], gs):
            for k in res.hits:
                counts[k] += 1
            misses += schedule.m - len(res.hits)
    return HitHistogram(counts, misses)


def sample_fixed(
    problem: IsingProblem, m: int, gamma: float, temperature: float, n_sweeps: int, seed: int, burn_in: int = 1000
) -> np.ndarray:
    """Packed replica states (bit ``k*N + i`` = spin i of slice k) after each sweep at fixed parameters."""
    if m * problem.n_spins > 62:
        raise ValueError("packed sampling needs M*N <= 62")
    return _kernels.sample_codes(
        seed,
        m,
        problem.n_spins,
        *_problem_arrays(problem),
        1.0 / (m * temperature),
        trotter_coupling(gamma, m, temperature) if m > 1 else 0.0,
        n_sweeps,
        burn_in,
    )


def run_trotter_schedule(
    problem: IsingProblem, m: int, beta_cl: np.ndarray, K: np.ndarray, seeds
) -> np.ndarray:
    """Final replicas of independent runs under an explicit per-sweep (beta/M, K) schedule."""
    seeds = np.asarray(seeds, dtype=np.int64)
    return _kernels.anneal_batch(
        seeds, m, problem.n_spins, *_problem_arrays(problem), np.asarray(beta_cl, float), np.asarray(K, float)
    )
