"""Dense exact dynamics for small systems.

Quantum annealing integrates ``i dpsi/dt = H(t) psi`` with
``H(t) = (1 - t/tau) H_driver + (t/tau) H_target``; classical annealing
integrates the single-spin-flip Glauber master equation with the
temperature schedule ``T(t) = (tau - t) / t``. States are indexed by bit
pattern (bit i = spin i, 0 = down).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .groundstates import DEGENERACY_TOL, GroundStateSet
from .model import CapabilityError, IsingProblem

MAX_EXACT_SPINS = 20
MAX_SPECTRUM_SPINS = 14
NORM_TOL = 1e-9
NORM_FAIL = 1e-6
_NORM_BUDGET = 1e-10


class DriverKind(enum.Enum):
    TRANSVERSE_FIELD = "transverse"
    ALL_FLIP = "allflip"

    @classmethod
    def parse(cls, value: "DriverKind | str") -> "DriverKind":
        if isinstance(value, cls):
            return value
        for kind in cls:
            if value in (kind.value, kind.name, kind.name.lower()):
                return kind
        raise ValueError(f"unknown driver {value!r}; expected 'transverse' or 'allflip'")


class IntegrationError(RuntimeError):
    """Norm drift or negative probabilities beyond tolerance."""


@dataclass(frozen=True)
class AnnealSpec:
    """Annealing time, integrator step and driver for one exact run.

    ``dt=None`` picks a step from the spectral width of ``H``. ``integrator``
    is ``"magnus4"`` (unitary, the default), ``"rk4"`` or ``"auto"``.
    """

    tau: float
    dt: float | None = None
    driver: DriverKind = DriverKind.TRANSVERSE_FIELD
    t_start: float = 0.0
    integrator: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "driver", DriverKind.parse(self.driver))
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.dt is not None and not 0 < self.dt <= self.tau:
            raise ValueError("dt must satisfy 0 < dt <= tau")
        if self.t_start < 0 or self.t_start >= self.tau:
            raise ValueError("t_start must lie in [0, tau)")
        if self.integrator not in ("auto", "magnus4", "rk4"):
            raise ValueError(f"unknown integrator {self.integrator!r}")


def _check_size(problem: IsingProblem, limit: int = MAX_EXACT_SPINS) -> int:
    if problem.n_spins > limit:
        raise CapabilityError(f"{problem.n_spins} spins exceeds the exact-method limit of {limit}")
    return problem.n_spins


def uniform_state(n: int) -> np.ndarray:
    dim = 1 << n
    return np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128)


def _flip_bit(v: np.ndarray, n: int, i: int) -> np.ndarray:
    """``v[k ^ (1 << i)]`` for every k, as a view-backed copy."""
    return v.reshape(1 << (n - 1 - i), 2, 1 << i)[:, ::-1, :].reshape(v.shape)


def apply_driver(n: int, driver: DriverKind, psi: np.ndarray) -> np.ndarray:
    if driver is DriverKind.TRANSVERSE_FIELD:
        out = np.zeros_like(psi)
        for i in range(n):
            out -= _flip_bit(psi, n, i)
        return out
    # every off-diagonal element is -1: H psi = -(sum(psi) - psi)
    return psi - psi.sum()


def apply_hamiltonian(problem: IsingProblem, driver: DriverKind | str, s: float, psi: np.ndarray) -> np.ndarray:
    """``((1 - s) H_driver + s H_target) psi`` without forming the matrix."""
    n = _check_size(problem)
    driver = DriverKind.parse(driver)
    psi = np.asarray(psi)
    if psi.shape != (1 << n,):
        raise ValueError(f"state has shape {psi.shape}, expected ({1 << n},)")
    out = s * problem.diagonal() * psi
    if s != 1.0:
        out = out + (1.0 - s) * apply_driver(n, driver, psi)
    return out


def driver_matrix(n: int, driver: DriverKind | str) -> np.ndarray:
    driver = DriverKind.parse(driver)
    dim = 1 << n
    if driver is DriverKind.ALL_FLIP:
        return np.eye(dim) - np.ones((dim, dim))
    A = np.zeros((dim, dim))
    k = np.arange(dim)
    for i in range(n):
        A[k ^ (1 << i), k] = -1.0
    return A


def hamiltonian_matrix(problem: IsingProblem, driver: DriverKind | str, s: float) -> np.ndarray:
    n = _check_size(problem, MAX_SPECTRUM_SPINS)
    H = (1.0 - s) * driver_matrix(n, driver)
    H[np.diag_indices_from(H)] += s * problem.diagonal()
    return H


def _driver_bounds(n: int, driver: DriverKind) -> tuple[float, float]:
    if driver is DriverKind.TRANSVERSE_FIELD:
        return -float(n), float(n)
    return -float((1 << n) - 1), 1.0


def spectral_bounds(problem: IsingProblem, driver: DriverKind) -> tuple[float, float]:
    """Interval containing the spectrum of H(s) for every s in [0, 1]."""
    lo_a, hi_a = _driver_bounds(problem.n_spins, driver)
    E = problem.diagonal()
    return min(lo_a, float(E.min())), max(hi_a, float(E.max()))


def _auto_dt(problem: IsingProblem, spec: AnnealSpec, integrator: str) -> float:
    lo, hi = spectral_bounds(problem, spec.driver)
    half = max((hi - lo) / 2.0, 1e-12)
    if integrator == "magnus4":
        dt = min(0.1, 0.8 / half, spec.tau / 50.0)
    else:
        span = spec.tau - spec.t_start
        dt = min(0.1 / half, (72.0 * _NORM_BUDGET / (span * half**6)) ** 0.2)
    return min(dt, spec.tau - spec.t_start)


def _pick_integrator(problem: IsingProblem, spec: AnnealSpec) -> str:
    if spec.integrator != "auto":
        return spec.integrator
    return "magnus4"


@njit(cache=True)
def _driver_nb(kind, n, v, out):
    if kind == 0:
        dim = v.size
        for k in range(dim):
            acc = 0j
            for i in range(n):
                acc -= v[k ^ (1 << i)]
            out[k] = acc
    else:
        total = v.sum()
        for k in range(v.size):
            out[k] = v[k] - total


@njit(cache=True)
def _magnus4(E, kind, n, tau, t0, n_steps, dt, psi):
    """Fourth-order Magnus with two Gauss points.

    The step generator ``G = a A + b diag(E) + i g [A, diag(E)]`` is Hermitian
    and ``exp(-i G) psi`` is summed as a Taylor series to round-off, so each
    step is unitary to machine precision.
    """
    c = math.sqrt(3.0) / 6.0
    g = (math.sqrt(3.0) / 12.0) * (2.0 * c) * dt**3 / tau
    dim = psi.size
    term = np.empty(dim, dtype=np.complex128)
    nxt = np.empty(dim, dtype=np.complex128)
    av = np.empty(dim, dtype=np.complex128)
    aev = np.empty(dim, dtype=np.complex128)
    ev = np.empty(dim, dtype=np.complex128)
    for m in range(n_steps):
        ssum = (2.0 * t0 + (2.0 * m + 1.0) * dt) / tau
        a = 0.5 * dt * (2.0 - ssum)
        b = 0.5 * dt * ssum
        term[:] = psi
        for k in range(1, 80):
            _driver_nb(kind, n, term, av)
            for j in range(dim):
                ev[j] = E[j] * term[j]
            _driver_nb(kind, n, ev, aev)
            big = 0.0
            for j in range(dim):
                gv = a * av[j] + b * ev[j] + 1j * g * (aev[j] - E[j] * av[j])
                nxt[j] = (-1j / k) * gv
                mag = abs(nxt[j])
                if mag > big:
                    big = mag
            for j in range(dim):
                term[j] = nxt[j]
                psi[j] += nxt[j]
            if big < 1e-18:
                break
    return psi


def _rk4_tdse(problem, driver, tau, t0, n_steps, dt, psi, center):
    n = problem.n_spins
    E = problem.diagonal()
    c_a, c_d = center

    def rhs(t, v):
        s = t / tau
        out = s * E * v + (1.0 - s) * apply_driver(n, driver, v)
        return -1j * (out - ((1.0 - s) * c_a + s * c_d) * v)

    t = t0
    for _ in range(n_steps):
        k1 = rhs(t, psi)
        k2 = rhs(t + dt / 2, psi + dt / 2 * k1)
        k3 = rhs(t + dt / 2, psi + dt / 2 * k2)
        k4 = rhs(t + dt, psi + dt * k3)
        psi = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    return psi


def evolve_schroedinger(problem: IsingProblem, spec: AnnealSpec, initial: np.ndarray | None = None) -> np.ndarray:
    """Final state at ``t = tau`` starting from the driver ground state (uniform superposition).

    ``initial`` overrides the starting state, e.g. an excited eigenstate of
    the driver.
    """
    n = _check_size(problem)
    integrator = _pick_integrator(problem, spec)
    psi = uniform_state(n) if initial is None else np.asarray(initial, dtype=np.complex128).copy()
    if psi.shape != (1 << n,):
        raise ValueError(f"initial state has shape {psi.shape}, expected ({1 << n},)")
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise ValueError("initial state is not normalised")
    span = spec.tau - spec.t_start
    dt = spec.dt if spec.dt is not None else _auto_dt(problem, spec, integrator)
    n_steps = max(1, math.ceil(span / dt - 1e-9))
    dt = span / n_steps
    if integrator == "magnus4":
        kind = 0 if spec.driver is DriverKind.TRANSVERSE_FIELD else 1
        psi = _magnus4(problem.diagonal(), kind, n, float(spec.tau), float(spec.t_start), n_steps, dt, psi)
    else:
        lo_a, hi_a = _driver_bounds(n, spec.driver)
        E = problem.diagonal()
        lo, hi = spectral_bounds(problem, spec.driver)
        if dt * max(hi - lo, 1e-12) / 2.0 > 0.1 + 1e-12:
            raise ValueError(f"dt={dt} violates the RK4 stability bound dt*||H|| <= 0.1")
        center = ((lo_a + hi_a) / 2.0, (float(E.min()) + float(E.max())) / 2.0)
        psi = _rk4_tdse(problem, spec.driver, spec.tau, spec.t_start, n_steps, dt, psi, center)
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > NORM_FAIL:
        raise IntegrationError(f"norm drift {drift:.3e} exceeds {NORM_FAIL}; reduce dt")
    return psi


def convergence_gap(problem: IsingProblem, spec: AnnealSpec) -> float:
    """Largest change in final basis probabilities when the step is halved."""
    integrator = _pick_integrator(problem, spec)
    dt = spec.dt if spec.dt is not None else _auto_dt(problem, spec, integrator)
    a = evolve_schroedinger(problem, _with_dt(spec, dt))
    b = evolve_schroedinger(problem, _with_dt(spec, dt / 2))
    return float(np.max(np.abs(np.abs(a) ** 2 - np.abs(b) ** 2)))


def _with_dt(spec: AnnealSpec, dt: float) -> AnnealSpec:
    return AnnealSpec(spec.tau, dt, spec.driver, spec.t_start, spec.integrator)


@njit(cache=True)
def _glauber(de, T):
    if T <= 0.0:
        if de < 0.0:
            return 1.0
        if de > 0.0:
            return 0.0
        return 0.5
    return 0.5 * (1.0 - math.tanh(de / (2.0 * T)))


@njit(cache=True)
def _master_rhs(p, dE, T, out):
    dim, n = dE.shape
    for k in range(dim):
        acc = 0.0
        for i in range(n):
            j = k ^ (1 << i)
            acc += _glauber(-dE[k, i], T) * p[j] - _glauber(dE[k, i], T) * p[k]
        out[k] = acc


@njit(cache=True)
def _temperature(t, tau, fixed_T):
    if fixed_T >= 0.0:
        return fixed_T
    return max((tau - t) / t, 0.0)


@njit(cache=True)
def _master_rk4(p, dE, tau, t0, n_steps, dt, fixed_T):
    dim = p.size
    k1 = np.empty(dim)
    k2 = np.empty(dim)
    k3 = np.empty(dim)
    k4 = np.empty(dim)
    pmin = 0.0
    t = t0
    for _ in range(n_steps):
        _master_rhs(p, dE, _temperature(t, tau, fixed_T), k1)
        _master_rhs(p + 0.5 * dt * k1, dE, _temperature(t + 0.5 * dt, tau, fixed_T), k2)
        _master_rhs(p + 0.5 * dt * k2, dE, _temperature(t + 0.5 * dt, tau, fixed_T), k3)
        _master_rhs(p + dt * k3, dE, _temperature(t + dt, tau, fixed_T), k4)
        p = p + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
        m = p.min()
        if m < pmin:
            pmin = m
    return p, pmin


def flip_energy_table(problem: IsingProblem) -> np.ndarray:
    """``dE[k, i] = E(k ^ (1 << i)) - E(k)`` over all basis states."""
    n = _check_size(problem)
    E = problem.diagonal()
    k = np.arange(E.size)
    dE = np.stack([E[k ^ (1 << i)] - E for i in range(n)], axis=1)
    # round-off between degenerate states would pick a direction at T = 0
    dE[np.abs(dE) <= DEGENERACY_TOL * max(1.0, np.abs(E).max())] = 0.0
    return dE


def evolve_master(
    problem: IsingProblem,
    spec: AnnealSpec,
    temperature: float | None = None,
    initial: np.ndarray | None = None,
) -> np.ndarray:
    """Integrate ``dP/dt = W(t) P`` with Glauber single-flip rates.

    By default the temperature follows ``(tau - t) / t`` from
    ``max(dt, 1e-3 tau)`` starting from the uniform (infinite-temperature)
    distribution. A fixed ``temperature`` runs for time ``tau`` from ``t = 0``.
    """
    n = _check_size(problem)
    dim = 1 << n
    p = np.full(dim, 1.0 / dim) if initial is None else np.array(initial, dtype=np.float64)
    if p.shape != (dim,):
        raise ValueError(f"initial distribution has shape {p.shape}, expected ({dim},)")
    dt = spec.dt if spec.dt is not None else min(0.1, 0.5 / n)
    if temperature is None:
        t0 = max(spec.t_start, dt, 1e-3 * spec.tau)
        fixed = -1.0
    else:
        if temperature < 0:
            raise ValueError("temperature must be >= 0")
        t0, fixed = spec.t_start, float(temperature)
    span = spec.tau - t0
    if span <= 0:
        return p
    n_steps = max(1, math.ceil(span / dt - 1e-9))
    p, pmin = _master_rk4(p, flip_energy_table(problem), float(spec.tau), t0, n_steps, span / n_steps, fixed)
    if pmin < -1e-9:
        raise IntegrationError(f"probability dropped to {pmin:.3e}; reduce dt")
    return p


def boltzmann(problem: IsingProblem, temperature: float) -> np.ndarray:
    E = problem.diagonal()
    w = np.exp(-(E - E.min()) / temperature)
    return w / w.sum()


def instantaneous_spectrum(problem: IsingProblem, driver: DriverKind | str, s_grid) -> np.ndarray:
    """Full ascending spectrum of ``H(s)`` for each ``s``; shape ``(len(s_grid), 2^N)``."""
    if problem.n_spins > MAX_SPECTRUM_SPINS:
        raise CapabilityError(f"dense spectrum limited to {MAX_SPECTRUM_SPINS} spins")
    n = problem.n_spins
    A = driver_matrix(n, driver)
    E = problem.diagonal()
    out = np.empty((len(s_grid), 1 << n))
    for row, s in enumerate(s_grid):
        H = (1.0 - s) * A
        H[np.diag_indices_from(H)] += s * E
        out[row] = np.linalg.eigvalsh(H)
    return out


def adiabatic_limit_probabilities(
    problem: IsingProblem, gs: GroundStateSet, driver: DriverKind | str, s: float = 1.0 - 1e-4
) -> dict[int, float]:
    """Ground-state weights of the instantaneous ground eigenvector near the end of the sweep."""
    _, V = np.linalg.eigh(hamiltonian_matrix(problem, driver, s))
    return ground_state_probabilities(V[:, 0].astype(np.complex128), gs)


def _probabilities(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state)
    return np.abs(state) ** 2 if np.iscomplexobj(state) else state


def ground_state_probabilities(state: np.ndarray, gs: GroundStateSet) -> dict[int, float]:
    """Probability of each ground-state ordinal.

    A complex array is read as amplitudes, a real one as probabilities.
    Modulo reversal each ordinal collects both members of its pair.
    """
    p = _probabilities(state)
    if p.size != 1 << gs.n_spins:
        raise ValueError("state dimension does not match the ground-state set")
    return {k: float(p[idx].sum()) for k, idx in enumerate(gs.basis_indices())}


def residual_energy(state: np.ndarray, problem: IsingProblem, e0: float) -> float:
    """``(<H_target> - e0) / N``."""
    p = _probabilities(state)
    return float((p @ problem.diagonal() - e0) / problem.n_spins)
