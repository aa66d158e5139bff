"""Numba Metropolis kernels shared by the path-integral and classical annealers.

Spins live in an ``(M, N)`` int8 array of Trotter slices; classical annealing
is the ``M = 1`` case with the inter-slice coupling switched off. A flip of
spin ``(k, i)`` is accepted with ``min(1, exp(-x))`` where
``x = beta_cl * dE_classical + K * dE_trotter``.
"""

import math
import warnings

import numpy as np
from numba import njit, prange
from numba.core.errors import NumbaWarning

warnings.filterwarnings("ignore", message="The TBB threading layer", category=NumbaWarning)


@njit(cache=True, inline="always")
def _accept(de, dt, beta_cl, K, u):
    x = 0.0
    if math.isinf(K):
        if dt > 0:
            return False
        if dt < 0:
            return True
    else:
        x += K * dt
    if math.isinf(beta_cl):
        if de > 0:
            return False
        if de < 0:
            return True
    else:
        x += beta_cl * de
    return x <= 0.0 or u < math.exp(-x)


@njit(cache=True, inline="always")
def _update(spins, k, i, indptr, nbr, J, h, beta_cl, K, u):
    M = spins.shape[0]
    s = spins[k, i]
    loc = h
    for e in range(indptr[i], indptr[i + 1]):
        loc += J[e] * spins[k, nbr[e]]
    de = 2.0 * s * loc
    dt = 0.0
    if M > 1:
        dt = 2.0 * s * (spins[(k - 1 + M) % M, i] + spins[(k + 1) % M, i])
    if _accept(de, dt, beta_cl, K, u):
        spins[k, i] = -s
        return True
    return False


@njit(cache=True)
def sweep(spins, indptr, nbr, J, h, beta_cl, K, u):
    """One raster pass over every (slice, site) pair; returns the number of accepted flips."""
    M, N = spins.shape
    accepted = 0
    for k in range(M):
        for i in range(N):
            if _update(spins, k, i, indptr, nbr, J, h, beta_cl, K, u[k * N + i]):
                accepted += 1
    return accepted


@njit(cache=True)
def slice_energies(spins, indptr, nbr, J, h):
    M, N = spins.shape
    out = np.zeros(M)
    for k in range(M):
        e = 0.0
        for i in range(N):
            pair = 0.0
            for q in range(indptr[i], indptr[i + 1]):
                pair += J[q] * spins[k, nbr[q]]
            e -= 0.5 * spins[k, i] * pair + h * spins[k, i]
        out[k] = e
    return out


@njit(cache=True)
def _random_spins(M, N):
    spins = np.empty((M, N), dtype=np.int8)
    for k in range(M):
        for i in range(N):
            spins[k, i] = 1 if np.random.random() < 0.5 else -1
    return spins


@njit(cache=True)
def _fill_uniform(u):
    for c in range(u.size):
        u[c] = np.random.random()


@njit(cache=True)
def anneal(spins, indptr, nbr, J, h, beta_cls, Ks):
    """Apply one sweep per schedule entry, drawing from numba's seeded generator."""
    u = np.empty(spins.size)
    total = 0
    for t in range(beta_cls.size):
        _fill_uniform(u)
        total += sweep(spins, indptr, nbr, J, h, beta_cls[t], Ks[t], u)
    return total


@njit(cache=True, parallel=True)
def anneal_batch(seeds, M, N, indptr, nbr, J, h, beta_cls, Ks):
    """Independent runs from random starts; run r is fully determined by ``seeds[r]``."""
    R = seeds.size
    out = np.empty((R, M, N), dtype=np.int8)
    for r in prange(R):
        np.random.seed(seeds[r])
        spins = _random_spins(M, N)
        anneal(spins, indptr, nbr, J, h, beta_cls, Ks)
        out[r] = spins
    return out


@njit(cache=True)
def anneal_checkpoints(spins, indptr, nbr, J, h, beta_cls, Ks, checkpoints):
    """Like ``anneal`` but records slice-0 energy after each sweep listed in ``checkpoints``."""
    u = np.empty(spins.size)
    trace = np.empty(checkpoints.size)
    c = 0
    for t in range(beta_cls.size):
        _fill_uniform(u)
        sweep(spins, indptr, nbr, J, h, beta_cls[t], Ks[t], u)
        while c < checkpoints.size and checkpoints[c] == t:
            trace[c] = slice_energies(spins[:1], indptr, nbr, J, h)[0]
            c += 1
    return trace


@njit(cache=True)
def run_traced(seed, N, indptr, nbr, J, h, betas, checkpoints):
    """Single classical run: decade checkpoints, then a traced final sweep at ``betas[-1]``."""
    np.random.seed(seed)
    spins = _random_spins(1, N)
    S = betas.size - 1
    trace = anneal_checkpoints(spins, indptr, nbr, J, h, betas[:S], np.zeros(S), checkpoints)
    u = np.empty(N)
    _fill_uniform(u)
    quench = np.empty(N)
    e = slice_energies(spins, indptr, nbr, J, h)[0]
    for i in range(N):
        s = spins[0, i]
        if _update(spins, 0, i, indptr, nbr, J, h, betas[S], 0.0, u[i]):
            loc = h
            for q in range(indptr[i], indptr[i + 1]):
                loc += J[q] * spins[0, nbr[q]]
            e += 2.0 * s * loc
        quench[i] = e
    return spins, trace, quench


@njit(cache=True)
def pack_state(spins):
    code = 0
    b = 0
    M, N = spins.shape
    for k in range(M):
        for i in range(N):
            if spins[k, i] > 0:
                code |= 1 << b
            b += 1
    return code


@njit(cache=True)
def sample_codes(seed, M, N, indptr, nbr, J, h, beta_cl, K, n_sweeps, burn_in):
    """Packed (M*N <= 62 bit) replica state after each sweep at fixed parameters."""
    np.random.seed(seed)
    spins = _random_spins(M, N)
    u = np.empty(M * N)
    for _ in range(burn_in):
        _fill_uniform(u)
        sweep(spins, indptr, nbr, J, h, beta_cl, K, u)
    codes = np.empty(n_sweeps, dtype=np.int64)
    for t in range(n_sweeps):
        _fill_uniform(u)
        sweep(spins, indptr, nbr, J, h, beta_cl, K, u)
        codes[t] = pack_state(spins)
    return codes
