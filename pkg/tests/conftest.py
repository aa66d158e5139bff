import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def brute_energy(n, couplings, h, spins):
    """Direct double-loop energy used as an independent oracle."""
    e = 0.0
    for i, j, J in couplings:
        e -= J * spins[i] * spins[j]
    return e - h * sum(spins)


def all_spin_states(n):
    """Spin tuples in bit order: bit i of the index is spin i, 0 meaning down."""
    for k in range(1 << n):
        yield k, [1 if (k >> i) & 1 else -1 for i in range(n)]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def batch_stats(x, n_batches=40):
    b = np.asarray(x, float)[: len(x) // n_batches * n_batches].reshape(n_batches, -1).mean(axis=1)
    return b.mean(), b.std(ddof=1) / math.sqrt(n_batches)


def within_3_sigma(obs, ref):
    """Batch-means error, floored by the binomial error for rarely visited states."""
    mean, err = batch_stats(obs)
    floor = math.sqrt(max(ref * (1 - ref), 0.0) / len(obs)) if np.isin(obs, (0.0, 1.0)).all() else 0.0
    return abs(mean - ref) <= 3 * max(err, floor), (mean, ref, err)
