"""Stable per-task seeds: the same keys give the same seed on every machine."""

import numpy as np


def derive_seed(*keys: int) -> int:
    """32-bit seed hashed from non-negative integer keys, e.g. (base, disorder, tau, run)."""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1, np.uint32)[0])
