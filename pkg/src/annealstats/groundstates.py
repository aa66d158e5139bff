"""Exact enumeration of degenerate ground states.

Two routes that must agree: a brute-force scan of all ``2^N`` bit patterns,
and a row-by-row transfer sweep over ``L x L`` lattices that backtracks
through every optimal completion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import (
    CapabilityError,
    IsingProblem,
    SpinConfiguration,
    canonical_bits,
    canonical_form,
    energies_of_indices,
)

DEGENERACY_TOL = 1e-9
MAX_EXHAUSTIVE = 24
MAX_LATTICE_L = 8


class HintError(ValueError):
    """The supplied ground-energy hint lies below the true minimum."""


@dataclass(frozen=True)
class GroundStateSet:
    n_spins: int
    e0: float
    states: tuple[SpinConfiguration, ...]
    modulo_reversal: bool
    index: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {s.bits: k for k, s in enumerate(self.states)})
        if len(self.index) != len(self.states):
            raise ValueError("ground states must be distinct")

    def __len__(self) -> int:
        return len(self.states)

    def lookup(self, config: SpinConfiguration | int) -> int | None:
        bits = config.bits if isinstance(config, SpinConfiguration) else int(config)
        if self.modulo_reversal:
            bits = canonical_bits(bits, self.n_spins)
        return self.index.get(bits)

    def basis_indices(self) -> list[list[int]]:
        """Basis-state indices covered by each ordinal (two per ordinal modulo reversal)."""
        mask = (1 << self.n_spins) - 1
        if self.modulo_reversal:
            return [[s.bits, s.bits ^ mask] for s in self.states]
        return [[s.bits] for s in self.states]


@dataclass
class HitHistogram:
    """Hits per ground-state ordinal plus the number of samples that ended above ``e0``."""

    counts: np.ndarray
    misses: int = 0

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.misses

    def relative(self) -> np.ndarray:
        hits = self.counts.sum()
        return self.counts / hits if hits else np.zeros(self.counts.size)

    def ranking(self) -> np.ndarray:
        """Ordinals sorted by decreasing hit count (ties by ordinal)."""
        return np.lexsort((np.arange(self.counts.size), -self.counts))


def lookup(gs: GroundStateSet, config: SpinConfiguration | int) -> int | None:
    return gs.lookup(config)


def _check_reversal(problem: IsingProblem, modulo_reversal: bool) -> None:
    if modulo_reversal and problem.field_h != 0.0:
        raise ValueError("modulo_reversal needs field_h == 0 (no spin-reversal symmetry otherwise)")


def _make_set(problem: IsingProblem, e0: float, bits, modulo_reversal: bool) -> GroundStateSet:
    n = problem.n_spins
    if modulo_reversal:
        keys = sorted({canonical_bits(int(b), n) for b in bits})
    else:
        keys = sorted({int(b) for b in bits})
    return GroundStateSet(n, float(e0), tuple(SpinConfiguration(b, n) for b in keys), modulo_reversal)


def enumerate_exhaustive(
    problem: IsingProblem, modulo_reversal: bool = True, chunk: int = 1 << 20
) -> GroundStateSet:
    """Scan every bit pattern and keep those within tolerance of the minimum."""
    n = problem.n_spins
    if n > MAX_EXHAUSTIVE:
        raise CapabilityError(f"exhaustive scan of {n} spins exceeds the limit of {MAX_EXHAUSTIVE}")
    _check_reversal(problem, modulo_reversal)
    tol = 0.0 if problem.is_integer else DEGENERACY_TOL
    best = np.inf
    found: list[np.ndarray] = []
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        e = energies_of_indices(problem, idx)
        m = e.min()
        if m < best - tol:
            best, found = m, []
        if m <= best + tol:
            best = min(best, m)
            found.append(np.stack([idx[e <= best + tol], e[e <= best + tol]]))
    cand = np.concatenate(found, axis=1)
    keep = cand[0][cand[1] <= best + tol].astype(np.int64)
    return _make_set(problem, best, keep, modulo_reversal)


def _row_tables(problem: IsingProblem):
    """Row energies ``R[y, p]`` and inter-row energies ``V[y, p, q]`` (row y to y+1 mod L)."""
    L = problem.lattice.L
    P = 1 << L
    pat = np.arange(P, dtype=np.int64)
    spin = 1 - 2 * (((pat[:, None] >> np.arange(L)) & 1) == 0)  # (P, L), +1 for set bit
    R = np.zeros((L, P))
    V = np.zeros((L, P, P))
    for i, j, J in problem.couplings:
        yi, xi = divmod(i, L)
        yj, xj = divmod(j, L)
        if yi == yj:
            R[yi] -= J * spin[:, xi] * spin[:, xj]
        elif yj == (yi + 1) % L:
            V[yi] -= J * np.outer(spin[:, xi], spin[:, xj])
        elif yi == (yj + 1) % L:
            V[yj] -= J * np.outer(spin[:, xj], spin[:, xi])
        else:
            raise ValueError(f"bond ({i}, {j}) is not a nearest-neighbour lattice bond")
    if problem.field_h:
        R -= problem.field_h * spin.sum(axis=1)[None, :]
    return R, V


def _completion_costs(R: np.ndarray, V: np.ndarray, first_rows: np.ndarray) -> list[np.ndarray]:
    """``C[y][a, p]``: minimum energy of rows y..L-1 given row y = p and row 0 = first_rows[a]."""
    L = R.shape[0]
    C = [None] * L
    C[L - 1] = R[L - 1][None, :] + V[L - 1][:, first_rows].T
    for y in range(L - 2, -1, -1):
        # (A, P, Q) -> min over q
        C[y] = R[y][None, :] + (V[y][None, :, :] + C[y + 1][:, None, :]).min(axis=2)
    return C


def lattice_ground_energy(problem: IsingProblem) -> float:
    """Exact minimum energy of a periodic lattice problem by the row transfer sweep."""
    if problem.lattice is None:
        raise ValueError("lattice sweep needs lattice metadata")
    if problem.lattice.L > MAX_LATTICE_L:
        raise CapabilityError(f"lattice sweep supports L <= {MAX_LATTICE_L}")
    R, V = _row_tables(problem)
    rows = np.arange(1 << problem.lattice.L)
    C = _completion_costs(R, V, rows)
    return float(C[0][rows, rows].min())


def enumerate_lattice(
    problem: IsingProblem,
    e0_hint: float | None = None,
    modulo_reversal: bool = True,
    max_frontier: int = 1 << 22,
) -> GroundStateSet:
    """All ground states of an ``L x L`` periodic lattice by pruned row backtracking.

    Partial assignments of rows ``0..y`` survive only if their energy plus the
    optimal completion of the remaining rows reaches the minimum.
    """
    if problem.lattice is None:
        raise ValueError("enumerate_lattice needs lattice metadata")
    L = problem.lattice.L
    if L > MAX_LATTICE_L:
        raise CapabilityError(f"lattice enumeration supports L <= {MAX_LATTICE_L}, got {L}")
    _check_reversal(problem, modulo_reversal)
    tol = 0.0 if problem.is_integer else DEGENERACY_TOL
    R, V = _row_tables(problem)
    first = np.arange(1 << L)
    if modulo_reversal:
        first = first[(first & 1) == 1]  # spin 0 up selects the canonical member
    C = _completion_costs(R, V, first)
    totals = C[0][np.arange(first.size), first]
    e0 = float(totals.min())
    if e0_hint is not None and e0_hint < e0 - max(tol, DEGENERACY_TOL):
        raise HintError(f"e0 hint {e0_hint} is below the true minimum {e0}; no states reach it")
    cut = e0 + tol

    # frontier: index into `first`, rows so far, energy of completed rows and bonds
    a = np.flatnonzero(totals <= cut)
    rows = first[a][:, None]
    acc = np.zeros(a.size)
    for y in range(L - 1):
        p = rows[:, -1]
        step = acc[:, None] + R[y][p][:, None] + V[y][p]  # (F, Q)
        ok = step + C[y + 1][a] <= cut
        fi, q = np.nonzero(ok)
        if fi.size > max_frontier:
            raise CapabilityError(f"frontier of {fi.size} partial states exceeds {max_frontier}")
        a, acc = a[fi], step[fi, q]
        rows = np.concatenate([rows[fi], q[:, None]], axis=1)
    shifts = (np.arange(L, dtype=np.int64) * L)[None, :]
    bits = np.bitwise_or.reduce(rows.astype(np.int64) << shifts, axis=1)
    return _make_set(problem, e0, bits, modulo_reversal)


def enumerate_ground_states(problem: IsingProblem, modulo_reversal: bool = True) -> GroundStateSet:
    """Lattice sweep for lattice problems (L <= 8), exhaustive scan otherwise."""
    if problem.lattice is not None:
        return enumerate_lattice(problem, modulo_reversal=modulo_reversal)
    return enumerate_exhaustive(problem, modulo_reversal=modulo_reversal)


def write_ground_states(gs: GroundStateSet, path: str | Path) -> None:
    lines = [f"{gs.n_spins} {gs.e0!r} {len(gs)} {int(gs.modulo_reversal)}"]
    lines += [s.hex() for s in gs.states]
    Path(path).write_text("\n".join(lines) + "\n")


def read_ground_states(path: str | Path) -> GroundStateSet:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 4:
        raise ValueError(f"{path}: header must be 'n_spins e0 count modulo_reversal'")
    n, e0, count, mod = int(head[0]), float(head[1]), int(head[2]), bool(int(head[3]))
    states = tuple(SpinConfiguration(int(h, 16), n) for h in lines[1:])
    if len(states) != count:
        raise ValueError(f"{path}: header announces {count} states, found {len(states)}")
    return GroundStateSet(n, e0, states, mod)


def is_canonical(config: SpinConfiguration) -> bool:
    return canonical_form(config) == config
