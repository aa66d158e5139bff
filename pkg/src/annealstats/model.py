"""Ising problem instances, classical energies and the lattice generators.

Sites of an ``L x L`` lattice are numbered row-major, ``site = y * L + x``.
A configuration is bit-packed into a Python int: bit ``i`` set means spin
``i`` is up (+1), cleared means down (-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

FREE_SPIN_TOL = 1e-12


@dataclass(frozen=True)
class Lattice:
    L: int
    periodic: bool = True


@dataclass(frozen=True)
class SpinConfiguration:
    """Bit-packed assignment of ``n`` Ising spins."""

    bits: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("configuration needs at least one spin")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bit pattern {self.bits:#x} does not fit {self.n} spins")

    @classmethod
    def from_spins(cls, spins: Iterable[int]) -> "SpinConfiguration":
        arr = np.asarray(list(spins) if not isinstance(spins, np.ndarray) else spins)
        if arr.ndim != 1 or not np.all((arr == 1) | (arr == -1)):
            raise ValueError("spins must be a 1-d sequence of +1/-1")
        return cls(pack_spins(arr), arr.size)

    @classmethod
    def all_up(cls, n: int) -> "SpinConfiguration":
        return cls((1 << n) - 1, n)

    @classmethod
    def all_down(cls, n: int) -> "SpinConfiguration":
        return cls(0, n)

    def spins(self) -> np.ndarray:
        return unpack_bits(self.bits, self.n)

    def flip(self, site: int) -> "SpinConfiguration":
        if not 0 <= site < self.n:
            raise IndexError(f"site {site} out of range for {self.n} spins")
        return SpinConfiguration(self.bits ^ (1 << site), self.n)

    def global_flip(self) -> "SpinConfiguration":
        return SpinConfiguration(self.bits ^ ((1 << self.n) - 1), self.n)

    def __len__(self) -> int:
        return self.n

    def hex(self) -> str:
        return format(self.bits, "x")


def pack_spins(spins: np.ndarray) -> int:
    up = np.flatnonzero(np.asarray(spins) > 0)
    return sum(1 << int(i) for i in up)


def unpack_bits(bits: int, n: int) -> np.ndarray:
    out = np.empty(n, dtype=np.int8)
    for i in range(n):
        out[i] = 1 if (bits >> i) & 1 else -1
    return out


def pack_rows(spins: np.ndarray) -> list[int]:
    """Pack each row of a (k, n) +/-1 array into an int bit pattern."""
    spins = np.atleast_2d(spins)
    n = spins.shape[1]
    if n <= 63:
        weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
        return [int(v) for v in ((spins > 0).astype(np.int64) @ weights)]
    return [pack_spins(row) for row in spins]


def canonical_form(config: SpinConfiguration) -> SpinConfiguration:
    """Representative of ``{config, global_flip(config)}``: the one with spin 0 up."""
    return config if config.bits & 1 else config.global_flip()


def canonical_bits(bits: int, n: int) -> int:
    return bits if bits & 1 else bits ^ ((1 << n) - 1)


@dataclass(frozen=True)
class IsingProblem:
    """Target Hamiltonian ``-sum J_ij s_i s_j - h sum s_i``.

    ``couplings`` is a tuple of ``(i, j, J)`` with ``i < j``. For lattice
    problems the bond list must be exactly the ``2 L^2`` nearest-neighbour
    bonds of the periodic square lattice; at ``L = 2`` this includes
    parallel bonds, which are kept as separate entries.
    """

    n_spins: int
    couplings: tuple[tuple[int, int, float], ...]
    field_h: float = 0.0
    lattice: Lattice | None = None
    name: str = ""

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError("n_spins must be positive")
        bonds = tuple((int(i), int(j), float(J)) for i, j, J in self.couplings)
        object.__setattr__(self, "couplings", bonds)
        object.__setattr__(self, "field_h", float(self.field_h))
        for i, j, _ in bonds:
            if not (0 <= i < j < self.n_spins):
                raise ValueError(f"bond ({i}, {j}) needs 0 <= i < j < {self.n_spins}")
        if self.lattice is None:
            pairs = [(i, j) for i, j, _ in bonds]
            if len(set(pairs)) != len(pairs):
                raise ValueError("duplicate (i, j) pair in couplings")
        else:
            L = self.lattice.L
            if self.n_spins != L * L:
                raise ValueError(f"lattice L={L} needs {L * L} spins, got {self.n_spins}")
            expected = sorted(map(tuple, _lattice_pairs(L)))
            got = sorted((i, j) for i, j, _ in bonds)
            if got != expected:
                raise ValueError(f"couplings are not the 2L^2 periodic bonds of an L={L} lattice")

    @cached_property
    def bond_i(self) -> np.ndarray:
        return np.array([b[0] for b in self.couplings], dtype=np.int64)

    @cached_property
    def bond_j(self) -> np.ndarray:
        return np.array([b[1] for b in self.couplings], dtype=np.int64)

    @cached_property
    def bond_J(self) -> np.ndarray:
        return np.array([b[2] for b in self.couplings], dtype=np.float64)

    @cached_property
    def adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR adjacency ``(indptr, neighbours, J)``; parallel bonds appear twice."""
        n = self.n_spins
        src = np.concatenate([self.bond_i, self.bond_j])
        dst = np.concatenate([self.bond_j, self.bond_i])
        J = np.concatenate([self.bond_J, self.bond_J])
        order = np.argsort(src, kind="stable")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        return np.cumsum(indptr), dst[order].astype(np.int64), J[order]

    @cached_property
    def is_integer(self) -> bool:
        vals = np.append(self.bond_J, self.field_h)
        return bool(np.all(vals == np.round(vals)))

    def diagonal(self) -> np.ndarray:
        """Energies of all ``2^N`` basis states, indexed by bit pattern."""
        if self.n_spins > 24:
            raise CapabilityError(f"diagonal of {self.n_spins} spins is too large (max 24)")
        return self._diagonal

    @cached_property
    def _diagonal(self) -> np.ndarray:
        return energies_of_indices(self, np.arange(1 << self.n_spins, dtype=np.int64))


class CapabilityError(RuntimeError):
    """A requested size exceeds what a dense or exhaustive method supports."""


def _as_spins(problem: IsingProblem, config) -> np.ndarray:
    if isinstance(config, SpinConfiguration):
        if config.n != problem.n_spins:
            raise ValueError(f"configuration has {config.n} spins, problem has {problem.n_spins}")
        return config.spins()
    arr = np.asarray(config)
    if arr.shape[-1] != problem.n_spins:
        raise ValueError(f"configuration has {arr.shape[-1]} spins, problem has {problem.n_spins}")
    return arr


def energy(problem: IsingProblem, config) -> float | np.ndarray:
    """Classical energy of a configuration (or a stack of +/-1 rows)."""
    s = _as_spins(problem, config).astype(np.float64)
    e = -(s[..., problem.bond_i] * s[..., problem.bond_j]) @ problem.bond_J
    e = e - problem.field_h * s.sum(axis=-1)
    return float(e) if np.ndim(e) == 0 else e


def energies_of_indices(problem: IsingProblem, idx: np.ndarray) -> np.ndarray:
    """Energies of basis states given as integer bit patterns (N <= 62)."""
    idx = np.asarray(idx, dtype=np.int64)
    e = np.zeros(idx.shape, dtype=np.float64)
    for i, j, J in problem.couplings:
        anti = ((idx >> i) ^ (idx >> j)) & 1
        e -= J * (1 - 2 * anti)
    if problem.field_h:
        ups = np.zeros(idx.shape, dtype=np.int64)
        for i in range(problem.n_spins):
            ups += (idx >> i) & 1
        e -= problem.field_h * (2 * ups - problem.n_spins)
    return e


def local_field(problem: IsingProblem, spins: np.ndarray, site: int) -> float:
    indptr, nbr, J = problem.adjacency
    lo, hi = indptr[site], indptr[site + 1]
    return float(J[lo:hi] @ spins[nbr[lo:hi]]) + problem.field_h


def delta_energy(problem: IsingProblem, config, site: int) -> float:
    """Energy change from flipping ``site``; O(degree)."""
    if not 0 <= site < problem.n_spins:
        raise IndexError(f"site {site} out of range for {problem.n_spins} spins")
    s = _as_spins(problem, config)
    return 2.0 * float(s[site]) * local_field(problem, s, site)


def free_spin_count(problem: IsingProblem, config) -> int:
    """Number of spins whose flip leaves the energy unchanged."""
    s = _as_spins(problem, config)
    tol = 0.0 if problem.is_integer else FREE_SPIN_TOL
    return sum(abs(delta_energy(problem, s, i)) <= tol for i in range(problem.n_spins))


def _lattice_pairs(L: int) -> list[tuple[int, int]]:
    pairs = []
    for y in range(L):
        for x in range(L):
            s = y * L + x
            for t in (y * L + (x + 1) % L, ((y + 1) % L) * L + x):
                pairs.append((min(s, t), max(s, t)))
    return pairs


def _lattice_bonds(L: int, horizontal, vertical) -> list[tuple[int, int, float]]:
    """Bonds in (right, down) order per site; callables give J from (x, y)."""
    bonds = []
    for y in range(L):
        for x in range(L):
            s = y * L + x
            right = y * L + (x + 1) % L
            down = ((y + 1) % L) * L + x
            bonds.append((min(s, right), max(s, right), horizontal(x, y)))
            bonds.append((min(s, down), max(s, down), vertical(x, y)))
    return bonds


def build_villain(L: int) -> IsingProblem:
    """Fully frustrated Villain model: horizontal bonds alternate in sign row by row."""
    if L < 2 or L % 2:
        raise ValueError(f"Villain lattice needs an even L >= 2, got {L}")
    bonds = _lattice_bonds(L, lambda x, y: (-1.0) ** y, lambda x, y: 1.0)
    return IsingProblem(L * L, tuple(bonds), 0.0, Lattice(L), "villain")


def build_pm_j(L: int, seed: int) -> IsingProblem:
    if L < 2:
        raise ValueError("L must be >= 2")
    signs = np.random.default_rng(seed).choice([-1.0, 1.0], size=2 * L * L)
    it = iter(signs)
    bonds = _lattice_bonds(L, lambda x, y: next(it), lambda x, y: next(it))
    return IsingProblem(L * L, tuple(bonds), 0.0, Lattice(L), "pmj")


def build_gaussian(L: int, h: float, seed: int) -> IsingProblem:
    if L < 2:
        raise ValueError("L must be >= 2")
    vals = np.random.default_rng(seed).standard_normal(2 * L * L)
    it = iter(vals)
    bonds = _lattice_bonds(L, lambda x, y: float(next(it)), lambda x, y: float(next(it)))
    return IsingProblem(L * L, tuple(bonds), h, Lattice(L), "gaussian")


# Antiferromagnetic triangle on 0-1-2 with a ferromagnetic pendant on 2 and an
# antiferromagnetic pendant on 1. One reversal pair of ground states has no free
# spin; the other two pairs are linked by flipping spin 0.
FIVE_SPIN_BONDS = ((0, 1, -1.0), (1, 2, -1.0), (0, 2, -1.0), (2, 3, 1.0), (1, 4, -1.0))


def build_five_spin(h: float = 0.0) -> IsingProblem:
    return IsingProblem(5, FIVE_SPIN_BONDS, h, None, "five_spin")


def build_problem(kind: str, L: int = 0, h: float = 0.0, seed: int = 0) -> IsingProblem:
    if kind == "villain":
        return build_villain(L)
    if kind == "pmj":
        return build_pm_j(L, seed)
    if kind == "gaussian":
        return build_gaussian(L, h, seed)
    if kind == "five_spin":
        return build_five_spin(h)
    raise ValueError(f"unknown model type {kind!r}")


def known_ground_energy(problem: IsingProblem) -> float | None:
    """Closed-form ground energy where one exists (Villain: ``-L^2``)."""
    if problem.name == "villain" and problem.lattice is not None:
        return -float(problem.lattice.L ** 2)
    return None


def plaquette_products(problem: IsingProblem) -> np.ndarray:
    """Product of the four bond signs around each plaquette, shape (L, L)."""
    if problem.lattice is None:
        raise ValueError("plaquettes need lattice metadata")
    L = problem.lattice.L
    bonds = problem.couplings
    # bonds were built in (right, down) order per site
    h = np.array([bonds[2 * s][2] for s in range(L * L)]).reshape(L, L)
    v = np.array([bonds[2 * s + 1][2] for s in range(L * L)]).reshape(L, L)
    out = np.empty((L, L))
    for y in range(L):
        for x in range(L):
            out[y, x] = np.sign(h[y, x] * h[(y + 1) % L, x] * v[y, x] * v[y, (x + 1) % L])
    return out


def write_edge_list(problem: IsingProblem, path: str | Path) -> None:
    lines = [f"{problem.n_spins} {problem.field_h!r}"]
    lines += [f"{i} {j} {J!r}" for i, j, J in problem.couplings]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path, lattice: Lattice | None = None, name: str = "") -> IsingProblem:
    rows = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise ValueError(f"{path}: header must be 'n_spins h'")
    n, h = int(rows[0][0]), float(rows[0][1])
    bonds = []
    for k, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ValueError(f"{path}:{k}: expected 'i j J'")
        bonds.append((int(row[0]), int(row[1]), float(row[2])))
    return IsingProblem(n, tuple(bonds), h, lattice, name)
