import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from annealstats.groundstates import (
    GroundStateSet,
    HintError,
    HitHistogram,
    enumerate_exhaustive,
    enumerate_ground_states,
    enumerate_lattice,
    is_canonical,
    lattice_ground_energy,
    lookup,
    read_ground_states,
    write_ground_states,
)
from annealstats.model import (
    CapabilityError,
    IsingProblem,
    SpinConfiguration,
    build_five_spin,
    build_gaussian,
    build_pm_j,
    build_villain,
    energy,
)

from conftest import all_spin_states, brute_energy


def oracle_ground_states(problem):
    """Pure-python scan: minimum energy and the sorted bit patterns reaching it."""
    n = problem.n_spins
    es = {k: brute_energy(n, problem.couplings, problem.field_h, s) for k, s in all_spin_states(n)}
    e0 = min(es.values())
    return e0, sorted(k for k, e in es.items() if abs(e - e0) <= 1e-9)


def test_two_spin_antiferromagnet():
    gs = enumerate_exhaustive(IsingProblem(2, ((0, 1, -1.0),)))
    assert gs.e0 == -1.0 and len(gs) == 1
    assert gs.states[0] == SpinConfiguration.from_spins([1, -1])


@pytest.mark.parametrize("L,count", [(2, 4), (4, 136)])
def test_villain_degeneracy(L, count):
    gs = enumerate_lattice(build_villain(L))
    assert len(gs) == count
    assert gs.e0 == -L * L


def test_villain_ground_energy_by_transfer_sweep():
    for L in (2, 4, 6, 8):
        assert lattice_ground_energy(build_villain(L)) == -L * L


def test_five_spin_ground_states():
    p = build_five_spin()
    full = enumerate_exhaustive(p, modulo_reversal=False)
    assert full.e0 == -3.0
    assert [s.bits for s in full.states] == [2, 3, 14, 17, 28, 29]
    reduced = enumerate_exhaustive(p)
    assert [s.bits for s in reduced.states] == [3, 17, 29]
    assert all(is_canonical(s) for s in reduced.states)


@pytest.mark.parametrize("seed", range(3))
def test_exhaustive_matches_python_oracle(seed):
    rng = np.random.default_rng(seed)
    bonds = tuple((i, j, float(rng.choice([-1.0, 1.0]))) for i in range(8) for j in range(i + 1, 8) if rng.random() < 0.4)
    p = IsingProblem(8, bonds)
    e0, bits = oracle_ground_states(p)
    gs = enumerate_exhaustive(p, modulo_reversal=False, chunk=37)  # odd chunk exercises the merge
    assert gs.e0 == e0
    assert [s.bits for s in gs.states] == bits


LATTICES = (
    [build_villain(L) for L in (2, 4)]
    + [build_pm_j(L, s) for L in (2, 3, 4) for s in range(4)]
    + [build_gaussian(L, 0.0, s) for L in (3, 4) for s in range(2)]
)


@pytest.mark.parametrize("problem", LATTICES, ids=lambda p: f"{p.name}-L{p.lattice.L}")
def test_lattice_sweep_equals_exhaustive_scan(problem):
    for mod in (True, False):
        a = enumerate_lattice(problem, modulo_reversal=mod)
        b = enumerate_exhaustive(problem, modulo_reversal=mod)
        assert a.e0 == pytest.approx(b.e0, abs=1e-12)
        assert a.states == b.states


@pytest.mark.parametrize("seed", range(3))
def test_lattice_sweep_with_field(seed):
    p = build_gaussian(4, 0.4, seed)
    a = enumerate_lattice(p, modulo_reversal=False)
    b = enumerate_exhaustive(p, modulo_reversal=False)
    assert a.states == b.states
    with pytest.raises(ValueError):
        enumerate_lattice(p)  # no reversal symmetry with a field


def test_hint_handling():
    p = build_villain(4)
    assert len(enumerate_lattice(p, e0_hint=-16.0)) == 136
    assert len(enumerate_lattice(p, e0_hint=-10.0)) == 136  # hint above e0 is harmless
    with pytest.raises(HintError):
        enumerate_lattice(p, e0_hint=-17.0)


def test_capability_limits():
    with pytest.raises(CapabilityError):
        enumerate_lattice(build_villain(10))
    with pytest.raises(CapabilityError):
        enumerate_ground_states(build_pm_j(10, 0))
    with pytest.raises(CapabilityError):
        enumerate_exhaustive(IsingProblem(25, ((0, 1, 1.0),)))
    with pytest.raises(CapabilityError):
        enumerate_lattice(build_villain(8), max_frontier=1000)


def test_lookup():
    p = build_villain(4)
    gs = enumerate_lattice(p)
    for k, s in enumerate(gs.states):
        assert lookup(gs, s) == k
        assert gs.lookup(s.global_flip()) == k
        assert energy(p, s) == -16.0
    assert gs.lookup(SpinConfiguration.all_up(16)) is not None
    assert gs.lookup(SpinConfiguration.all_up(16).flip(0)) is None  # costs 8


@given(k=st.integers(0, 135))
def test_lookup_of_reversal_partner_without_reduction(k):
    gs = enumerate_lattice(build_villain(4), modulo_reversal=False)
    assert len(gs) == 272
    s = gs.states[2 * k]
    assert gs.lookup(s) is not None and gs.lookup(s.global_flip()) is not None


def test_roundtrip(tmp_path):
    gs = enumerate_lattice(build_villain(4))
    path = tmp_path / "gs.txt"
    write_ground_states(gs, path)
    assert path.read_text().splitlines()[0] == "16 -16.0 136 1"
    back = read_ground_states(path)
    assert back == gs and back.index == gs.index


def test_read_rejects_count_mismatch(tmp_path):
    path = tmp_path / "gs.txt"
    path.write_text("4 -4.0 2 1\n3\n")
    with pytest.raises(ValueError):
        read_ground_states(path)


def test_duplicate_states_rejected():
    s = SpinConfiguration(1, 2)
    with pytest.raises(ValueError):
        GroundStateSet(2, -1.0, (s, s), False)


def test_hit_histogram_helpers():
    h = HitHistogram(np.array([3, 0, 5, 3]), misses=2)
    assert h.total == 13
    assert np.allclose(h.relative(), [3 / 11, 0, 5 / 11, 3 / 11])
    assert list(h.ranking()) == [2, 0, 3, 1]
    assert np.all(HitHistogram(np.zeros(3, dtype=int)).relative() == 0)
