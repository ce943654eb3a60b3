from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phs.borel import (
    FinitePartition,
    FiniteUniverse,
    GeneratorFamily,
    atoms,
    ball_generators,
    compare_partitions,
    h_generators,
    matched_grids,
    misra_check,
    preimage_balls,
    random_universe,
)
from phs.hilbert import random_units
from phs.projector import rho_n, transition_probability

E1, E2 = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)


def test_universe_rejects_duplicate_rays():
    with pytest.raises(ValueError):
        FiniteUniverse(np.array([E1, 1j * E1]))


def test_partition_validation():
    with pytest.raises(ValueError):
        FinitePartition(3, ((0, 1),))
    with pytest.raises(ValueError):
        FinitePartition(2, ((0, 1), (1,)))
    p = FinitePartition(3, ((2,), (1, 0)))
    assert p.blocks == ((0, 1), (2,)) and p.sigma_size == 4


def test_atoms_examples():
    assert atoms(3, GeneratorFamily(())).blocks == ((0, 1, 2),)
    assert atoms(3, GeneratorFamily(({0, 1}, {1, 2}))).blocks == ((0,), (1,), (2,))


family = st.lists(st.frozensets(st.integers(0, 11)), max_size=8)


@given(family, st.randoms(use_true_random=False))
def test_atoms_set_determined(sets, rnd):
    shuffled = list(sets) + sets[: len(sets) // 2]
    rnd.shuffle(shuffled)
    assert atoms(12, GeneratorFamily(tuple(sets))) == atoms(12, GeneratorFamily(tuple(shuffled)))


@given(family, st.frozensets(st.integers(0, 11)))
def test_adding_generator_only_refines(sets, extra):
    before = atoms(12, GeneratorFamily(tuple(sets)))
    after = atoms(12, GeneratorFamily(tuple(sets) + (extra,)))
    assert after.refines(before)


@given(family)
def test_atoms_agree_with_pairwise_separation(sets):
    part = atoms(12, GeneratorFamily(tuple(sets)))
    lab = part.labels()
    for i in range(12):
        for j in range(12):
            separated = any((i in s) != (j in s) for s in sets)
            assert (lab[i] != lab[j]) == separated


def test_atoms_shuffled_balls(rng):
    u = random_universe(4, 20, rng)
    gen = ball_generators(u, random_units(4, 40, rng), [0.6])
    perm = rng.permutation(len(gen))
    assert atoms(u, gen) == atoms(u, GeneratorFamily(tuple(gen.sets[i] for i in perm)))


def test_ball_generators_examples(rng):
    u = random_universe(3, 20, rng)
    assert all(s == frozenset(range(20)) for s in ball_generators(u, u.points[:3], [2.0]).sets)
    orth = FiniteUniverse(np.array([[0, 1, 0], [0, 0, 1]], dtype=complex))
    assert len(ball_generators(orth, [[1, 0, 0]], [1.0])) == 0
    with pytest.raises(ValueError):
        ball_generators(u, u.points[:1], [0.0])


def test_ball_generators_brute_force(rng):
    u = random_universe(4, 20, rng)
    centers = random_units(4, 10, rng)
    radii = [0.25, 0.5, 0.75]
    expected = []
    for c in centers:
        for r in radii:
            s = frozenset(i for i in range(20) if rho_n(u.points[i], c) < r)
            if s:
                expected.append(s)
    assert list(ball_generators(u, centers, radii).sets) == expected


def test_h_generators_examples(rng):
    u = random_universe(3, 15, rng)
    full = h_generators(u, u.points[:2], [1], 1)
    assert all(s == frozenset(range(15)) for s in full.sets)
    orth = FiniteUniverse(np.array([[0, 1, 0], [0, 0, 1]], dtype=complex))
    assert len(h_generators(orth, [[1, 0, 0]], [1], 2)) == 0
    with pytest.raises(ValueError):
        h_generators(u, u.points[:1], [1], 0)
    with pytest.raises(ValueError):
        h_generators(u, u.points[:1], [1.5], 1)


def test_h_generators_brute_force(rng):
    u = random_universe(4, 20, rng)
    qs = [Fraction(l, 10) for l in range(11)]
    ms = [2, 5, 10]
    probes = random_units(4, 20, rng)
    expected = []
    for Q in probes:
        for q in qs:
            for m in ms:
                s = frozenset(i for i in range(20) if abs(transition_probability(u.points[i], Q) - float(q)) < 1 / m)
                if s:
                    expected.append(s)
    assert list(h_generators(u, probes, qs, ms).sets) == expected


def test_misra_examples():
    single = FiniteUniverse(E1[None, :])
    res = misra_check(single, GeneratorFamily(()), GeneratorFamily(()))
    assert res["equal"] and res["xi_atoms"].blocks == ((0,),)

    u = FiniteUniverse(np.array([E1, E2]))
    xi = ball_generators(u, [E1], [0.5])
    sigma = h_generators(u, [E1], [1], 2)
    assert xi.sets == (frozenset({0}),) and sigma.sets == (frozenset({0}),)
    res = misra_check(u, xi, sigma)
    assert res["equal"] and res["sigma_atoms"].to_list() == [[0], [1]]


def test_misra_matched_grid_m_2_5_10(rng):
    u = random_universe(4, 20, rng)
    xi, sigma, _ = matched_grids(u, 10, ms=[2, 5, 10])
    res = misra_check(u, xi, sigma)
    assert res["equal"] and len(res["xi_atoms"]) == 20


def test_h_generators_separate_with_q1_m2(rng):
    u = random_universe(4, 20, rng)
    assert len(atoms(u, h_generators(u, u.points, [1], 2))) == 20


def test_preimage_balls_make_sigma_measurable(rng):
    u = random_universe(4, 20, rng)
    probes = u.points[:2]
    qs = [Fraction(l, 10) for l in range(11)]
    xi = preimage_balls(u, probes, qs, [2])
    sigma = h_generators(u, probes, qs, [2])
    assert atoms(u, xi).refines(atoms(u, sigma))


def test_compare_partitions():
    fine = FinitePartition(3, ((0,), (1,), (2,)))
    coarse = FinitePartition(3, ((0, 1), (2,)))
    other = FinitePartition(3, ((0,), (1, 2)))
    assert compare_partitions(fine, fine) == "equal"
    assert compare_partitions(fine, coarse) == "sigma_coarser"
    assert compare_partitions(coarse, fine) == "xi_coarser"
    assert compare_partitions(coarse, other) == "incomparable"
