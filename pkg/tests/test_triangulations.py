import pytest
from hypothesis import given, settings, strategies as st

from fourcolor.triangulations import (apollonian, faces_of, flip, icosahedron, is_simple_triangulation, k4,
                                      octahedron, random_triangulation, read_rot, rotations_from_faces, stack,
                                      write_rot)

import oracles


@pytest.mark.parametrize("make,n,degree", [(k4, 4, 3), (octahedron, 6, 4), (icosahedron, 12, 5)])
def test_platonic_solids(make, n, degree):
    rot = make()
    assert len(rot) == n and is_simple_triangulation(rot)
    assert all(len(r) == degree for r in rot)


def test_faces_rebuild_the_rotations():
    rot = icosahedron()
    assert rotations_from_faces(12, faces_of(rot)) == rot


def test_inconsistent_orientation_is_rejected():
    with pytest.raises(ValueError):
        rotations_from_faces(4, [(0, 1, 2), (0, 1, 2)])


def test_stack_adds_a_degree_three_vertex():
    rot = k4()
    face = faces_of(rot)[0]
    x = stack(rot, face)
    assert len(rot[x]) == 3 and is_simple_triangulation(rot)


def test_flip_keeps_a_triangulation_and_refuses_degree_three():
    rot = octahedron()
    a, b = 0, rot[0][0]
    assert flip(rot, a, b)
    assert is_simple_triangulation(rot) and b not in rot[a]
    rot = k4()
    assert not flip(rot, 0, rot[0][0])


@settings(max_examples=30, deadline=None)
@given(n=st.integers(4, 200), seed=st.integers(0, 10**6))
def test_generators_give_simple_triangulations(n, seed):
    for rot in (apollonian(n, seed), random_triangulation(n, seed)):
        assert len(rot) == n and is_simple_triangulation(rot)
        assert sum(map(len, rot)) == 2 * (3 * n - 6)


def test_generators_are_seeded():
    assert random_triangulation(100, 4) == random_triangulation(100, 4)
    assert random_triangulation(100, 4) != random_triangulation(100, 5)


def test_small_triangulations_are_four_colorable_by_brute_force():
    for seed in range(5):
        assert oracles.brute_force_four_colorable(random_triangulation(14, seed))


def test_text_round_trip():
    rot = random_triangulation(30, 1)
    assert read_rot(write_rot(rot)) == rot
