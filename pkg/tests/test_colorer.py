import random

import pytest
from hypothesis import given, settings, strategies as st

from fourcolor.colorer import (ColorerConfig, ColoringStats, InvalidInput, ObstructingCycle, build_library,
                               degree_bounded_ball, find_local_obstructing_cycle, find_reduction_sets, four_color,
                               is_obstructing, kempe_chains, kempe_change, make_reducer, read_coloring,
                               recurse_obstructions, ring_partition, verify_coloring, verify_non_touching,
                               write_coloring, x4_reduce, x5_reduce)
from fourcolor.discharging import load_rules
from fourcolor.reducibility import check_d_reducibility, decode
from fourcolor.triangulations import apollonian, icosahedron, k4, octahedron, random_triangulation, stack

import oracles
from conftest import SAMPLE_RULES
from instances import random_disk


@pytest.mark.parametrize("make", [k4, octahedron, icosahedron])
def test_small_solids(make):
    rot = make()
    col = four_color(rot)
    assert verify_coloring(rot, col)


@pytest.mark.parametrize("prefer", ["reducibles", "obstructions", "larger"])
def test_every_preference_colors_random_graphs(prefer):
    for seed in range(3):
        rot = random_triangulation(300, seed)
        stats = ColoringStats()
        col = four_color(rot, config=ColorerConfig(prefer=prefer), stats=stats)
        assert verify_coloring(rot, col)
        for active, improved, expectation in stats.rounds:
            assert improved >= expectation


def test_stacked_graphs_are_colored_through_cycle_cuts():
    rot = apollonian(200, 3)
    stats = ColoringStats()
    col = four_color(rot, config=ColorerConfig(prefer="obstructions"), stats=stats)
    assert verify_coloring(rot, col) and stats.cycle_cuts > 0


def test_invalid_inputs_are_rejected():
    with pytest.raises(InvalidInput):
        four_color([[1], [0]] + [[0, 1]])
    bad = octahedron()
    bad[0] = list(reversed(bad[0]))
    with pytest.raises(InvalidInput):
        four_color(bad)


def test_verifier_catches_bad_colorings():
    rot = k4()
    assert not verify_coloring(rot, [1, 1, 2, 3])
    assert not verify_coloring(rot, [1, 2, 3, 5])
    assert not verify_coloring(rot, [1, 2, 3])


def test_coloring_text_round_trip():
    col = [1, 2, 3, 4, 1]
    assert read_coloring(write_coloring(col)) == col


@settings(max_examples=40, deadline=None)
@given(n=st.integers(6, 80), seed=st.integers(0, 10**6), split=st.integers(1, 3), data=st.data())
def test_kempe_changes_keep_colorings_proper(n, seed, split, data):
    rot = random_triangulation(n, seed)
    col = four_color(rot)
    index = kempe_chains(rot, col, split)
    chains = data.draw(st.sets(st.integers(0, max(index.count - 1, 0))))
    new = kempe_change(col, index, chains)
    assert verify_coloring(rot, new)
    assert kempe_change(col, index, []) == col
    # each chain is a connected two-colored component
    pair = {1, 1 + split}
    for c in range(index.count):
        members = index.members(c)
        colors = {col[x] for x in members}
        assert colors <= pair or colors <= {1, 2, 3, 4} - pair
        assert set(oracles.bichain(rot, col, members[0], *sorted(colors | (pair if colors <= pair else
                                                                             {1, 2, 3, 4} - pair)))) == set(members)


def test_icosahedron_has_no_obstructing_cycle():
    rot = icosahedron()
    assert all(find_local_obstructing_cycle(rot, v, 2) is None for v in range(12))


def test_octahedron_equator_is_found():
    rot = octahedron()
    cyc = find_local_obstructing_cycle(rot, 0, 2)
    assert cyc is not None and len(cyc.cycle) == 4 and is_obstructing(rot, cyc.cycle)


def test_separating_triangle_is_found():
    rot = icosahedron()
    face = (0, rot[0][0], rot[0][1])
    x = stack(rot, face)
    cyc = find_local_obstructing_cycle(rot, 0, 2)
    assert cyc is not None and set(cyc.cycle) == set(face)
    assert cyc.interior == frozenset({x})


def test_facial_triangle_is_not_obstructing():
    rot = icosahedron()
    assert not is_obstructing(rot, (0, rot[0][0], rot[0][1]))


def test_degree_bounded_ball_stops_at_high_degree():
    rot = [list(r) for r in icosahedron()]
    ball = degree_bounded_ball(rot, 0, 1, cap=4)
    assert ball.inner == {0} and ball.boundary == frozenset(rot[0])


def test_reduction_sets_do_not_touch():
    rot = random_triangulation(500, 11)
    found = find_reduction_sets(rot, prefer="reducibles")
    assert found.kind == "reducibles" and verify_non_touching(rot, found.reducibles)


def test_accounting_mode_finds_something():
    rot = random_triangulation(400, 5)
    found = find_reduction_sets(rot, rules=load_rules(SAMPLE_RULES), mode="accounting")
    assert found.reducibles or found.cycles


def test_recursion_over_given_cycles():
    rot = apollonian(120, 9)
    cycles = []
    for v in range(len(rot)):
        c = find_local_obstructing_cycle(rot, v, 2)
        if c is not None:
            cycles.append(c)
    assert cycles
    col = recurse_obstructions(rot, cycles)
    assert verify_coloring(rot, col)


@pytest.mark.parametrize("name", ["deg3", "deg4", "birkhoff"])
def test_reducer_tables_agree_with_the_checker(conf, name):
    c = conf(name)
    red = make_reducer(c)
    table = check_d_reducibility(c).table
    for code, level in table.levels.items():
        assert red.level(decode(code, c.ring_size)) == level
    for code in red.witnesses:
        phi = decode(code, c.ring_size)
        ext = red.extension(phi)
        full = list(phi) + [0] * len(c.interior)
        for v, col in ext.items():
            full[v] = col
        assert all(full[a] != full[b] for a, r in enumerate(c.rotations) for b in r if b != -1)


def test_library_keeps_only_reducible_members(conf, tmp_path):
    lib = build_library([conf("deg4"), conf("deg5")], cache_dir=tmp_path)
    assert [r.name for r in lib.reducers] == ["deg4"]
    assert set(lib.singles) == {3, 4, 5}
    again = build_library([conf("deg4")], cache_dir=tmp_path)
    assert again.reducers[0].levels == lib.reducers[0].levels


# -- the 4- and 5-ring procedures -------------------------------------------------------

def expected_family(R, case, j):
    if case == "iii":
        return oracles.ring_family(R, star=True)
    a = j - 1
    if R == 4:
        pair = (a, (a + 2) % 4)
        return oracles.ring_family(4, extra_edges=[pair]) if case == "i" else oracles.ring_family(4, identify=[pair])
    if case == "i":
        return oracles.ring_family(5, extra_edges=[(a, (a + 2) % 5), (a, (a + 3) % 5)])
    return oracles.ring_family(5, identify=[(a, (a + 2) % 5)])


def check_ring_outcome(H, ring, col, out, limit):
    if len(ring) == 4:
        assert out.colorings[0] == col
    assert out.kempe_changes <= limit
    for K in out.colorings:
        assert oracles.proper(H, K)
    got = {ring_partition([K[x] for x in ring]) for K in out.colorings}
    assert got == expected_family(len(ring), out.case, out.j)


def disks(ring_len, count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = random_disk(rng, ring_len)
        if d is None:
            continue
        if ring_len == 5 and len({d[2][x] for x in d[1]}) != 3:
            continue
        out.append(d)
    return out


def test_x4_on_random_disks():
    seen = set()
    for H, ring, col in disks(4, 40, 1):
        out = x4_reduce(H, ring, col)
        check_ring_outcome(H, ring, col, out, 1)
        seen.add(out.case)
    assert seen == {"i", "ii"}


def test_x5_on_random_disks():
    seen = set()
    for H, ring, col in disks(5, 40, 2):
        out = x5_reduce(H, ring, col)
        check_ring_outcome(H, ring, col, out, 6)
        seen.add(out.case)
    assert seen


def test_two_colored_four_ring_gives_case_ii():
    # wheel with four spokes: ring 0..3, hub 4
    H = [[1, 4, 3], [2, 4, 0], [3, 4, 1], [0, 4, 2], [0, 1, 2, 3]]
    out = x4_reduce(H, [0, 1, 2, 3], [1, 2, 1, 2, 3])
    assert out.case == "ii" and out.kempe_changes == 1


def test_four_colored_ring_with_a_diagonal_chain_gives_case_i_with_j1():
    # ring 0..3 with the chord 0-2 so v1 and v3 sit on one chain
    H = [[1, 2, 3], [2, 0], [3, 0, 1], [0, 2]]
    out = x4_reduce(H, [0, 1, 2, 3], [1, 2, 3, 4])
    assert out.case == "i" and out.j == 1


def test_x5_needs_three_ring_colors():
    H = [[1, 5, 4], [2, 5, 0], [3, 5, 1], [4, 5, 2], [0, 5, 3], [0, 1, 2, 3, 4]]
    with pytest.raises(ValueError):
        x5_reduce(H, [0, 1, 2, 3, 4], [1, 2, 3, 4, 2, 1])
