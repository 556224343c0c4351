import itertools
import json
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from fourcolor.reducibility import (DReducible, NotDReducible, OddLength, all_planar_kempe_chains,
                                    all_ring_colorings, all_ring_colorings_dfs, check_d_reducibility,
                                    check_d_reducibility_reference, decode, proper_ring_colorings)
from fourcolor.configlib import free_completion

import oracles

FROZEN = json.loads((Path(__file__).parent / "data" / "frozen_oracles.json").read_text())


def raw_histogram(table) -> Counter:
    """Expand canonical classes back to raw colorings (all color permutations)."""
    hist: Counter = Counter()
    for code, level in table.levels.items():
        phi = decode(code, table.ring_size)
        orbit = {tuple(p[c] for c in phi) for p in itertools.permutations(range(4))}
        hist[level] += len(orbit)
    return hist


@pytest.mark.parametrize("name", ["deg3", "deg4", "deg5", "birkhoff"])
def test_levels_match_the_brute_force_fixed_point(conf, name):
    want = FROZEN["configs"][name]
    result = check_d_reducibility(conf(name))
    assert bool(result) == want["d_reducible"]
    hist = raw_histogram(result.table)
    assert {str(k): v for k, v in sorted(hist.items())} == want["level_histogram"]
    if want["d_reducible"]:
        assert result.max_level == want["max_level"]


@pytest.mark.parametrize("name", ["deg3", "deg4", "deg5", "birkhoff"])
def test_extendible_and_proper_counts(conf, name):
    want = FROZEN["configs"][name]
    fc = free_completion(conf(name))
    assert len(all_ring_colorings(fc)) == want["extendible"]
    assert all_ring_colorings(fc) == all_ring_colorings_dfs(fc)
    assert len(proper_ring_colorings(fc.ring_size, canonical=False)) == want["proper_ring_colorings"]


@pytest.mark.parametrize("name", ["deg4", "deg5", "birkhoff"])
def test_dense_and_sparse_membership_agree(conf, name):
    a = check_d_reducibility(conf(name), dense=True)
    b = check_d_reducibility(conf(name), dense=False)
    c = check_d_reducibility(conf(name), symmetry=False)
    assert a.table.levels == b.table.levels == c.table.levels


@pytest.mark.parametrize("name", ["deg3", "deg4", "deg5"])
def test_reference_rendition_agrees(conf, name):
    ok, level = check_d_reducibility_reference(conf(name))
    assert ok == FROZEN["configs"][name]["d_reducible"]
    assert {str(k): v for k, v in sorted(Counter(level.values()).items())} == \
        FROZEN["configs"][name]["level_histogram"]


def test_degree_five_is_stuck(conf):
    result = check_d_reducibility(conf("deg5"))
    assert isinstance(result, NotDReducible) and result.stuck_colorings


@pytest.mark.parametrize("n", [0, 2, 4, 6, 8, 10, 12])
def test_chain_structures_are_counted_by_catalan_numbers(n):
    assert len(all_planar_kempe_chains(n)) == FROZEN["catalan"][str(n)]


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_chain_structures_are_exactly_the_non_crossing_pairings_of_sides(n):
    """Each structure is a non-crossing partition where blocks alternate sides."""
    seen = set()
    for part in all_planar_kempe_chains(n):
        classes = [sorted(c) for c in part.classes()]
        assert oracles.non_crossing(classes)
        for c in classes:
            assert len({b % 2 for b in c}) == 1
        seen.add(frozenset(frozenset(c) for c in classes))
    assert len(seen) == len(all_planar_kempe_chains(n))


@pytest.mark.parametrize("n", [1, 3, 7])
def test_odd_lengths_are_rejected(n):
    with pytest.raises(OddLength):
        all_planar_kempe_chains(n)


def test_franklin_is_not_d_reducible(conf):
    result = check_d_reducibility(conf("franklin"))
    assert isinstance(result, NotDReducible)
    assert result.seconds < 60
