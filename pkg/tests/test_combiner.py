import pytest

from fourcolor.cartwheel import CENTER, TAIL_TOP, center_darts_by_degree, generate_cartwheel, with_ranges
from fourcolor.combiner import (CombineReport, check_7triangle, check_deg7, check_deg8, combine_each_cartwheel,
                                delete_degree_from_k_to_9, successor_distances, t73)
from fourcolor.configlib import blocked_by


def ranged(C, v, lo, hi):
    L, H = list(C.lo), list(C.hi)
    L[v], H[v] = lo, hi
    return with_ranges(C, L, H)


def test_fixed_degree_k_removes_and_tail_collapses():
    W = generate_cartwheel(7, [5, 6, 7, 5, 6, 8, 5])
    outer = W.Z.n_vertices - 1
    fixed9 = ranged(W, outer, 9, 9)
    tail8 = ranged(W, outer, 8, TAIL_TOP)
    kept = delete_degree_from_k_to_9([W, fixed9, tail8], 9)
    assert len(kept) == 2
    assert kept[1].range(outer) == (8, 8)
    assert kept[0].range(outer) == (5, TAIL_TOP)


def test_triangle_pattern():
    entry = t73()
    assert entry.conf.Z.n_vertices == 3
    assert all(entry.conf.range(v) == (7, 7) for v in range(3))


def test_t73_blocks_a_wheel_with_two_adjacent_sevens():
    assert blocked_by(generate_cartwheel(7, [7, 7, 5, 5, 5, 5, 5]), CENTER, [t73()])
    assert not blocked_by(generate_cartwheel(7, [7, 5, 7, 5, 5, 5, 5]), CENTER, [t73()])


@pytest.mark.parametrize("word", [(7, 5, 7, 5, 5, 6, 5), (7, 7, 5, 7, 5, 6, 5), (5, 5, 5, 5, 5, 5, 7)])
def test_successor_distances_sum_to_the_center_degree(word):
    C = generate_cartwheel(7, list(word))
    darts = center_darts_by_degree(C)[7]
    dist = successor_distances(C, darts)
    assert sum(dist) == 7
    assert len(dist) == len(darts)


def test_empty_pool_passes_every_check(dbar):
    for check in (check_deg8, check_7triangle, check_deg7):
        report = check([], dbar)
        assert isinstance(report, CombineReport) and report.passed and report.examined == 0


def test_glued_images_identify_the_requested_darts(dbar):
    C = generate_cartwheel(7, [7, 5, 6, 5, 6, 5, 6])
    W = generate_cartwheel(7, [7, 5, 6, 5, 6, 6, 6])
    e = C.Z.rev[center_darts_by_degree(C)[7][0]]
    for image, hom in combine_each_cartwheel(C, e, [W], dbar):
        assert image.is_valid(), image.violations()
        assert not blocked_by(image, hom.vmap[CENTER], dbar)
        assert len(hom.dmap) == C.Z.n_darts
        for v in range(C.Z.n_vertices):
            lo, hi = C.range(v)
            ilo, ihi = image.range(hom.vmap[v])
            assert lo <= ilo and ihi <= hi


def test_blocking_everything_leaves_no_combination(dbar, conf):
    from fourcolor.configlib import build_Dbar

    C = generate_cartwheel(7, [7, 5, 6, 5, 6, 5, 6])
    e = C.Z.rev[center_darts_by_degree(C)[7][0]]
    everything = build_Dbar([conf("deg5")])
    assert combine_each_cartwheel(C, e, [C], everything) == []


def test_selection_restricts_the_examined_cartwheels(survivors7, dbar):
    few = survivors7[:6]
    report = check_7triangle(few, dbar, select=lambda i: i == 0)
    assert report.examined <= 1
