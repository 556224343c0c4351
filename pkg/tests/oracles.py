"""Brute-force reference computations that share no code with the package.

They read only plain rotation lists (ring vertices first) and dart tables.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence


def neighbour_sets(rotations: Sequence[Sequence[int]]) -> list[set]:
    return [{x for x in r if x != -1} for r in rotations]


def extendible_ring_colorings(rotations: Sequence[Sequence[int]], ring: int) -> set[tuple]:
    """All ring colorings extending to a proper 4-coloring of the whole graph."""
    nb = neighbour_sets(rotations)
    n = len(rotations)
    out = set()
    for ring_col in itertools.product(range(4), repeat=ring):
        if any(ring_col[p] == ring_col[q] for p in range(ring) for q in nb[p] if q < ring):
            continue
        col = list(ring_col) + [-1] * (n - ring)

        def fill(i):
            if i == n:
                return True
            for c in range(4):
                if all(col[j] != c for j in nb[i] if j < i or j < ring):
                    col[i] = c
                    if fill(i + 1):
                        return True
            col[i] = -1
            return False

        if fill(ring):
            out.add(ring_col)
    return out


def proper_cycle_colorings(R: int) -> list[tuple]:
    return [c for c in itertools.product(range(4), repeat=R) if all(c[i] != c[(i + 1) % R] for i in range(R))]


def set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def non_crossing(blocks: list[list[int]]) -> bool:
    for A, B in itertools.combinations(blocks, 2):
        for a1, a2 in itertools.combinations(sorted(A), 2):
            for b1, b2 in itertools.combinations(sorted(B), 2):
                if a1 < b1 < a2 < b2 or b1 < a1 < b2 < a2:
                    return False
    return True


def non_crossing_partitions(n: int) -> list[list[list[int]]]:
    return [p for p in set_partitions(list(range(n))) if non_crossing(p)]


def d_reducibility_levels(rotations, ring: int) -> tuple[bool, dict[tuple, int]]:
    """Kempe fixed point straight from the definition on raw ring colorings.

    For a split ``{a, b} | {c, d}`` the ring is cut into maximal runs whose
    consecutive colors stay on one side; every non-crossing grouping of the
    runs of each side is a possible chain structure, and the coloring is
    classified when every structure admits some set of groups whose flip
    lands on an already classified coloring.
    """
    level = {c: 0 for c in extendible_ring_colorings(rotations, ring)}
    todo = [c for c in proper_cycle_colorings(ring) if c not in level]
    splits = [({0, 1}, {2, 3}), ({0, 2}, {1, 3}), ({0, 3}, {1, 2})]
    swap = [{0: 1, 1: 0, 2: 3, 3: 2}, {0: 2, 2: 0, 1: 3, 3: 1}, {0: 3, 3: 0, 1: 2, 2: 1}]
    rnd = 0
    while todo:
        rnd += 1
        known = set(level)
        newly = []
        for phi in todo:
            for (side_a, _), sw in zip(splits, swap):
                runs = _runs(phi, side_a)
                if runs is None:
                    continue
                if all(_some_flip_works(phi, runs, grouping, sw, known) for grouping in _groupings(phi, runs, side_a)):
                    newly.append(phi)
                    break
        if not newly:
            return False, level
        for phi in newly:
            level[phi] = rnd
        todo = [c for c in todo if c not in level]
    return True, level


def _runs(phi, side):
    R = len(phi)
    same = [(phi[i] in side) == (phi[(i + 1) % R] in side) for i in range(R)]
    if all(same):
        return [list(range(R))]
    start = same.index(False) + 1
    runs, cur = [], []
    for k in range(R):
        i = (start + k) % R
        cur.append(i)
        if not same[i]:
            runs.append(cur)
            cur = []
    return runs


def _groupings(phi, runs, side):
    inside = [k for k, r in enumerate(runs) if phi[r[0]] in side]
    outside = [k for k, r in enumerate(runs) if phi[r[0]] not in side]
    for pa in set_partitions(inside):
        for pb in set_partitions(outside):
            blocks = pa + pb
            if non_crossing(blocks):
                yield blocks


def _some_flip_works(phi, runs, blocks, sw, known):
    for mask in range(1 << len(blocks)):
        new = list(phi)
        for b, block in enumerate(blocks):
            if (mask >> b) & 1:
                for k in block:
                    for i in runs[k]:
                        new[i] = sw[new[i]]
        if tuple(new) in known:
            return True
    return False


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def necklaces(d: int, alphabet: int) -> int:
    """Rotation classes of words by Burnside's lemma."""
    return sum(alphabet ** math.gcd(i, d) for i in range(d)) // d


def brute_force_four_colorable(rotations) -> bool:
    nb = neighbour_sets(rotations)
    n = len(rotations)
    col = [-1] * n

    def go(i):
        if i == n:
            return True
        for c in range(4):
            if all(col[j] != c for j in nb[i]):
                col[i] = c
                if go(i + 1):
                    return True
        col[i] = -1
        return False

    return go(0)


# -- dart congruences ---------------------------------------------------------

def is_congruence(blocks: list[list[int]], head, rev, succ, pred) -> bool:
    """The partition of darts is respected by rev, and by succ/pred wherever both are set."""
    cls = {}
    for i, b in enumerate(blocks):
        for e in b:
            cls[e] = i
    for b in blocks:
        for table in (rev, succ, pred):
            targets = {cls[table[e]] for e in b if table[e] != -1}
            if len(targets) > 1:
                return False
    return True


def congruences_containing(n_darts, requests, head, rev, succ, pred):
    for blocks in set_partitions(list(range(n_darts))):
        cls = {e: i for i, b in enumerate(blocks) for e in b}
        if all(cls[a] == cls[b] for a, b in requests) and is_congruence(blocks, head, rev, succ, pred):
            yield cls


def classify_ring_partition(colors: Sequence[int]) -> tuple:
    seen: dict = {}
    return tuple(seen.setdefault(c, len(seen)) for c in colors)


# -- ring families for the obstructing-cycle surgeries -----------------------------

def ring_family(R: int, extra_edges=(), identify=(), star: bool = False) -> set[tuple]:
    """Partitions of a colored R-cycle over every proper 4-coloring of the modified ring.

    ``extra_edges`` adds chords, ``identify`` forces pairs to share a color, and
    ``star`` adds a vertex adjacent to the whole ring (three ring colors).
    """
    edges = {(i, (i + 1) % R) for i in range(R)} | set(extra_edges)
    out = set()
    for c in itertools.product(range(4), repeat=R):
        if any(c[a] == c[b] for a, b in edges):
            continue
        if any(c[a] != c[b] for a, b in identify):
            continue
        if star and len(set(c)) > 3:
            continue
        out.add(classify_ring_partition(c))
    return out


def bichain(rot, col, v, a, b) -> set:
    seen, stack = {v}, [v]
    while stack:
        x = stack.pop()
        for y in rot[x]:
            if y not in seen and col[y] in (a, b):
                seen.add(y)
                stack.append(y)
    return seen


def proper(rot, col) -> bool:
    return all(col[a] != col[b] for a, r in enumerate(rot) for b in r)
