"""Sphere triangulations given as clockwise rotation systems.

A triangulation is kept as ``list[list[int]]``: the neighbours of each vertex
in clockwise order with no boundary marks.  Oriented faces ``(a, b, c)`` list
``b`` immediately before ``c`` in the rotation at ``a``.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .dartcore import PseudoTriangulation, from_rotations, parse_rotations, format_rotations

Rotations = list[list[int]]


def rotations_from_faces(n: int, faces: Iterable[Sequence[int]]) -> Rotations:
    following: list[dict[int, int]] = [dict() for _ in range(n)]
    for a, b, c in faces:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            if y in following[x]:
                raise ValueError(f"faces are not consistently oriented at {x}")
            following[x][y] = z
    rotations = []
    for v in range(n):
        start = min(following[v])
        order = [start]
        nxt = following[v][start]
        while nxt != start:
            order.append(nxt)
            nxt = following[v][nxt]
        if len(order) != len(following[v]):
            raise ValueError(f"vertex {v} is not surrounded by a single disc")
        rotations.append(order)
    return rotations


def faces_of(rotations: Rotations) -> list[tuple[int, int, int]]:
    """Each oriented face once, listed from its smallest vertex."""
    out = set()
    for a, rot in enumerate(rotations):
        for i, b in enumerate(rot):
            c = rot[(i + 1) % len(rot)]
            tri = (a, b, c)
            k = tri.index(min(tri))
            out.add(tri[k:] + tri[:k])
    return sorted(out)


def k4() -> Rotations:
    return rotations_from_faces(4, [(0, 2, 1), (0, 3, 2), (0, 1, 3), (1, 2, 3)])


def octahedron() -> Rotations:
    faces = []
    for i in range(4):
        a, b = 1 + i, 1 + (i + 1) % 4
        faces += [(0, b, a), (5, a, b)]
    return rotations_from_faces(6, faces)


def icosahedron() -> Rotations:
    faces = []
    for i in range(5):
        u, u1 = 1 + i, 1 + (i + 1) % 5
        low, low1 = 6 + i, 6 + (i + 1) % 5
        faces += [(0, u1, u), (u, u1, low), (u1, low1, low), (11, low, low1)]
    return rotations_from_faces(12, faces)


def stack(rotations: Rotations, face: tuple[int, int, int]) -> int:
    """Insert a new vertex of degree 3 into an oriented face; returns its id."""
    a, b, c = face
    x = len(rotations)
    for v, before in ((a, b), (b, c), (c, a)):
        rot = rotations[v]
        rot.insert(rot.index(before) + 1, x)
    rotations.append([a, b, c])
    return x


def flip(rotations: Rotations, a: int, b: int) -> bool:
    """Replace edge ab by the other diagonal of its two faces when that is legal."""
    ra, rb = rotations[a], rotations[b]
    if len(ra) <= 3 or len(rb) <= 3:
        return False
    i = ra.index(b)
    c = ra[(i + 1) % len(ra)]
    d = ra[(i - 1) % len(ra)]
    if c == d or d in rotations[c]:
        return False
    ra.remove(b)
    rb.remove(a)
    rc = rotations[c]
    rc.insert(rc.index(a) + 1, d)
    rd = rotations[d]
    rd.insert(rd.index(b) + 1, c)
    return True


def apollonian(n: int, seed: int | None = None) -> Rotations:
    """Repeated stacking into random faces, starting from K4."""
    rng = random.Random(seed)
    rotations = k4()
    faces = faces_of(rotations)
    while len(rotations) < n:
        a, b, c = faces.pop(rng.randrange(len(faces)))
        x = stack(rotations, (a, b, c))
        faces += [(a, b, x), (b, c, x), (c, a, x)]
    return rotations


def random_triangulation(n: int, seed: int | None = None, flips: int | None = None) -> Rotations:
    """Apollonian stacking followed by random legal edge flips."""
    rng = random.Random(seed)
    rotations = apollonian(n, rng.randrange(2**32))
    edges = [(a, b) for a, rot in enumerate(rotations) for b in rot if a < b]
    for _ in range(3 * n if flips is None else flips):
        a, b = edges[rng.randrange(len(edges))]
        if b not in rotations[a]:
            continue
        i = rotations[a].index(b)
        c = rotations[a][(i - 1) % len(rotations[a])]
        d = rotations[a][(i + 1) % len(rotations[a])]
        if flip(rotations, a, b):
            edges.append((c, d))
    return rotations


def to_darts(rotations: Rotations) -> PseudoTriangulation:
    return from_rotations(rotations)


def is_simple_triangulation(rotations: Rotations) -> bool:
    n = len(rotations)
    if n < 4:
        return False
    for a, rot in enumerate(rotations):
        if len(set(rot)) != len(rot) or a in rot or len(rot) < 3:
            return False
        for b in rot:
            if a not in rotations[b]:
                return False
    edges = sum(len(r) for r in rotations) // 2
    return edges == 3 * n - 6 and len(faces_of(rotations)) == 2 * n - 4


def read_rot(text: str) -> Rotations:
    return [[x for x in row if x != -1] for row in parse_rotations(text)]


def write_rot(rotations: Rotations) -> str:
    return format_rotations(rotations)
