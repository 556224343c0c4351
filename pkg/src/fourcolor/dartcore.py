"""Dart-based representation of pseudo-triangulations.

A pseudo-triangulation stores, for every dart, its head vertex, its reverse
dart and the next/previous dart in the clockwise order around the head
(``succ``/``pred``).  A missing neighbour in that order is ``NIL`` and marks
the boundary.  Vertices are ``0..n_vertices-1``, darts are ``0..n_darts-1``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

NIL = -1


class MultipleDarts(ValueError):
    """Two darts with the same head and tail were requested."""


class RotationDiscrepancy(ValueError):
    """Vertex ``a`` lists ``b`` as a neighbour but ``b`` does not list ``a``."""


class DisconnectedFromRoot(ValueError):
    """Some dart or vertex cannot be reached from the chosen root dart."""


class MultigraphError(ValueError):
    """The structure has parallel darts or loops, so rotations are ambiguous."""


@dataclass(frozen=True)
class Violation:
    requirement: str  # "M1".."M6"
    kind: str  # "dart" or "vertex"
    witness: int
    detail: str = ""


class PseudoTriangulation:
    """Dart tables plus vertex count.  Treated as immutable once built."""

    __slots__ = ("n_vertices", "head", "rev", "succ", "pred", "_around")

    def __init__(self, n_vertices: int, head: Sequence[int], rev: Sequence[int],
                 succ: Sequence[int], pred: Sequence[int]):
        if not (len(head) == len(rev) == len(succ) == len(pred)):
            raise ValueError("dart tables differ in length")
        self.n_vertices = n_vertices
        self.head = list(head)
        self.rev = list(rev)
        self.succ = list(succ)
        self.pred = list(pred)
        self._around = None

    @property
    def n_darts(self) -> int:
        return len(self.head)

    def tail(self, e: int) -> int:
        return self.head[self.rev[e]]

    def copy(self) -> "PseudoTriangulation":
        return PseudoTriangulation(self.n_vertices, self.head, self.rev, self.succ, self.pred)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PseudoTriangulation):
            return NotImplemented
        return (self.n_vertices == other.n_vertices and self.head == other.head
                and self.rev == other.rev and self.succ == other.succ and self.pred == other.pred)

    def __hash__(self):
        return hash((self.n_vertices, tuple(self.head), tuple(self.rev)))

    def __repr__(self) -> str:
        return f"PseudoTriangulation(n_vertices={self.n_vertices}, n_darts={self.n_darts})"

    # -- per-vertex views -------------------------------------------------
    def _incident(self) -> list[list[int]]:
        if self._around is None:
            by_head: list[list[int]] = [[] for _ in range(self.n_vertices)]
            for e, h in enumerate(self.head):
                by_head[h].append(e)
            self._around = by_head
        return self._around

    def darts_at(self, v: int) -> list[int]:
        """Darts with head ``v`` in clockwise order.

        For a boundary vertex the list starts at the dart without ``pred``;
        for an inner vertex it starts at the smallest dart id.
        """
        incident = self._incident()[v]
        if not incident:
            return []
        start = next((e for e in incident if self.pred[e] == NIL), min(incident))
        out = [start]
        e = self.succ[start]
        while e != NIL and e != start and len(out) <= len(incident):
            out.append(e)
            e = self.succ[e]
        return out

    def degree(self, v: int) -> int:
        return len(self._incident()[v])

    def is_boundary(self, v: int) -> bool:
        return any(self.succ[e] == NIL for e in self._incident()[v])

    def classify(self, v: int) -> str:
        return "boundary" if self.is_boundary(v) else "inner"

    def neighbours(self, v: int) -> list[int]:
        return [self.tail(e) for e in self.darts_at(v)]

    def has_loop(self) -> bool:
        return any(self.head[e] == self.head[self.rev[e]] for e in range(self.n_darts))


def terminal() -> PseudoTriangulation:
    """One vertex with a single self-reverse dart; everything maps onto it."""
    return PseudoTriangulation(1, [0], [0], [0], [0])


def from_rotations(rotations: Sequence[Sequence[int]]) -> PseudoTriangulation:
    """Build darts from clockwise neighbour lists, ``-1`` marking a boundary gap.

    The dart ``darts[a][b]`` points from ``b`` to ``a``.  Darts are numbered by
    vertex and then by position in the rotation.
    """
    n = len(rotations)
    ids: list[dict[int, int]] = [dict() for _ in range(n)]
    count = 0
    for a, rot in enumerate(rotations):
        for b in rot:
            if b == -1:
                continue
            if b in ids[a]:
                raise MultipleDarts(f"vertex {a} lists neighbour {b} twice")
            ids[a][b] = count
            count += 1
    head = [0] * count
    rev = [0] * count
    succ = [NIL] * count
    pred = [NIL] * count
    for a, rot in enumerate(rotations):
        size = len(rot)
        for i, b in enumerate(rot):
            if b == -1:
                continue
            e = ids[a][b]
            head[e] = a
            if not (0 <= b < n) or a not in ids[b]:
                raise RotationDiscrepancy(f"{a} lists {b} but {b} does not list {a}")
            rev[e] = ids[b][a]
            s = rot[(i + 1) % size]
            p = rot[(i - 1) % size]
            succ[e] = ids[a][s] if s != -1 else NIL
            pred[e] = ids[a][p] if p != -1 else NIL
    return PseudoTriangulation(n, head, rev, succ, pred)


def to_rotations(Z: PseudoTriangulation) -> list[list[int]]:
    """Inverse of :func:`from_rotations` for simple, well-formed structures."""
    rotations = []
    for v in range(Z.n_vertices):
        order = Z.darts_at(v)
        tails = [Z.tail(e) for e in order]
        if v in tails:
            raise MultigraphError(f"loop at vertex {v}")
        if len(set(tails)) != len(tails):
            raise MultigraphError(f"parallel darts at vertex {v}")
        if len(order) != Z.degree(v):
            raise MultigraphError(f"vertex {v} has more than one dart list")
        if order and Z.pred[order[0]] == NIL:
            tails.append(-1)
        rotations.append(tails)
    return rotations


def validate(Z: PseudoTriangulation) -> list[Violation]:
    """Check the six structural requirements, returning every violation found."""
    out: list[Violation] = []
    n, m = Z.n_vertices, Z.n_darts

    def ok_dart(x: int) -> bool:
        return 0 <= x < m

    seen = [False] * n
    for e in range(m):
        if 0 <= Z.head[e] < n:
            seen[Z.head[e]] = True
    for v in range(n):
        if not seen[v]:
            out.append(Violation("M1", "vertex", v, "no dart has this vertex as head"))

    for e in range(m):
        r = Z.rev[e]
        if not ok_dart(r) or Z.rev[r] != e:
            out.append(Violation("M2", "dart", e, "rev is not an involution"))
    for e in range(m):
        f = Z.succ[e]
        if f != NIL and (not ok_dart(f) or Z.pred[f] != e):
            out.append(Violation("M3", "dart", e, "pred(succ(e)) != e"))
        g = Z.pred[e]
        if g != NIL and (not ok_dart(g) or Z.succ[g] != e):
            out.append(Violation("M3", "dart", e, "succ(pred(e)) != e"))
    for e in range(m):
        f = Z.succ[e]
        if f != NIL and ok_dart(f) and Z.head[f] != Z.head[e]:
            out.append(Violation("M4", "dart", e, "succ changes the head"))
    for e in range(m):
        if Z.succ[e] == NIL or any(x != NIL and not ok_dart(x) for x in (Z.succ[e], Z.rev[e])):
            continue
        f = Z.rev[Z.succ[e]]
        if not ok_dart(f) or Z.succ[f] == NIL:
            out.append(Violation("M5", "dart", e, "face is not closed after one step"))
            continue
        g = Z.rev[Z.succ[f]]
        if not ok_dart(g) or Z.succ[g] == NIL or Z.rev[Z.succ[g]] != e:
            out.append(Violation("M5", "dart", e, "face is not a triangle"))
    # M6: the darts around each vertex form exactly one list.
    if not any(v.requirement == "M3" for v in out):
        by_head: list[list[int]] = [[] for _ in range(n)]
        for e in range(m):
            if 0 <= Z.head[e] < n:
                by_head[Z.head[e]].append(e)
        for v in range(n):
            darts = by_head[v]
            if not darts:
                continue
            visited = set()
            lists = 0
            for start in [e for e in darts if Z.pred[e] == NIL] + darts:
                if start in visited:
                    continue
                lists += 1
                e = start
                while e != NIL and e not in visited:
                    visited.add(e)
                    e = Z.succ[e]
            if lists != 1:
                out.append(Violation("M6", "vertex", v, f"{lists} dart lists around vertex"))
    return out


def is_valid(Z: PseudoTriangulation) -> bool:
    return not validate(Z)


def mirror(Z: PseudoTriangulation) -> PseudoTriangulation:
    """Reflection: the clockwise order is reversed by swapping succ and pred."""
    return PseudoTriangulation(Z.n_vertices, Z.head, Z.rev, Z.pred, Z.succ)


def canonical_form(Z: PseudoTriangulation, root: int,
                   labels: Sequence | None = None) -> tuple:
    """BFS trace from ``root`` with first-visit numbering of darts and vertices.

    Two structures give equal traces from roots ``r1`` and ``r2`` exactly when
    an isomorphism maps ``r1`` to ``r2`` (and preserves ``labels`` if given).
    """
    num = {root: 0}
    order = [root]
    vnum: dict[int, int] = {}
    trace = []
    i = 0
    while i < len(order):
        e = order[i]
        i += 1
        h = Z.head[e]
        if h not in vnum:
            vnum[h] = len(vnum)
        entry = [vnum[h]]
        if labels is not None:
            entry.append(labels[h])
        for x in (Z.rev[e], Z.succ[e], Z.pred[e]):
            if x == NIL:
                entry.append(-1)
                continue
            if x not in num:
                num[x] = len(order)
                order.append(x)
            entry.append(num[x])
        trace.append(tuple(entry))
    if len(order) != Z.n_darts or len(vnum) != Z.n_vertices:
        raise DisconnectedFromRoot(f"root {root} reaches {len(order)} of {Z.n_darts} darts")
    return tuple(trace)


def canonical_key(Z: PseudoTriangulation, labels: Sequence | None = None) -> tuple:
    """Root-independent invariant: the smallest trace over all roots."""
    if Z.n_darts == 0:
        return ("empty", Z.n_vertices, tuple(sorted(labels)) if labels is not None else ())
    return min(canonical_form(Z, r, labels) for r in range(Z.n_darts))


def trace_digest(trace: tuple) -> str:
    return hashlib.sha1(repr(trace).encode()).hexdigest()


def iso(Z1: PseudoTriangulation, Z2: PseudoTriangulation,
        labels1: Sequence | None = None, labels2: Sequence | None = None) -> bool:
    """True when some isomorphism maps Z1 onto Z2."""
    if Z1.n_darts != Z2.n_darts or Z1.n_vertices != Z2.n_vertices:
        return False
    if Z1.n_darts == 0:
        return sorted(labels1 or []) == sorted(labels2 or [])
    t1 = canonical_form(Z1, 0, labels1)
    return any(canonical_form(Z2, r, labels2) == t1 for r in range(Z2.n_darts))


def rooted_iso(Z1: PseudoTriangulation, r1: int, Z2: PseudoTriangulation, r2: int,
               labels1: Sequence | None = None, labels2: Sequence | None = None) -> bool:
    return canonical_form(Z1, r1, labels1) == canonical_form(Z2, r2, labels2)


# -- text and JSON I/O -----------------------------------------------------

def format_rotations(rotations: Sequence[Sequence[int]]) -> str:
    lines = [str(len(rotations))]
    for v, rot in enumerate(rotations):
        lines.append(f"{v}: " + " ".join(str(x) for x in rot))
    return "\n".join(lines) + "\n"


def parse_rotations(text: str) -> list[list[int]]:
    """Read the format written by :func:`format_rotations`."""
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    n = int(rows[0].split()[0])
    rotations: list[list[int]] = [[] for _ in range(n)]
    for row in rows[1:1 + n]:
        left, _, right = row.partition(":")
        rotations[int(left)] = [int(x) for x in right.split()]
    return rotations


def to_dict(Z: PseudoTriangulation) -> dict:
    return {"vertices": Z.n_vertices, "head": Z.head, "rev": Z.rev, "succ": Z.succ, "pred": Z.pred}


def from_dict(data: dict) -> PseudoTriangulation:
    return PseudoTriangulation(data["vertices"], data["head"], data["rev"], data["succ"], data["pred"])


def dumps(Z: PseudoTriangulation) -> str:
    return json.dumps(to_dict(Z))


def loads(text: str) -> PseudoTriangulation:
    return from_dict(json.loads(text))


def relabel(Z: PseudoTriangulation, keep_darts: Iterable[int]) -> tuple[PseudoTriangulation, dict, dict]:
    """Restrict to ``keep_darts`` (closed under all pointers) and renumber."""
    keep = sorted(set(keep_darts))
    dmap = {e: i for i, e in enumerate(keep)}
    verts = sorted({Z.head[e] for e in keep})
    vmap = {v: i for i, v in enumerate(verts)}

    def m(x: int) -> int:
        return NIL if x == NIL else dmap[x]

    out = PseudoTriangulation(len(verts), [vmap[Z.head[e]] for e in keep], [m(Z.rev[e]) for e in keep],
                              [m(Z.succ[e]) for e in keep], [m(Z.pred[e]) for e in keep])
    return out, vmap, dmap
