"""Homomorphisms between pseudo-configurations and free homomorphic images.

A pseudo-configuration is a pseudo-triangulation with a degree range
``[lo[v], hi[v]]`` per vertex (``hi`` may be ``INF``).  The free homomorphic
image under identification requests is the most general quotient in which
the requested darts coincide; with degree ranges it becomes a finite set of
branches covering every admissible degree assignment.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .dartcore import NIL, PseudoTriangulation, canonical_form, mirror as mirror_triangulation

INF = math.inf

Range = tuple  # (lo, hi)


class LoopError(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


class DomainMismatch(ValueError):
    pass


class PseudoConfiguration:
    """A pseudo-triangulation ``Z`` with per-vertex degree ranges."""

    __slots__ = ("Z", "lo", "hi")

    def __init__(self, Z: PseudoTriangulation, lo: Sequence[int], hi: Sequence[float]):
        if len(lo) != Z.n_vertices or len(hi) != Z.n_vertices:
            raise ValueError("degree ranges must cover every vertex")
        self.Z = Z
        self.lo = list(lo)
        self.hi = list(hi)

    @classmethod
    def exact(cls, Z: PseudoTriangulation, degrees: Sequence[int] | None = None) -> "PseudoConfiguration":
        """Single degrees; by default each vertex's degree is its dart count."""
        if degrees is None:
            degrees = [Z.degree(v) for v in range(Z.n_vertices)]
        return cls(Z, list(degrees), list(degrees))

    def range(self, v: int) -> Range:
        return (self.lo[v], self.hi[v])

    def is_single(self, v: int) -> bool:
        return self.lo[v] == self.hi[v]

    def copy(self) -> "PseudoConfiguration":
        return PseudoConfiguration(self.Z.copy(), self.lo, self.hi)

    def labels(self) -> list[tuple]:
        return [(self.lo[v], self.hi[v]) for v in range(self.Z.n_vertices)]

    def violations(self) -> list[str]:
        out = []
        Z = self.Z
        if Z.has_loop():
            out.append("loop")
        for v in range(Z.n_vertices):
            d = Z.degree(v)
            if self.lo[v] > self.hi[v]:
                out.append(f"vertex {v}: empty range")
            if Z.is_boundary(v):
                if not self.lo[v] > d:
                    out.append(f"boundary vertex {v}: lower bound {self.lo[v]} <= degree {d}")
            elif not (self.lo[v] == self.hi[v] == d):
                out.append(f"inner vertex {v}: range [{self.lo[v]}, {self.hi[v]}] != degree {d}")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def __repr__(self) -> str:
        return f"PseudoConfiguration({self.Z!r}, ranges={self.labels()})"


def mirror(C: PseudoConfiguration) -> PseudoConfiguration:
    return PseudoConfiguration(mirror_triangulation(C.Z), C.lo, C.hi)


def rooted_key(C: PseudoConfiguration, root: int) -> tuple:
    return canonical_form(C.Z, root, C.labels())


# -- degree predicates ------------------------------------------------------

def include(src: Range, dst: Range) -> bool:
    """The source range contains the target range."""
    return src[0] <= dst[0] and dst[1] <= src[1]


def intersect(src: Range, dst: Range) -> bool:
    return max(src[0], dst[0]) <= min(src[1], dst[1])


def dominant(src: Range, dst: Range) -> bool:
    """Ranges meet, and a bounded source vertex lands on a target capped below 9."""
    return intersect(src, dst) and (src[1] == INF or dst[1] < 9)


@dataclass(frozen=True)
class Hom:
    """Vertex and dart maps; ``None`` entries are unmapped."""

    vmap: tuple
    dmap: tuple
    n_cod_vertices: int
    n_cod_darts: int

    @classmethod
    def identity(cls, Z: PseudoTriangulation) -> "Hom":
        return cls(tuple(range(Z.n_vertices)), tuple(range(Z.n_darts)), Z.n_vertices, Z.n_darts)

    def __call__(self, dart: int) -> int:
        return self.dmap[dart]

    def is_injective(self) -> bool:
        return (len(set(self.vmap)) == len(self.vmap)) and (len(set(self.dmap)) == len(self.dmap))


def compose(second: Hom, first: Hom) -> Hom:
    """``second`` after ``first``."""
    if first.n_cod_vertices != len(second.vmap) or first.n_cod_darts != len(second.dmap):
        raise DomainMismatch("codomain of the first map is not the domain of the second")
    return Hom(tuple(second.vmap[v] for v in first.vmap), tuple(second.dmap[d] for d in first.dmap),
               second.n_cod_vertices, second.n_cod_darts)


def homomorphism(src: PseudoConfiguration, e: int, dst: PseudoConfiguration, e_star: int,
                 predicate: Callable[[Range, Range], bool] = include) -> Hom | None:
    """The unique homomorphism sending ``e`` to ``e_star`` that respects ``predicate``."""
    Z, W = src.Z, dst.Z
    vmap: list = [None] * Z.n_vertices
    dmap: list = [None] * Z.n_darts
    queue = deque([(e, e_star)])
    zh, zr, zs, zp = Z.head, Z.rev, Z.succ, Z.pred
    wh, wr, ws, wp = W.head, W.rev, W.succ, W.pred
    while queue:
        f, g = queue.popleft()
        if dmap[f] is not None:
            if dmap[f] != g:
                return None
            continue
        dmap[f] = g
        h, hs = zh[f], wh[g]
        if vmap[h] is None:
            if not predicate((src.lo[h], src.hi[h]), (dst.lo[hs], dst.hi[hs])):
                return None
            vmap[h] = hs
        elif vmap[h] != hs:
            return None
        queue.append((zr[f], wr[g]))
        if zs[f] != NIL:
            if ws[g] == NIL:
                return None
            queue.append((zs[f], ws[g]))
        if zp[f] != NIL:
            if wp[g] == NIL:
                return None
            queue.append((zp[f], wp[g]))
    if any(x is None for x in dmap) or any(x is None for x in vmap):
        raise ValueError("source is not connected from the root dart")
    return Hom(tuple(vmap), tuple(dmap), W.n_vertices, W.n_darts)


# -- free homomorphic images -----------------------------------------------

class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def root(self, x: int) -> int:
        p = self.parent
        r = x
        while p[r] != r:
            r = p[r]
        while p[x] != r:
            p[x], x = r, p[x]
        return r

    def unite(self, x: int, y: int) -> None:
        """The root of ``y`` becomes the representative."""
        self.parent[self.root(x)] = self.root(y)


def free_hom_triangulation(Z: PseudoTriangulation,
                           requests: Iterable[tuple[int, int]]) -> tuple[PseudoTriangulation, Hom]:
    """Identify the requested dart pairs and everything they force."""
    uf_v = _UnionFind(Z.n_vertices)
    uf_d = _UnionFind(Z.n_darts)
    head, rev = Z.head, Z.rev
    succ = list(Z.succ)
    pred = list(Z.pred)
    queue = deque(requests)
    while queue:
        e, f = queue.popleft()
        es, fs = uf_d.root(e), uf_d.root(f)
        if es == fs:
            continue
        if uf_v.root(head[e]) != uf_v.root(head[f]):
            uf_v.unite(head[e], head[f])
        uf_d.unite(es, fs)
        queue.append((rev[es], rev[fs]))
        for table in (succ, pred):
            if table[es] != NIL and table[fs] != NIL:
                queue.append((table[es], table[fs]))
            elif table[es] != NIL:
                table[fs] = table[es]
    vroots = [v for v in range(Z.n_vertices) if uf_v.root(v) == v]
    droots = [d for d in range(Z.n_darts) if uf_d.root(d) == d]
    vnew = {v: i for i, v in enumerate(vroots)}
    dnew = {d: i for i, d in enumerate(droots)}

    def m(x: int) -> int:
        return NIL if x == NIL else dnew[uf_d.root(x)]

    out = PseudoTriangulation(
        len(vroots),
        [vnew[uf_v.root(head[d])] for d in droots],
        [dnew[uf_d.root(rev[d])] for d in droots],
        [m(succ[d]) for d in droots],
        [m(pred[d]) for d in droots],
    )
    hom = Hom(tuple(vnew[uf_v.root(v)] for v in range(Z.n_vertices)),
              tuple(dnew[uf_d.root(d)] for d in range(Z.n_darts)), out.n_vertices, out.n_darts)
    return out, hom


def dart_identification(C: PseudoConfiguration,
                        requests: Iterable[tuple[int, int]]) -> tuple[PseudoConfiguration, Hom]:
    """Free image of the underlying triangulation with intersected degree ranges."""
    Z, hom = free_hom_triangulation(C.Z, requests)
    if Z.has_loop():
        raise LoopError("identification creates a loop")
    lo = [1] * Z.n_vertices
    hi = [INF] * Z.n_vertices
    for v in range(C.Z.n_vertices):
        w = hom.vmap[v]
        a, b = max(lo[w], C.lo[v]), min(hi[w], C.hi[v])
        if a > b:
            raise DegreeMismatch(f"vertex {v}: ranges do not meet")
        lo[w], hi[w] = a, b
    return PseudoConfiguration(Z, lo, hi), hom


def _inner_subdegree_error(C: PseudoConfiguration) -> bool:
    Z = C.Z
    return any(not Z.is_boundary(v) and Z.degree(v) < C.lo[v] for v in range(Z.n_vertices))


def _single_degree_issue(C: PseudoConfiguration) -> int | None:
    Z = C.Z
    for v in range(Z.n_vertices):
        if C.lo[v] != C.hi[v]:
            continue
        d = Z.degree(v)
        if C.lo[v] < d or (d == C.lo[v] and Z.is_boundary(v)):
            return v
    return None


def add_boundary_darts(C: PseudoConfiguration, v: int) -> PseudoConfiguration | None:
    """Close the boundary gap at ``v`` with a new edge between its end neighbours."""
    Z = C.Z
    order = Z.darts_at(v)
    first, last = order[0], order[-1]
    u = Z.tail(first)
    w = Z.tail(last)
    if u == w:
        return None
    head, rev, succ, pred = list(Z.head), list(Z.rev), list(Z.succ), list(Z.pred)
    d_uw, d_wu = len(head), len(head) + 1
    head += [u, w]
    rev += [d_wu, d_uw]
    succ += [NIL, rev[last]]
    pred += [rev[first], NIL]
    pred[first] = last
    succ[last] = first
    succ[rev[first]] = d_uw
    pred[rev[last]] = d_wu
    return PseudoConfiguration(PseudoTriangulation(Z.n_vertices, head, rev, succ, pred), C.lo, C.hi)


def _fix_single_degree_issue(C: PseudoConfiguration, v: int) -> tuple[PseudoConfiguration, Hom] | None:
    Z = C.Z
    if C.lo[v] < Z.degree(v):
        e = Z.darts_at(v)[0]
        f = e
        for _ in range(C.lo[v]):
            f = Z.succ[f]
        try:
            return dart_identification(C, [(e, f)])
        except (LoopError, DegreeMismatch):
            return None
    out = add_boundary_darts(C, v)
    if out is None:
        return None
    ident = Hom(tuple(range(Z.n_vertices)), tuple(range(Z.n_darts)), Z.n_vertices, out.Z.n_darts)
    return out, ident


def _single_out_lower_degree(C: PseudoConfiguration):
    Z = C.Z
    for v in range(Z.n_vertices):
        if C.lo[v] < C.hi[v] and C.lo[v] <= Z.degree(v):
            hi1 = list(C.hi)
            hi1[v] = C.lo[v]
            lo2 = list(C.lo)
            lo2[v] = C.lo[v] + 1
            return PseudoConfiguration(Z, C.lo, hi1), PseudoConfiguration(Z, lo2, C.hi)
    return None


def resolve_degree_issues(C: PseudoConfiguration,
                          tally: Counter | None = None) -> list[tuple[PseudoConfiguration, Hom]]:
    """Repair degree issues by identification, closing boundaries and range splits."""
    results = []
    queue = deque([(C, Hom.identity(C.Z))])
    while queue:
        cur, hom = queue.popleft()
        if _inner_subdegree_error(cur):
            if tally is not None:
                tally["subdegree"] += 1
            continue
        v = _single_degree_issue(cur)
        if v is not None:
            fixed = _fix_single_degree_issue(cur, v)
            if fixed is None:
                if tally is not None:
                    tally["unresolvable"] += 1
                continue
            nxt, step = fixed
            queue.append((nxt, compose(step, hom)))
            continue
        split = _single_out_lower_degree(cur)
        if split is not None:
            if tally is not None:
                tally["split"] += 1
            queue.append((split[0], hom))
            queue.append((split[1], hom))
            continue
        results.append((cur, hom))
    return results


def free_hom_configuration(C: PseudoConfiguration, requests: Iterable[tuple[int, int]],
                           tally: Counter | None = None) -> list[tuple[PseudoConfiguration, Hom]]:
    """All branches of the free homomorphic image; empty when identification fails."""
    try:
        image, hom = dart_identification(C, requests)
    except LoopError:
        if tally is not None:
            tally["loop"] += 1
        return []
    except DegreeMismatch:
        if tally is not None:
            tally["mismatch"] += 1
        return []
    return [(out, compose(step, hom)) for out, step in resolve_degree_issues(image, tally)]


def disjoint_union(parts: Sequence[PseudoConfiguration]) -> tuple[PseudoConfiguration, list[tuple[int, int]]]:
    """Place configurations side by side; returns (vertex offset, dart offset) per part."""
    head, rev, succ, pred, lo, hi = [], [], [], [], [], []
    offsets = []
    nv = 0
    for P in parts:
        nd = len(head)
        offsets.append((nv, nd))
        Z = P.Z
        head += [h + nv for h in Z.head]
        rev += [r + nd for r in Z.rev]
        succ += [s + nd if s != NIL else NIL for s in Z.succ]
        pred += [p + nd if p != NIL else NIL for p in Z.pred]
        lo += P.lo
        hi += P.hi
        nv += Z.n_vertices
    return PseudoConfiguration(PseudoTriangulation(nv, head, rev, succ, pred), lo, hi), offsets
