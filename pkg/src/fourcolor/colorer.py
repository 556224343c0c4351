"""Four-coloring sphere triangulations given as rotation systems.

Public colorings are lists with values ``1..4`` (``0`` for an uncolored
vertex).  Internally colors are ``0..3`` and uncolored is ``-1``; a Kempe
split ``{0, i} | {j, k}`` has ``0 ^ i == j ^ k == i``, so flipping any
selection of its chains is an XOR with ``i``.

The driver shrinks the graph level by level.  A level removes a family of
non-touching reducible configurations (their rings are repaired afterwards
with improving Kempe changes), or cuts out the interiors of non-touching
obstructing cycles (each colored separately and glued back), or, when there
is neither, a single vertex of degree at most 5.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .configlib import Configuration, from_patch, load_config, serialize_config
from .dartcore import from_rotations
from .reducibility import DReducible, check_d_reducibility, extension_witnesses

Rotations = list[list[int]]
Coloring = list[int]
INF_LEVEL = 10**9
DATA_DIR = Path(__file__).parent / "data" / "configs"
# Degree <= 4 vertices and the Birkhoff diamond are enough for the local search.
DEFAULT_MEMBERS = ("deg3", "deg4", "birkhoff")


class InvalidInput(ValueError):
    pass


class NothingFound(RuntimeError):
    pass


class StuckRing(RuntimeError):
    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


@dataclass
class ColorerConfig:
    prefer: str = "reducibles"          # "reducibles", "obstructions" or "larger"
    obstruction_lengths: tuple = (3, 4)  # cycle lengths searched globally
    interior_limit: int = 200            # side size explored per candidate cycle
    max_random_kempe: int = 20000
    seed: int = 0
    check_invariants: bool = True


@dataclass
class ColoringStats:
    levels: int = 0
    batch_sites: int = 0
    cycle_cuts: int = 0
    single_sites: int = 0
    kempe_rounds: int = 0
    random_kempe: int = 0
    rounds: list = field(default_factory=list)  # (active, improved, expectation)
    site_changes: Counter = field(default_factory=Counter)  # reducer name -> improving changes


@dataclass
class EmbeddedTriangulation:
    """A simple sphere triangulation; all vertices are inner."""

    rotations: Rotations

    def __post_init__(self):
        self._sets = None

    @property
    def n(self) -> int:
        return len(self.rotations)

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def adjacent(self, u: int, v: int) -> bool:
        if self._sets is None:
            self._sets = [set(r) for r in self.rotations]
        return v in self._sets[u]

    def darts(self):
        return from_rotations(self.rotations)


def _rot(G) -> Rotations:
    return G.rotations if isinstance(G, EmbeddedTriangulation) else G


def check_triangulation(G) -> None:
    rot = _rot(G)
    n = len(rot)
    if n <= 3:
        if any(sorted(r) != sorted(set(range(n)) - {v}) for v, r in enumerate(rot)):
            raise InvalidInput("graphs with at most 3 vertices must be complete")
        return
    sets = [set(r) for r in rot]
    for a, r in enumerate(rot):
        if len(r) < 3 or len(sets[a]) != len(r) or a in sets[a]:
            raise InvalidInput(f"vertex {a} has a loop, a repeated or too few neighbours")
        for b in r:
            if not 0 <= b < n or a not in sets[b]:
                raise InvalidInput(f"edge {a}-{b} is not symmetric")
        for i, b in enumerate(r):
            c = r[(i + 1) % len(r)]
            rb = rot[b]
            if rb[(rb.index(c) + 1) % len(rb)] != a:
                raise InvalidInput(f"({a}, {b}, {c}) is not an oriented face")
    if sum(map(len, rot)) != 2 * (3 * n - 6):
        raise InvalidInput("edge count of a sphere triangulation is 3n - 6")


def verify_coloring(G, coloring: Sequence[int]) -> bool:
    rot = _rot(G)
    if len(coloring) != len(rot):
        return False
    if any(c not in (1, 2, 3, 4) for c in coloring):
        return False
    return all(coloring[a] != coloring[b] for a, r in enumerate(rot) for b in r)


# -- Kempe chains -----------------------------------------------------------------

def _edge_arrays(rot: Rotations) -> tuple[np.ndarray, np.ndarray]:
    n = len(rot)
    degs = np.fromiter(map(len, rot), dtype=np.int64, count=n)
    u = np.repeat(np.arange(n, dtype=np.int64), degs)
    v = np.fromiter(itertools.chain.from_iterable(rot), dtype=np.int64, count=int(degs.sum()))
    keep = u < v
    return u[keep], v[keep]


def _chain_labels(n: int, u: np.ndarray, v: np.ndarray, col: np.ndarray, split: int) -> np.ndarray:
    cu, cv = col[u], col[v]
    ok = (cu >= 0) & (cv >= 0) & ((cu ^ cv) == split)
    m = coo_matrix((np.ones(int(ok.sum()), dtype=np.int8), (u[ok], v[ok])), shape=(n, n))
    _, labels = connected_components(m, directed=False)
    labels = labels.astype(np.int64)
    labels[col < 0] = -1
    return labels


def _proper(u: np.ndarray, v: np.ndarray, col: np.ndarray) -> bool:
    cu, cv = col[u], col[v]
    return bool(np.all((cu < 0) | (cv < 0) | (cu != cv)))


@dataclass
class KempeChainIndex:
    """Chains of the split pairing color 1 with color ``1 + split``."""

    split: int
    labels: np.ndarray  # chain id per vertex, -1 when uncolored

    @property
    def count(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def members(self, chain: int) -> list[int]:
        return np.flatnonzero(self.labels == chain).tolist()


def _internal(coloring: Sequence[int]) -> np.ndarray:
    return np.asarray(coloring, dtype=np.int8) - 1


def _public(col: np.ndarray) -> Coloring:
    return (col.astype(np.int64) + 1).tolist()


def kempe_chains(G, coloring: Sequence[int], split: int) -> KempeChainIndex:
    if split not in (1, 2, 3):
        raise ValueError("split is 1, 2 or 3")
    rot = _rot(G)
    u, v = _edge_arrays(rot)
    return KempeChainIndex(split, _chain_labels(len(rot), u, v, _internal(coloring), split))


def kempe_change(coloring: Sequence[int], index: KempeChainIndex, chains: Iterable[int]) -> Coloring:
    col = _internal(coloring)
    chosen = np.fromiter(chains, dtype=np.int64)
    if len(chosen):
        mask = np.isin(index.labels, chosen) & (col >= 0)
        col[mask] ^= index.split
    return _public(col)


# -- degree-bounded balls and obstructing cycles ----------------------------------

@dataclass(frozen=True)
class DegreeBoundedBall:
    center: int
    k: int
    inner: frozenset
    boundary: frozenset

    @property
    def extended(self) -> frozenset:
        return self.inner | self.boundary


def degree_bounded_ball(G, v: int, k: int, cap: int = 8) -> DegreeBoundedBall:
    rot = _rot(G)
    seen = {v}
    inner, boundary = {v}, set()
    frontier = [v]
    for _ in range(k):
        nxt = []
        for x in frontier:
            for y in rot[x]:
                if y in seen:
                    continue
                seen.add(y)
                if len(rot[y]) <= cap:
                    inner.add(y)
                    nxt.append(y)
                else:
                    boundary.add(y)
        frontier = nxt
    return DegreeBoundedBall(v, k, frozenset(inner), frozenset(boundary))


@dataclass(frozen=True)
class ObstructingCycle:
    cycle: tuple
    public: tuple = ()
    private: tuple = ()
    interior: frozenset = frozenset()  # the smaller side, when known


def _side_seeds(rot: Rotations, cycle: Sequence[int]) -> tuple[set, set]:
    m = len(cycle)
    cset = set(cycle)
    left, right = set(), set()
    for i, c in enumerate(cycle):
        prev, nxt = cycle[i - 1], cycle[(i + 1) % m]
        r = rot[c]
        k = len(r)
        j = (r.index(nxt) + 1) % k
        while r[j] != prev:
            left.add(r[j])
            j = (j + 1) % k
        j = (r.index(prev) + 1) % k
        while r[j] != nxt:
            right.add(r[j])
            j = (j + 1) % k
    return left - cset, right - cset


def cycle_sides(G, cycle: Sequence[int], limit: int | None = None):
    """Grow both sides at once; return ``(smaller side, index)`` or ``None``
    once both sides exceed ``limit``."""
    rot = _rot(G)
    cset = set(cycle)
    seeds = _side_seeds(rot, cycle)
    sides = [set(seeds[0]), set(seeds[1])]
    queues = [deque(sorted(seeds[0])), deque(sorted(seeds[1]))]
    while True:
        for s in (0, 1):
            if not queues[s]:
                return sides[s], s
            x = queues[s].popleft()
            for y in rot[x]:
                if y not in cset and y not in sides[s]:
                    sides[s].add(y)
                    queues[s].append(y)
        if limit is not None and len(sides[0]) > limit and len(sides[1]) > limit:
            return None


def _side_at_least(rot: Rotations, cset: set, seeds: set, t: int) -> bool:
    seen = set(seeds)
    queue = deque(seeds)
    while queue and len(seen) < t:
        x = queue.popleft()
        for y in rot[x]:
            if y not in cset and y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) >= t


def is_obstructing(G, cycle: Sequence[int]) -> bool:
    rot = _rot(G)
    m = len(cycle)
    if m < 3 or m > 5 or len(set(cycle)) != m:
        return False
    if any(cycle[(i + 1) % m] not in rot[c] for i, c in enumerate(cycle)):
        return False
    t = 1 if m <= 4 else 2
    cset = set(cycle)
    left, right = _side_seeds(rot, cycle)
    return _side_at_least(rot, cset, left, t) and _side_at_least(rot, cset, right, t)


def _chordless(sets: list[set], cycle: Sequence[int]) -> bool:
    m = len(cycle)
    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            if cycle[j] in sets[cycle[i]]:
                return False
    return True


def _normal_cycle(cycle: Sequence[int]) -> tuple:
    m = len(cycle)
    k = cycle.index(min(cycle))
    fwd = tuple(cycle[k:]) + tuple(cycle[:k])
    back = (fwd[0],) + tuple(reversed(fwd[1:]))
    return min(fwd, back)


def find_local_obstructing_cycle(G, v: int, k: int) -> ObstructingCycle | None:
    """Shortest chordless obstructing cycle whose private part is a path of at
    most three vertices inside the degree-bounded ball around ``v``."""
    rot = _rot(G)
    sets = [set(r) for r in rot] if len(rot) < 5000 else None
    if sets is None:
        ball_verts = degree_bounded_ball(rot, v, k + 1).extended
        sets = {x: set(rot[x]) for x in ball_verts}
    ball = degree_bounded_ball(rot, v, k)
    inner, ext = ball.inner, ball.extended
    found: dict[tuple, tuple] = {}
    for u in sorted(inner):
        paths = [[u]]
        for x in rot[u]:
            if x in inner:
                paths.append([u, x])
                for w in rot[x]:
                    if w in inner and w != u:
                        paths.append([u, x, w])
        for path in paths:
            on = set(path)
            S = [a for a in rot[path[0]] if a in ext and a not in on]
            T = {b for b in rot[path[-1]] if b in ext and b not in on}
            for a in S:
                if a in T and len(path) >= 2:
                    _offer(found, sets, path + [a], (a,), tuple(path))
                for b in sets[a]:
                    if b in T and b != a:
                        _offer(found, sets, path + [b, a], (b, a), tuple(path))
    best = None
    for key in sorted(found, key=lambda c: (len(c), c)):
        if is_obstructing(rot, key):
            best = key
            break
    if best is None:
        return None
    public, private = found[best]
    side = cycle_sides(rot, best)
    return ObstructingCycle(best, public, private, frozenset(side[0]) if side else frozenset())


def _offer(found: dict, sets, cycle: list, public: tuple, private: tuple) -> None:
    if len(cycle) > 5 or len(set(cycle)) != len(cycle):
        return
    if not _chordless(sets, cycle):
        return
    key = _normal_cycle(cycle)
    if key not in found:
        found[key] = (public, private)


def _triangle_candidates(rot: Rotations, sets: list[set]) -> list[tuple]:
    out = []
    for a, r in enumerate(rot):
        k = len(r)
        pos = {x: i for i, x in enumerate(r)}
        for b in r:
            if b <= a:
                continue
            for c in sets[a] & sets[b]:
                if c <= b:
                    continue
                i, j = pos[b], pos[c]
                if (j - i) % k in (1, k - 1):
                    continue  # facial
                out.append((a, b, c))
    return out


def _quad_candidates(rot: Rotations, sets: list[set]) -> list[tuple]:
    common: dict[tuple, list] = {}
    for a, r in enumerate(rot):
        for i, x in enumerate(r):
            for y in r[i + 1:]:
                if y not in sets[x]:
                    common.setdefault((min(x, y), max(x, y)), []).append(a)
    out = []
    for (x, y), mids in common.items():
        for i, a in enumerate(mids):
            for b in mids[i + 1:]:
                if b not in sets[a]:
                    out.append(_normal_cycle([x, a, y, b]))
    return sorted(set(out))


# -- reducible configurations ----------------------------------------------------

def _canon(phi: Sequence[int]) -> tuple[int, list[int]]:
    """Canonical ring code and the full color bijection actual -> canonical."""
    m = [-1] * 4
    nxt = 0
    code, mul = 0, 1
    for c in phi:
        if m[c] < 0:
            m[c] = nxt
            nxt += 1
        code += m[c] * mul
        mul *= 4
    for c in range(4):
        if m[c] < 0:
            m[c] = nxt
            nxt += 1
    return code, m


@dataclass
class Reducer:
    conf: Configuration
    levels: dict[int, int]
    witnesses: dict[int, dict[int, int]]
    reducible: bool
    max_level: int | None

    @property
    def name(self) -> str:
        return self.conf.name

    @property
    def ring_size(self) -> int:
        return self.conf.ring_size

    @property
    def anchor_degree(self) -> int:
        return len(self.conf.rotations[self.conf.ring_size])

    def level(self, phi: Sequence[int]) -> int:
        return self.levels.get(_canon(phi)[0], INF_LEVEL)

    def extension(self, phi: Sequence[int]) -> dict[int, int] | None:
        """Interior colors (by completion vertex) extending ring coloring ``phi``."""
        code, m = _canon(phi)
        wit = self.witnesses.get(code)
        if wit is None:
            return None
        inv = [0] * 4
        for actual, canon in enumerate(m):
            inv[canon] = actual
        return {v: inv[c] for v, c in wit.items()}


def _cache_key(conf: Configuration) -> str:
    return hashlib.sha1(serialize_config(conf).encode()).hexdigest()


def make_reducer(conf: Configuration, cache_dir: str | Path | None = None) -> Reducer:
    """Level table and extension witnesses, read from or written to ``cache_dir``."""
    path = Path(cache_dir) / f"ring-{_cache_key(conf)}.json" if cache_dir else None
    if path is not None and path.exists():
        data = json.loads(path.read_text())
        return Reducer(conf, {int(k): v for k, v in data["levels"].items()},
                       {int(k): {int(a): b for a, b in w.items()} for k, w in data["witnesses"].items()},
                       data["reducible"], data["max_level"])
    result = check_d_reducibility(conf)
    reducible = isinstance(result, DReducible)
    red = Reducer(conf, dict(result.table.levels), extension_witnesses(conf), reducible,
                  result.max_level if reducible else None)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps({"levels": red.levels, "witnesses": red.witnesses,
                                    "reducible": red.reducible, "max_level": red.max_level}))
    return red


@dataclass
class ReducerLibrary:
    reducers: list[Reducer]
    singles: dict[int, Reducer]

    @property
    def max_level(self) -> int:
        return max((r.max_level for r in self.reducers if r.max_level is not None), default=0)


def build_library(configs: Iterable[Configuration], cache_dir: str | Path | None = None) -> ReducerLibrary:
    reducers = [make_reducer(c, cache_dir) for c in configs]
    kept = [r for r in reducers if r.reducible]
    kept.sort(key=lambda r: (len(r.conf.interior), r.ring_size))
    singles = {d: make_reducer(from_patch([[-1]], [d], f"deg{d}"), cache_dir) for d in (3, 4, 5)}
    return ReducerLibrary(kept, singles)


@lru_cache(maxsize=None)
def _default_library(cache_dir: str | None) -> ReducerLibrary:
    confs = [load_config(DATA_DIR / f"{name}.conf") for name in DEFAULT_MEMBERS]
    return build_library(confs, cache_dir)


def default_library() -> ReducerLibrary:
    return _default_library(os.environ.get("FOURCOLOR_CACHE"))


@dataclass
class Site:
    """An embedded configuration: ``vmap`` sends completion vertices to graph vertices."""

    reducer: int
    vmap: list[int]
    ring_size: int

    @property
    def ring(self) -> list[int]:
        return self.vmap[:self.ring_size]

    @property
    def interior(self) -> list[int]:
        return self.vmap[self.ring_size:]


def _try_embed(rot: Rotations, crot: Rotations, R: int, g: int, off: int, s: int) -> list[int] | None:
    a = R
    vmap = {a: g}
    used = {g}
    align = {a: off}
    queue = [a]
    while queue:
        w = queue.pop()
        gw = vmap[w]
        gr = rot[gw]
        dw = len(gr)
        o = align[w]
        for k, x in enumerate(crot[w]):
            gx = gr[(o + s * k) % dw]
            have = vmap.get(x)
            if have is None:
                if gx in used:
                    return None
                if x >= R:
                    if len(rot[gx]) != len(crot[x]):
                        return None
                    align[x] = (rot[gx].index(gw) - s * crot[x].index(w)) % len(rot[gx])
                    queue.append(x)
                vmap[x] = gx
                used.add(gx)
            elif have != gx:
                return None
    return [vmap[x] for x in range(len(crot))]


def embed_at(G, reducer: Reducer, g: int) -> list[int] | None:
    """First embedding of the configuration's completion with its first interior
    vertex on ``g`` (either orientation)."""
    rot = _rot(G)
    crot = reducer.conf.rotations
    R = reducer.ring_size
    d = len(crot[R])
    if len(rot[g]) != d:
        return None
    for s in (1, -1):
        for off in range(d):
            vm = _try_embed(rot, crot, R, g, off, s)
            if vm is not None:
                return vm
    return None


def _fan_apex(sets, ring: Sequence[int]) -> int | None:
    """Ring position whose fan adds no edge already present."""
    R = len(ring)
    for p in range(R):
        apex = ring[p]
        if all(ring[(p + t) % R] not in sets[apex] for t in range(2, R - 1)):
            return p
    return None


def _scan_reducibles(rot: Rotations, lib: ReducerLibrary, sets=None, within: set | None = None,
                     taken: bytearray | None = None) -> list[Site]:
    n = len(rot)
    sets = sets if sets is not None else [set(r) for r in rot]
    taken = taken if taken is not None else bytearray(n)
    sites = []
    for ri, red in enumerate(lib.reducers):
        d = red.anchor_degree
        anchors = range(n) if within is None else sorted(within)
        for g in anchors:
            if taken[g] or len(rot[g]) != d:
                continue
            vm = embed_at(rot, red, g)
            if vm is None or any(taken[x] for x in vm):
                continue
            if within is not None and not set(vm[red.ring_size:]) <= within:
                continue
            if _fan_apex(sets, vm[:red.ring_size]) is None:
                continue
            for x in vm:
                taken[x] = 1
            sites.append(Site(ri, vm, red.ring_size))
    return sites


def verify_non_touching(G, sites: Sequence[Site]) -> bool:
    """Closed vertex sets (ring plus interior) are pairwise disjoint."""
    seen: set = set()
    for s in sites:
        closed = set(s.vmap)
        if closed & seen:
            return False
        seen |= closed
    return True


def verify_non_crossing(G, cycles: Sequence[ObstructingCycle]) -> bool:
    """Each cycle keeps every other cycle on one side, and private parts do not touch."""
    rot = _rot(G)
    for i, a in enumerate(cycles):
        left, _ = _side_seeds(rot, a.cycle)
        cset = set(a.cycle)
        side = set(left)
        queue = deque(left)
        while queue:
            x = queue.popleft()
            for y in rot[x]:
                if y not in cset and y not in side:
                    side.add(y)
                    queue.append(y)
        for j, b in enumerate(cycles):
            if i == j:
                continue
            rest = [x for x in b.cycle if x not in cset]
            if rest and len({x in side for x in rest}) > 1:
                return False
            pa = set(a.private or a.cycle)
            pb = set(b.private or b.cycle)
            if pa & pb or any(y in pb for x in pa for y in rot[x]):
                return False
    return True


# -- choosing what to reduce ------------------------------------------------------

@dataclass
class ReductionSets:
    kind: str  # "reducibles" or "obstructions"
    reducibles: list[Site] = field(default_factory=list)
    cycles: list[ObstructingCycle] = field(default_factory=list)


@dataclass
class _Cut:
    ring: list[int]       # cycle order
    interior: list[int]
    public: tuple = ()


def _safe_to_identify(sets, ring: Sequence[int], interior: set) -> bool:
    """Identifying ring vertices two apart creates no parallel edge outside the ring."""
    m = len(ring)
    if m < 4:
        return True
    rset = set(ring)
    for j in range(m):
        x, y = ring[j], ring[(j + 2) % m]
        if any(z not in interior and z not in rset for z in sets[x] & sets[y]):
            return False
    return True


def _select_cuts(rot: Rotations, sets, candidates: Iterable[tuple], limit: int | None,
                 halo: bytearray | None = None) -> list[_Cut]:
    n = len(rot)
    halo = halo if halo is not None else bytearray(n)
    prepared = []
    deferred = []
    for cyc in candidates:
        res = cycle_sides(rot, cyc, limit)
        if res is None:
            deferred.append(cyc)
            continue
        side = res[0]
        if side:
            prepared.append((len(side), len(cyc), cyc, side))
    prepared.sort(key=lambda t: (t[0], t[1], t[2]))
    chosen = []
    for _, _, cyc, side in prepared:
        region = set(cyc) | side
        if any(halo[x] for x in region):
            continue
        if n - len(side) < 3 or not _safe_to_identify(sets, cyc, side):
            continue
        chosen.append(_Cut(list(cyc), sorted(side)))
        for x in region:
            halo[x] = 1
            for y in rot[x]:
                halo[y] = 1
    if not chosen and deferred:
        best = None
        for cyc in deferred:
            side = cycle_sides(rot, cyc)[0]
            if _safe_to_identify(sets, cyc, side) and (best is None or len(side) < len(best[1])):
                best = (cyc, side)
        if best is not None:
            chosen.append(_Cut(list(best[0]), sorted(best[1])))
    return chosen


def _scan_cuts(rot: Rotations, cfg: ColorerConfig, sets=None) -> list[_Cut]:
    sets = sets if sets is not None else [set(r) for r in rot]
    cands: list[tuple] = []
    if 3 in cfg.obstruction_lengths:
        cands += _triangle_candidates(rot, sets)
    if 4 in cfg.obstruction_lengths and not cands:
        cands += _quad_candidates(rot, sets)
    return _select_cuts(rot, sets, cands, cfg.interior_limit)


def _accounting_centers(rot: Rotations, rules) -> tuple[list[int], list[int]]:
    from .discharging import charge_ledger

    ledger = charge_ledger(from_rotations(rot), rules)
    T = ledger.final
    n = len(rot)
    U = [v for v in range(n) if T[v] > 0 or (T[v] == 0 and len(rot[v]) >= 9)]
    alive = set(U)
    U_star = []
    for v in U:
        if v in alive:
            U_star.append(v)
            alive -= degree_bounded_ball(rot, v, 5).extended
    bad = [v for v in range(n) if T[v] != 0 or len(rot[v]) > 8]
    dist = {v: 0 for v in bad}
    queue = deque(bad)
    while queue:
        x = queue.popleft()
        if dist[x] >= 12:
            continue
        for y in rot[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    W = [v for v in range(n) if v not in dist]
    alive = set(W)
    W_star = []
    for w in W:
        if w in alive:
            W_star.append(w)
            alive -= degree_bounded_ball(rot, w, 25).extended
    return U_star, W_star


def find_reduction_sets(G, library: ReducerLibrary | None = None, rules=None, mode: str = "scan",
                        prefer: str = "larger", config: ColorerConfig | None = None) -> ReductionSets:
    """Non-touching embedded reducible configurations or non-crossing obstructing cycles.

    ``mode="accounting"`` thins the charge-selected centers through degree-bounded
    balls and searches locally around each; ``mode="scan"`` tries every vertex.
    """
    rot = _rot(G)
    lib = library or default_library()
    cfg = config or ColorerConfig()
    sets = [set(r) for r in rot]
    if mode == "scan":
        sites = _scan_reducibles(rot, lib, sets) if prefer != "obstructions" else []
        cuts = [] if prefer == "reducibles" and sites else _scan_cuts(rot, cfg, sets)
        cycles = [ObstructingCycle(tuple(c.ring), (), tuple(c.ring), frozenset(c.interior)) for c in cuts]
    elif mode == "accounting":
        if rules is None:
            raise ValueError("accounting needs a rule set")
        U_star, W_star = _accounting_centers(rot, rules)
        sites, cycles = [], []
        taken = bytearray(len(rot))
        for v, k in [(v, 2) for v in U_star] + [(w, 12) for w in W_star]:
            cyc = find_local_obstructing_cycle(rot, v, k)
            if cyc is not None:
                if verify_non_crossing(rot, cycles + [cyc]):
                    cycles.append(cyc)
                continue
            ball = degree_bounded_ball(rot, v, k).inner
            sites += _scan_reducibles(rot, lib, sets, within=set(ball), taken=taken)[:1]
        assert verify_non_touching(rot, sites)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if not sites and not cycles:
        raise NothingFound("no reducible configuration and no obstructing cycle")
    if prefer == "reducibles":
        kind = "reducibles" if sites else "obstructions"
    elif prefer == "obstructions":
        kind = "obstructions" if cycles else "reducibles"
    else:
        kind = "reducibles" if len(sites) >= len(cycles) else "obstructions"
    return ReductionSets(kind, sites if kind == "reducibles" else [], cycles if kind == "obstructions" else [])


# -- graph surgery ----------------------------------------------------------------

def _run_bounds(lst: Sequence[int], removed) -> tuple[int, int, int]:
    """Start index and length of the single run of removed vertices, and the kept
    neighbour just before it."""
    k = len(lst)
    for i in range(k):
        if removed[lst[i]] and not removed[lst[i - 1]]:
            L = 1
            while removed[lst[(i + L) % k]]:
                L += 1
            return i, L, lst[i - 1]
    raise ValueError("no removed neighbour")


def _hole_order(rot: Rotations, ring: Sequence[int], removed) -> list[int]:
    """Ring vertices so that each face of the filling meets them in this order."""
    pred = {r: _run_bounds(rot[r], removed)[2] for r in ring}
    order = [ring[0]]
    while len(order) < len(ring):
        order.append(pred[order[-1]])
    if pred[order[-1]] != order[0]:
        raise ValueError("ring does not bound the hole")
    return order


def _fan(order: Sequence[int], apex_pos: int = 0) -> list[tuple]:
    x = list(order[apex_pos:]) + list(order[:apex_pos])
    return [(x[0], x[k], x[k + 1]) for k in range(1, len(x) - 1)]


def _patch(rot: Rotations, removed, faces: Sequence[tuple], n_new: int = 0) -> list:
    n = len(rot)
    work: list = [None if removed[v] else rot[v] for v in range(n)] + [None] * n_new
    follow: dict[int, dict] = {}
    for a, b, c in faces:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            follow.setdefault(x, {})[y] = z
    for x, fx in follow.items():
        if x >= n:
            start = min(fx)
            order = [start]
            y = fx[start]
            while y != start:
                order.append(y)
                y = fx[y]
            work[x] = order
            continue
        lst = rot[x]
        i0, L, _ = _run_bounds(lst, removed)
        rotated = lst[i0:] + lst[:i0]
        rest = rotated[L:]
        a0, b0 = rest[-1], rest[0]
        seq = []
        y = fx[a0]
        while y != b0:
            seq.append(y)
            y = fx[y]
        work[x] = rest + seq
    return work


def _contract(work: list, x: int, y: int) -> None:
    rx = work[x]
    i = rx.index(y)
    rx = rx[i:] + rx[:i]
    ry = work[y]
    j = ry.index(x)
    ry = ry[j:] + ry[:j]
    p1, pk = rx[1], rx[-1]
    if ry[1] != pk or ry[-1] != p1:
        raise ValueError("edge is not between two faces")
    middle = ry[2:-1]
    work[x] = rx[1:] + middle
    for z in middle:
        work[z] = [x if t == y else t for t in work[z]]
    for p in (p1, pk):
        work[p] = [t for t in work[p] if t != y]
    work[y] = None


def _compact(work: list, alias: dict, n_old: int) -> tuple[Rotations, np.ndarray, list[int]]:
    ids = [-1] * len(work)
    nxt = 0
    for v, w in enumerate(work):
        if w is not None:
            ids[v] = nxt
            nxt += 1
    for v, root in alias.items():
        while work[root] is None:
            root = alias[root]
        ids[v] = ids[root]
    new_rot = [[ids[t] for t in w] for w in work if w is not None]
    return new_rot, np.array(ids[:n_old], dtype=np.int64), ids[n_old:]


def _remove_sites(rot: Rotations, sites: Sequence[Site], sets) -> tuple[Rotations, np.ndarray]:
    removed = bytearray(len(rot))
    for s in sites:
        for x in s.interior:
            removed[x] = 1
    faces = []
    for s in sites:
        order = _hole_order(rot, s.ring, removed)
        p = _fan_apex(sets, order)
        faces += _fan(order, p)
    work = _patch(rot, removed, faces)
    new_rot, old2new, _ = _compact(work, {}, len(rot))
    return new_rot, old2new


# -- improving Kempe changes on many rings ----------------------------------------

def _flip_options(red: Reducer, phi: tuple, blocks: tuple, split: int, cache: dict):
    key = (id(red), phi, blocks, split)
    hit = cache.get(key)
    if hit is not None:
        return hit
    m = max(blocks) + 1
    best = (INF_LEVEL, 0, 0)
    for mask in range(1, 1 << m):
        new = tuple(c ^ split if (mask >> b) & 1 else c for c, b in zip(phi, blocks))
        lvl = red.level(new)
        cand = (lvl, bin(mask).count("1"), mask)
        if cand < best:
            best = cand
    cache[key] = best
    return best


def _blocks(labels_on_ring: Sequence[int]) -> tuple[tuple, list[int]]:
    ids: dict[int, int] = {}
    blocks = []
    for c in labels_on_ring:
        if c not in ids:
            ids[c] = len(ids)
        blocks.append(ids[c])
    return tuple(blocks), list(ids)


def _wanted(rot_n, u, v, col, sites, lib, active, labels, cache):
    """Each active ring's improving (split, chain decisions)."""
    choices = {}
    for si in active:
        s = sites[si]
        red = lib_reducer(lib, s)
        phi = tuple(int(c) for c in col[s.ring])
        cur = red.level(phi)
        best = None
        for split in (1, 2, 3):
            if split not in labels:
                labels[split] = _chain_labels(rot_n, u, v, col, split)
            blocks, chains = _blocks(labels[split][s.ring].tolist())
            lvl, _, mask = _flip_options(red, phi, blocks, split, cache)
            if lvl < cur and (best is None or (lvl, split) < (best[0], best[1])):
                want = {c: bool((mask >> b) & 1) for b, c in enumerate(chains)}
                best = (lvl, split, want)
        if best is None:
            raise StuckRing(f"ring of {red.name} at level {cur} has no improving change",
                            {"ring": s.ring, "colors": list(phi)})
        choices[si] = best
    return choices


def lib_reducer(lib: ReducerLibrary, site: Site) -> Reducer:
    return lib.singles[-site.reducer] if site.reducer < 0 else lib.reducers[site.reducer]


def deterministic_kempe_change(n: int, u, v, col: np.ndarray, sites: Sequence[Site], lib: ReducerLibrary,
                               active: Sequence[int], cache: dict | None = None) -> dict:
    """Pick and execute one Kempe change by conditional expectations.

    Returns the chosen split, the expectation after the split vote, the rings
    that got every wanted decision, and the flipped chains.
    """
    cache = cache if cache is not None else {}
    labels: dict[int, np.ndarray] = {}
    choices = _wanted(n, u, v, col, sites, lib, active, labels, cache)
    votes = Counter(ch[1] for ch in choices.values())
    split = min(votes, key=lambda i: (-votes[i], i))
    want = {si: ch[2] for si, ch in choices.items() if ch[1] == split}
    undecided = {si: len(w) for si, w in want.items()}
    expectation = sum(2.0 ** -k for k in undecided.values())
    by_chain: dict[int, list[int]] = {}
    for si, w in want.items():
        for c in w:
            by_chain.setdefault(c, []).append(si)
    alive = set(want)
    current = expectation
    flips = []
    for c in sorted(by_chain):
        yes = no = 0.0
        for si in by_chain[c]:
            if si in alive:
                gain = 2.0 ** -(undecided[si] - 1)
                if want[si][c]:
                    yes += gain
                else:
                    no += gain
        swap = yes > no  # exact ties keep the chain as it is
        for si in by_chain[c]:
            if si in alive:
                if want[si][c] != swap:
                    alive.discard(si)
                else:
                    undecided[si] -= 1
        if swap:
            flips.append(c)
        after = sum(2.0 ** -undecided[si] for si in alive)
        assert after >= current - 1e-9, "conditional expectation decreased"
        current = after
    if flips:
        mask = np.isin(labels[split], np.array(flips, dtype=np.int64)) & (col >= 0)
        col[mask] ^= split
    return {"split": split, "expectation": expectation, "alive": alive, "flips": flips}


def _extend(rot_sets, col: np.ndarray, site: Site, red: Reducer) -> bool:
    phi = tuple(int(c) for c in col[site.ring])
    ext = red.extension(phi)
    if ext is None:
        return False
    for p, c in ext.items():
        col[site.vmap[p]] = c
    return True


def batch_reduce_and_color(rot: Rotations, col: np.ndarray, sites: Sequence[Site], lib: ReducerLibrary,
                           cfg: ColorerConfig | None = None, stats: ColoringStats | None = None) -> np.ndarray:
    """Color the emptied interiors of ``sites`` given a coloring of everything else."""
    cfg = cfg or ColorerConfig()
    stats = stats if stats is not None else ColoringStats()
    n = len(rot)
    u, v = _edge_arrays(rot)
    cache: dict = {}
    empty = []
    for si, s in enumerate(sites):
        if not _extend(None, col, s, lib_reducer(lib, s)):
            empty.append(si)
    rounds_per_pass = max(lib.max_level, 1)
    while empty:
        if any(sites[si].reducer < 0 for si in empty):
            _random_repair(n, u, v, col, sites, lib, empty, cfg, stats, cache)
            break
        active = list(empty)
        extended = 0
        for _ in range(rounds_per_pass):
            if not active:
                break
            before = {si: lib_reducer(lib, sites[si]).level(tuple(col[sites[si].ring].tolist())) for si in empty}
            out = deterministic_kempe_change(n, u, v, col, sites, lib, active, cache)
            stats.kempe_rounds += 1
            if cfg.check_invariants and not _proper(u, v, col):
                raise AssertionError("Kempe change broke properness")
            after = {si: lib_reducer(lib, sites[si]).level(tuple(col[sites[si].ring].tolist())) for si in empty}
            improved = [si for si in active if after[si] < before[si]]
            assert out["alive"] <= set(improved), "a ring with all wanted decisions did not improve"
            assert len(improved) >= out["expectation"] - 1e-9
            stats.rounds.append((len(active), len(improved), out["expectation"]))
            for si in improved:
                stats.site_changes[lib_reducer(lib, sites[si]).name] += 1
            done = set()
            for si in empty:
                if after[si] == 0 and _extend(None, col, sites[si], lib_reducer(lib, sites[si])):
                    done.add(si)
            extended += len(done)
            active = [si for si in improved if si not in done]
            empty = [si for si in empty if si not in done]
        if extended == 0:
            raise StuckRing("a pass of improving Kempe changes extended no ring",
                            {"rings": [sites[si].ring for si in empty]})
    return col


def _random_repair(n, u, v, col, sites, lib, pending, cfg, stats, cache) -> None:
    """Single-site repair for a configuration without a full level table: take an
    improving change when one exists, otherwise a random Kempe change at the ring."""
    rng = random.Random(cfg.seed)
    for si in pending:
        s = sites[si]
        red = lib_reducer(lib, s)
        attempts = 0
        while not _extend(None, col, s, red):
            labels: dict = {}
            try:
                _wanted(n, u, v, col, sites, lib, [si], labels, cache)
                deterministic_kempe_change(n, u, v, col, sites, lib, [si], cache)
            except StuckRing:
                attempts += 1
                stats.random_kempe += 1
                if attempts > cfg.max_random_kempe:
                    raise StuckRing("random Kempe changes did not free a color",
                                    {"ring": s.ring, "colors": col[s.ring].tolist()})
                split = rng.choice((1, 2, 3))
                lab = _chain_labels(n, u, v, col, split)
                chain = lab[rng.choice(s.ring)]
                col[(lab == chain) & (col >= 0)] ^= split
            if cfg.check_invariants and not _proper(u, v, col):
                raise AssertionError("Kempe change broke properness")


# -- obstructing 4- and 5-rings ---------------------------------------------------

@dataclass
class RingCase:
    case: str                 # "i", "ii" or "iii"
    j: int | None             # 1-based ring index, None for "iii"
    colorings: list           # full colorings of H
    kempe_changes: int = 0


def _bichain(rot: Rotations, col, v: int, a: int, b: int) -> set:
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for y in rot[x]:
            if y not in seen and (col[y] == a or col[y] == b):
                seen.add(y)
                stack.append(y)
    return seen


def _swapped(col, chain: set, a: int, b: int):
    new = list(col)
    for x in chain:
        new[x] = b if new[x] == a else a
    return new


def _x4(rot: Rotations, ring: Sequence[int], col: list) -> RingCase:
    c = [col[x] for x in ring]
    distinct = len(set(c))
    if distinct == 4:
        if ring[2] in _bichain(rot, col, ring[0], c[0], c[2]):
            ch = _bichain(rot, col, ring[3], c[1], c[3])
            assert ring[1] not in ch
            return RingCase("i", 1, [col, _swapped(col, ch, c[1], c[3])], 1)
        ch = _bichain(rot, col, ring[2], c[2], c[0])
        return RingCase("i", 2, [col, _swapped(col, ch, c[2], c[0])], 1)
    if distinct == 3:
        shift = 0 if c[0] == c[2] else 1
        r = list(ring[shift:]) + list(ring[:shift])
        rc = [col[x] for x in r]
        missing = ({0, 1, 2, 3} - set(rc)).pop()
        ch = _bichain(rot, col, r[2], rc[2], missing)
        if r[0] not in ch:
            j, out = 2, [col, _swapped(col, ch, rc[2], missing)]
            case = "i"
        else:
            ch2 = _bichain(rot, col, r[3], rc[1], rc[3])
            assert r[1] not in ch2
            j, out = 1, [col, _swapped(col, ch2, rc[1], rc[3])]
            case = "ii"
        return RingCase(case, (shift + j - 1) % 2 + 1, out, 1)
    a, b = c[0], c[1]
    spare = sorted({0, 1, 2, 3} - {a, b})
    ch = _bichain(rot, col, ring[0], a, spare[0])
    if ring[2] not in ch:
        return RingCase("ii", 2, [col, _swapped(col, ch, a, spare[0])], 1)
    ch2 = _bichain(rot, col, ring[1], b, spare[1])
    assert ring[3] not in ch2
    return RingCase("ii", 1, [col, _swapped(col, ch2, b, spare[1])], 1)


def _unique_position(c: Sequence[int]) -> int:
    counts = Counter(c)
    return next(i for i, x in enumerate(c) if counts[x] == 1)


def _x5(rot: Rotations, ring: Sequence[int], col: list) -> RingCase:
    if len({col[x] for x in ring}) != 3:
        raise ValueError("the 5-ring must carry exactly three colors")
    found = [col]
    cur = col
    changes = 0
    for _ in range(4):
        s = _unique_position([cur[x] for x in ring])
        r = list(ring[s:]) + list(ring[:s])
        c1, c2 = cur[r[0]], cur[r[1]]
        ch = _bichain(rot, cur, r[3], c2, c1)
        if r[0] in ch:
            break
        cur = _swapped(cur, ch, c1, c2)
        changes += 1
        found.append(cur)
    else:
        return RingCase("iii", None, found, changes)
    K = cur
    c1, c2, c3 = K[r[0]], K[r[1]], K[r[2]]
    c4 = ({0, 1, 2, 3} - {c1, c2, c3}).pop()
    ch = _bichain(rot, K, r[2], c3, c4)
    assert r[4] not in ch
    A = _swapped(K, ch, c3, c4)
    ch24 = _bichain(rot, K, r[1], c2, c4)
    if r[3] in ch24:
        ch13 = _bichain(rot, K, r[0], c1, c3)
        assert r[2] not in ch13
        B = _swapped(K, ch13, c1, c3)
        case, j, out, extra = "ii", 2, [K, A, B], 2
    else:
        C = _swapped(K, ch24, c2, c4)
        ch34 = _bichain(rot, C, r[4], c3, c4)
        if r[1] not in ch34 and r[2] not in ch34:
            D = _swapped(C, ch34, c3, c4)
            case, j, out, extra = "i", 1, [K, A, C, D], 3
        else:
            ch12 = _bichain(rot, C, r[3], c2, c1)
            assert r[0] not in ch12
            E = _swapped(C, ch12, c1, c2)
            case, j, out, extra = "ii", 3, [K, C, E], 3
    return RingCase(case, (s + j - 1) % 5 + 1, out, changes + extra)


def _check_ring_case(rot: Rotations, out: RingCase) -> None:
    for K in out.colorings:
        for a, r in enumerate(rot):
            for b in r:
                assert K[a] != K[b], "ring procedure produced an improper coloring"


def x4_reduce(H, ring: Sequence[int], coloring: Sequence[int]) -> RingCase:
    """At most one Kempe change on a colored disc bounded by a 4-ring."""
    rot = _rot(H)
    out = _x4(rot, ring, [c - 1 for c in coloring])
    _check_ring_case(rot, out)
    out.colorings = [[c + 1 for c in K] for K in out.colorings]
    return out


def x5_reduce(H, ring: Sequence[int], coloring: Sequence[int]) -> RingCase:
    """At most six Kempe changes on a colored disc bounded by a 3-colored 5-ring."""
    rot = _rot(H)
    out = _x5(rot, ring, [c - 1 for c in coloring])
    _check_ring_case(rot, out)
    out.colorings = [[c + 1 for c in K] for K in out.colorings]
    return out


def ring_partition(colors: Sequence[int]) -> tuple:
    return tuple(_canon_list(colors))


def _canon_list(colors: Sequence[int]) -> list[int]:
    m: dict = {}
    return [m.setdefault(c, len(m)) for c in colors]


# -- cutting along obstructing cycles ---------------------------------------------

@dataclass
class _CutRecord:
    ring: list[int]
    interior: list[int]
    colorings: list  # over local ids: ring first, then interior


def _disc(rot: Rotations, cut: _Cut, removed) -> tuple[Rotations, list[int]]:
    """The closed inside of the cut as a near-triangulation; ring gets local ids 0..m-1."""
    local = {x: i for i, x in enumerate(cut.ring + cut.interior)}
    out: Rotations = []
    for x in cut.ring:
        lst = rot[x]
        i0, L, a0 = _run_bounds(lst, removed)
        run = (lst[i0:] + lst[:i0])[:L]
        b0 = lst[(i0 + L) % len(lst)]
        out.append([local[a0]] + [local[y] for y in run] + [local[b0]])
    for x in cut.interior:
        out.append([local[y] for y in rot[x]])
    return out, [local[x] for x in cut.ring]


def _with_star(H: Rotations, ring: Sequence[int]) -> Rotations:
    s = len(H)
    Hs = [list(r) for r in H] + [[]]
    after = {}
    for x in ring:
        Hs[x].append(s)
        after[x] = H[x][-1]
    order = [ring[0]]
    while len(order) < len(ring):
        order.append(after[order[-1]])
    Hs[s] = order
    return Hs


def _cut_cycles(rot: Rotations, cuts: Sequence[_Cut], lib, cfg, stats) -> tuple[Rotations, np.ndarray, list]:
    n = len(rot)
    removed = bytearray(n)
    for cut in cuts:
        for x in cut.interior:
            removed[x] = 1
    faces, idents, records = [], [], []
    n_new = 0
    for cut in cuts:
        H, ring_local = _disc(rot, cut, removed)
        m = len(cut.ring)
        if m == 3:
            colH = _color(H, lib, cfg, stats).tolist()
            outcome = RingCase("iii", None, [colH])
        else:
            colH = _color(_with_star(H, ring_local), lib, cfg, stats)[:-1].tolist()
            outcome = _x4(H, ring_local, colH) if m == 4 else _x5(H, ring_local, colH)
            if cfg.check_invariants:
                _check_ring_case(H, outcome)
        records.append(_CutRecord(cut.ring, cut.interior, outcome.colorings))
        order = _hole_order(rot, cut.ring, removed)
        if m == 3:
            faces += _fan(order)
        elif outcome.case == "iii":
            star = n + n_new
            n_new += 1
            faces += [(star, order[k], order[(k + 1) % m]) for k in range(m)]
        else:
            x = cut.ring[outcome.j - 1]
            faces += _fan(order, order.index(x))
            if outcome.case == "ii":
                idents.append((x, cut.ring[(outcome.j + 1) % m]))
    work = _patch(rot, removed, faces, n_new)
    alias = {}
    for x, y in idents:
        _contract(work, x, y)
        alias[y] = x
    new_rot, old2new, _ = _compact(work, alias, n)
    stats.cycle_cuts += len(cuts)
    return new_rot, old2new, records


def _glue(col: np.ndarray, records: Sequence[_CutRecord]) -> None:
    for rec in records:
        target = ring_partition(col[rec.ring].tolist())
        m = len(rec.ring)
        for K in rec.colorings:
            if ring_partition(K[:m]) == target:
                perm = {}
                for k, x in zip(K[:m], rec.ring):
                    perm[k] = int(col[x])
                free = [c for c in range(4) if c not in perm.values()]
                for k in range(4):
                    if k not in perm:
                        perm[k] = free.pop(0)
                for i, x in enumerate(rec.interior):
                    col[x] = perm[K[m + i]]
                break
        else:
            raise StuckRing("no stored coloring matches the ring", {"ring": rec.ring, "colors": col[rec.ring].tolist()})


def recurse_obstructions(G, cycles: Sequence[ObstructingCycle], library: ReducerLibrary | None = None,
                         config: ColorerConfig | None = None, stats: ColoringStats | None = None) -> Coloring:
    """Cut along the innermost usable cycles of ``cycles`` and color the rest."""
    rot = _rot(G)
    check_triangulation(rot)
    lib = library or default_library()
    cfg = config or ColorerConfig()
    stats = stats if stats is not None else ColoringStats()
    if not cycles:
        return _public(_color(rot, lib, cfg, stats))
    sets = [set(r) for r in rot]
    cuts = _select_cuts(rot, sets, [tuple(c.cycle) for c in cycles], None)
    if not cuts:
        return _public(_color(rot, lib, cfg, stats))
    new_rot, old2new, records = _cut_cycles(rot, cuts, lib, cfg, stats)
    inner = _color(new_rot, lib, cfg, stats)
    col = _lift(inner, old2new)
    _glue(col, records)
    _assert_proper(rot, col)
    return _public(col)


# -- driver -----------------------------------------------------------------------

def _lift(inner: np.ndarray, old2new: np.ndarray) -> np.ndarray:
    col = np.full(len(old2new), -1, dtype=np.int8)
    keep = old2new >= 0
    col[keep] = inner[old2new[keep]]
    return col


def _assert_proper(rot: Rotations, col: np.ndarray) -> None:
    u, v = _edge_arrays(rot)
    if np.any(col < 0) or not _proper(u, v, col):
        raise AssertionError("coloring is not proper")


def _single_site(rot: Rotations, lib: ReducerLibrary, sets) -> Site:
    order = sorted(range(len(rot)), key=lambda x: (len(rot[x]), x))
    for g in order:
        d = len(rot[g])
        if d > 5:
            break
        red = lib.singles[d]
        vm = embed_at(rot, red, g)
        if vm is not None and _fan_apex(sets, vm[:d]) is not None:
            return Site(-d, vm, d)
    raise NothingFound("no vertex of degree at most 5 can be removed")


def _color(rot: Rotations, lib: ReducerLibrary, cfg: ColorerConfig, stats: ColoringStats) -> np.ndarray:
    stack = []
    cur = rot
    while len(cur) > 4:
        stats.levels += 1
        sets = [set(r) for r in cur]
        sites = _scan_reducibles(cur, lib, sets) if cfg.prefer != "obstructions" else []
        cuts = []
        if not sites or cfg.prefer != "reducibles":
            cuts = _scan_cuts(cur, cfg, sets)
            if cfg.prefer == "larger" and len(sites) >= len(cuts):
                cuts = []
            if cfg.prefer == "obstructions" and not cuts:
                sites = _scan_reducibles(cur, lib, sets)
        if cuts:
            nxt, old2new, records = _cut_cycles(cur, cuts, lib, cfg, stats)
            stack.append(("cut", cur, old2new, records))
        else:
            if not sites:
                sites = [_single_site(cur, lib, sets)]
                stats.single_sites += 1
            else:
                stats.batch_sites += len(sites)
            nxt, old2new = _remove_sites(cur, sites, sets)
            stack.append(("sites", cur, old2new, sites))
        cur = nxt
    col = np.arange(len(cur), dtype=np.int8)
    for kind, graph, old2new, payload in reversed(stack):
        col = _lift(col, old2new)
        if kind == "cut":
            _glue(col, payload)
        else:
            batch_reduce_and_color(graph, col, payload, lib, cfg, stats)
        if cfg.check_invariants:
            _assert_proper(graph, col)
    return col


def four_color(G, library: ReducerLibrary | None = None, config: ColorerConfig | None = None,
               stats: ColoringStats | None = None) -> Coloring:
    rot = _rot(G)
    check_triangulation(rot)
    lib = library or default_library()
    cfg = config or ColorerConfig()
    stats = stats if stats is not None else ColoringStats()
    col = _color([list(r) for r in rot], lib, cfg, stats)
    _assert_proper(rot, col)
    return _public(col)


def read_coloring(text: str) -> Coloring:
    pairs = [tuple(map(int, line.split())) for line in text.splitlines() if line.strip()]
    out = [0] * (max(v for v, _ in pairs) + 1) if pairs else []
    for v, c in pairs:
        out[v] = c
    return out


def write_coloring(coloring: Sequence[int]) -> str:
    return "".join(f"{v} {c}\n" for v, c in enumerate(coloring))
