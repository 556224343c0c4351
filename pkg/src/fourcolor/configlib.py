"""Configurations, their free completions and containment tests.

File grammar (one configuration per file)::

    # optional comment lines; "# name: foo" sets the name
    N R
    <degree of vertex R>
    ...
    <degree of vertex N-1>
    0: a0 a1 ...
    ...
    N-1: ...

The rotation lines describe the free completion: vertices ``0..R-1`` form
the ring in cyclic order and each ring rotation ends with ``-1``.  The
configuration itself is the subgraph induced by vertices ``R..N-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx

from .dartcore import NIL, PseudoTriangulation, from_rotations
from .homcore import INF, PseudoConfiguration, homomorphism, include, mirror

CONF_DEG_MAX = 12


class ParseError(ValueError):
    pass


class InvariantViolation(ValueError):
    def __init__(self, requirement: str, message: str):
        super().__init__(f"({requirement}) {message}")
        self.requirement = requirement


class InvalidConfiguration(ValueError):
    pass


@dataclass
class Configuration:
    """A configuration stored through its free completion."""

    rotations: list[list[int]]
    ring_size: int
    degrees: list[int]  # indexed by vertex; ring entries are unused (0)
    name: str = ""

    @property
    def n_vertices(self) -> int:
        return len(self.rotations)

    @property
    def interior(self) -> range:
        return range(self.ring_size, self.n_vertices)

    def z_neighbours(self, v: int) -> list[int]:
        return [u for u in self.rotations[v] if u >= self.ring_size]

    def z_degree(self, v: int) -> int:
        return len(self.z_neighbours(v))

    def z_graph(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(self.interior)
        for v in self.interior:
            for u in self.z_neighbours(v):
                G.add_edge(v, u)
        return G

    def z_rotations(self) -> list[list[int]]:
        """Rotations of the configuration itself (ring runs collapsed to ``-1``),
        indexed from 0 after dropping the ring."""
        R = self.ring_size
        out = []
        for v in self.interior:
            rot = []
            for u in self.rotations[v]:
                if u >= R:
                    rot.append(u - R)
                elif not rot or rot[-1] != -1:
                    rot.append(-1)
            if len(rot) > 1 and rot[0] == -1 and rot[-1] == -1:
                rot.pop()
            out.append(rot)
        return out

    def completion(self) -> PseudoTriangulation:
        return from_rotations(self.rotations)


@dataclass
class FreeCompletion:
    zhat: PseudoTriangulation
    ring: list[int]
    ring_size: int
    rotations: list[list[int]] = field(default_factory=list)
    interior_degrees: dict = field(default_factory=dict)


# -- parsing ---------------------------------------------------------------

def parse_config(text: str, validate_config: bool = True) -> Configuration:
    name = ""
    rows = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.startswith("name:"):
                name = body[5:].strip()
            continue
        if stripped:
            rows.append(stripped)
    try:
        n, ring = (int(x) for x in rows[0].split()[:2])
        degrees = [0] * n
        for i in range(n - ring):
            degrees[ring + i] = int(rows[1 + i].split()[-1])
        rotations: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for row in rows[1 + n - ring:1 + n - ring + n]:
            left, sep, right = row.partition(":")
            if not sep:
                raise ParseError(f"rotation line without ':' -> {row!r}")
            v = int(left)
            rotations[v] = [int(x) for x in right.split()]
            seen.add(v)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed configuration: {exc}") from exc
    if len(seen) != n:
        raise ParseError(f"expected {n} rotation lines, got {len(seen)}")
    conf = Configuration(rotations, ring, degrees, name)
    if validate_config:
        validate(conf)
    return conf


def serialize_config(conf: Configuration) -> str:
    lines = []
    if conf.name:
        lines.append(f"# name: {conf.name}")
    lines.append(f"{conf.n_vertices} {conf.ring_size}")
    lines += [str(conf.degrees[v]) for v in conf.interior]
    lines += [f"{v}: " + " ".join(str(x) for x in rot) for v, rot in enumerate(conf.rotations)]
    return "\n".join(lines) + "\n"


def load_config(path: str | Path) -> Configuration:
    path = Path(path)
    conf = parse_config(path.read_text())
    if not conf.name:
        conf.name = path.stem
    return conf


def load_directory(path: str | Path, pattern: str = "*.conf") -> list[Configuration]:
    return [load_config(p) for p in sorted(Path(path).glob(pattern))]


def validate(conf: Configuration) -> None:
    """Raise :class:`InvariantViolation` unless the configuration is well formed."""
    R, n = conf.ring_size, conf.n_vertices
    if R < 2 or n <= R:
        raise InvariantViolation("Z1", "need a ring and at least one configuration vertex")
    try:
        from_rotations(conf.rotations)
    except ValueError as exc:
        raise InvariantViolation("Z1", f"rotations inconsistent: {exc}") from exc
    for p in range(R):
        rot = conf.rotations[p]
        if not rot or rot[-1] != -1 or rot[0] != (p + 1) % R or rot[-2] != (p - 1) % R:
            raise InvariantViolation("Z2", f"ring vertex {p} does not list its ring neighbours in order")
    graph = conf.z_graph()
    if not nx.is_connected(graph):
        raise InvariantViolation("Z1", "configuration is disconnected")
    cuts = set(nx.articulation_points(graph)) if len(graph) > 2 else set()
    for v in conf.interior:
        rot = conf.rotations[v]
        if -1 in rot:
            raise InvariantViolation("Z1", f"vertex {v} of the configuration carries a boundary mark")
        ring_nbrs = [u for u in rot if u < R]
        d_z = len(rot) - len(ring_nbrs)
        if not ring_nbrs:
            if conf.degrees[v] != len(rot):
                raise InvariantViolation("Z1", f"inner vertex {v}: degree {conf.degrees[v]} != {len(rot)}")
            continue
        if conf.degrees[v] <= d_z:
            raise InvariantViolation("Z2", f"boundary vertex {v}: degree {conf.degrees[v]} <= {d_z}")
        if conf.degrees[v] != len(rot):
            raise InvariantViolation("Z2", f"boundary vertex {v}: completion has {len(rot)} neighbours")
        if v in cuts and conf.degrees[v] != d_z + 2:
            raise InvariantViolation("Z3", f"cut vertex {v} must have degree {d_z + 2}")
    if len(cuts) > 1:
        raise InvariantViolation("Z3", f"{len(cuts)} cut vertices")
    for v in cuts:
        blocks = [b for b in nx.biconnected_components(graph) if v in b]
        if len(blocks) != 2:
            raise InvariantViolation("Z3", f"cut vertex {v} lies in {len(blocks)} blocks")
    find_cut_pairs(conf)


# -- free completion -------------------------------------------------------

def from_patch(z_rotations: Sequence[Sequence[int]], degrees: Sequence[int], name: str = "") -> Configuration:
    """Build the free completion of a near-triangulation given with ``-1`` gaps.

    ``z_rotations[v]`` lists the neighbours of ``v`` clockwise with ``-1`` in each
    outer-face gap; a single isolated vertex may be given as ``[]`` or ``[-1]``.
    """
    n = len(z_rotations)
    if n == 1 and all(x == -1 for x in z_rotations[0]):
        d = degrees[0]
        rotations = [[(j + 1) % d, d, (j - 1) % d, -1] for j in range(d)]
        rotations.append(list(range(d)))
        return Configuration(rotations, d, [0] * d + [d], name)

    gaps = []  # (vertex, before, after, index of the -1)
    for v, rot in enumerate(z_rotations):
        k = len(rot)
        for i, x in enumerate(rot):
            if x == -1:
                gaps.append((v, rot[(i - 1) % k], rot[(i + 1) % k], i))
    by_before = {(v, a): (v, a, b, i) for v, a, b, i in gaps}
    walk = [gaps[0]]
    while True:
        v, a, b, _ = walk[-1]
        nxt = by_before[(b, v)]
        if nxt == walk[0]:
            break
        walk.append(nxt)
    if len(walk) != len(gaps):
        raise InvalidConfiguration("outer face is not a single walk")

    gap_count = [0] * n
    for v, *_ in gaps:
        gap_count[v] += 1
    z_deg = [sum(1 for x in rot if x != -1) for rot in z_rotations]
    ext = []
    for v, *_ in walk:
        missing = degrees[v] - z_deg[v]
        if gap_count[v] == 1:
            ext.append(missing)
        elif missing == gap_count[v]:
            ext.append(1)
        else:
            raise InvalidConfiguration(f"vertex {v} appears {gap_count[v]} times on the boundary")
        if ext[-1] < 1:
            raise InvalidConfiguration(f"boundary vertex {v} needs a neighbour outside")
    t = len(walk)
    starts = list(itertools.accumulate([0] + [x - 1 for x in ext]))
    R = starts[-1]
    if R < 3:
        raise InvalidConfiguration(f"ring of size {R}")
    ring_of = [[(starts[i] + j) % R for j in range(ext[i])] for i in range(t)]

    rotations: list[list[int]] = [[] for _ in range(R + n)]
    new_z = [list(rot) for rot in z_rotations]
    fill = {}
    for i, (v, a, b, idx) in enumerate(walk):
        fill[(v, idx)] = [p for p in ring_of[i]]
    for v, rot in enumerate(new_z):
        out = []
        for idx, x in enumerate(rot):
            if x == -1:
                out += fill[(v, idx)]
            else:
                out.append(x + R)
        rotations[R + v] = out

    touching: list[list[int]] = [[] for _ in range(R)]
    for i in range(t):
        for p in ring_of[i]:
            touching[p].append(i)
    for p in range(R):
        occ = touching[p]
        # order the touching occurrences along the walk, starting after a gap in the cyclic run
        if len(occ) > 1:
            occ_set = set(occ)
            start = next(i for i in occ if (i - 1) % t not in occ_set)
            occ = sorted(occ, key=lambda i: (i - start) % t)
        verts = [walk[i][0] + R for i in occ]
        rotations[p] = [(p + 1) % R] + verts[::-1] + [(p - 1) % R, -1]
    degs = [0] * R + list(degrees)
    return Configuration(rotations, R, degs, name)


def ring_size_formula(z_rotations: Sequence[Sequence[int]], degrees: Sequence[int]) -> int:
    """Sum of degrees minus twice the edges minus the outer walk length."""
    if len(z_rotations) == 1 and all(x == -1 for x in z_rotations[0]):
        return degrees[0]
    edges2 = sum(1 for rot in z_rotations for x in rot if x != -1)
    walk = sum(1 for rot in z_rotations for x in rot if x == -1)
    return sum(degrees) - edges2 - walk


def free_completion(conf: Configuration) -> FreeCompletion:
    degs = {v: conf.degrees[v] for v in conf.interior}
    return FreeCompletion(conf.completion(), list(range(conf.ring_size)), conf.ring_size,
                          [list(r) for r in conf.rotations], degs)


# -- the diameter condition ------------------------------------------------

def check_D0(conf: Configuration) -> bool:
    """Diameter at most 4, and every distance-4 pair has a shortest path that
    either uses a non-boundary edge or passes through a non-cut vertex with at
    least two neighbours outside."""
    graph = conf.z_graph()
    if len(graph) == 1:
        return True
    R = conf.ring_size
    cuts = set(nx.articulation_points(graph))
    boundary_edges = set()
    for v in conf.interior:
        rot = conf.rotations[v]
        k = len(rot)
        for i, u in enumerate(rot):
            if u >= R and (rot[(i - 1) % k] < R or rot[(i + 1) % k] < R):
                boundary_edges.add(frozenset((u, v)))
    dist = dict(nx.all_pairs_shortest_path_length(graph))
    for a in graph:
        for b in graph:
            if a >= b:
                continue
            d = dist[a].get(b)
            if d is None or d > 4:
                return False
            if d < 4:
                continue
            good = False
            for path in nx.all_shortest_paths(graph, a, b):
                if any(frozenset(e) not in boundary_edges for e in zip(path, path[1:])):
                    good = True
                elif any(w not in cuts and conf.degrees[w] - conf.z_degree(w) >= 2 for w in path[1:-1]):
                    good = True
                if good:
                    break
            if not good:
                return False
    return True


# -- cut vertices and the derived set --------------------------------------

def find_cut_pairs(conf: Configuration) -> list[tuple[int, int]]:
    R = conf.ring_size
    pairs = []
    for v in conf.interior:
        rot = conf.rotations[v]
        d = len(rot)
        ring_nbrs = []
        t = 0
        for j in range(d):
            k1, k2 = rot[j], rot[(j + 1) % d]
            if k1 < R and k1 not in ring_nbrs:
                ring_nbrs.append(k1)
            if k1 < R <= k2:
                t += 1
        if t >= 2 and len(ring_nbrs) != 2:
            raise InvalidConfiguration(f"vertex {v} touches the ring {t} times")
        if t == 2:
            pairs.append((ring_nbrs[0], ring_nbrs[1]))
    return pairs


def remove_ring(conf: Configuration, remove: Sequence[bool]) -> PseudoConfiguration:
    R, n = conf.ring_size, conf.n_vertices
    old2new = [-1] * n
    k = 0
    for i in range(n):
        if i < R and remove[i]:
            continue
        old2new[i] = k
        k += 1
    rotations = []
    for i in range(n):
        if i < R and remove[i]:
            continue
        rotations.append([-1 if j == -1 else old2new[j] for j in conf.rotations[i]])
    lo, hi = [0] * k, [0] * k
    for i in range(n):
        if old2new[i] < 0:
            continue
        w = old2new[i]
        if i < R:
            lo[w] = sum(1 for x in rotations[w] if x != -1) + 1
            hi[w] = INF
        else:
            lo[w] = hi[w] = conf.degrees[i]
    return PseudoConfiguration(from_rotations(rotations), lo, hi)


def maximum_degree_dart(C: PseudoConfiguration) -> int:
    best, key = NIL, (0, 0)
    Z = C.Z
    for e in range(Z.n_darts):
        y, x = Z.head[e], Z.tail(e)
        if C.lo[y] != C.hi[y] or C.lo[x] != C.hi[x]:
            continue
        k = (C.lo[y], C.lo[x])
        if k > key:
            best, key = e, k
    return best


@dataclass(frozen=True)
class DbarEntry:
    conf: PseudoConfiguration
    special: int
    source: str = ""
    mirrored: bool = False


def extend_from_cut_vertices(conf: Configuration) -> list[tuple[PseudoConfiguration, int]]:
    pairs = find_cut_pairs(conf)
    out = []
    for S in range(2 ** len(pairs)):
        remove = [True] * conf.ring_size
        for i, (a, b) in enumerate(pairs):
            if (S >> i) & 1:
                remove[a] = False
            else:
                remove[b] = False
        pc = remove_ring(conf, remove)
        out.append((pc, maximum_degree_dart(pc)))
    return out


@dataclass
class ConfigurationSet:
    name: str
    members: list[Configuration]
    entries: list[DbarEntry]

    def __len__(self) -> int:
        return len(self.entries)

    def with_extra(self, extra: Iterable[DbarEntry], name: str | None = None) -> "ConfigurationSet":
        return ConfigurationSet(name or self.name, list(self.members), list(self.entries) + list(extra))


def build_Dbar(configs: Sequence[Configuration], name: str = "D") -> ConfigurationSet:
    entries = []
    for conf in configs:
        for pc, special in extend_from_cut_vertices(conf):
            entries.append(DbarEntry(pc, special, conf.name))
            mpc = mirror(pc)
            entries.append(DbarEntry(mpc, maximum_degree_dart(mpc), conf.name, True))
    return ConfigurationSet(name, list(configs), entries)


def entry_from_pseudo(pc: PseudoConfiguration, source: str = "") -> DbarEntry:
    return DbarEntry(pc, maximum_degree_dart(pc), source)


# -- containment -----------------------------------------------------------

def darts_by_degree(target: PseudoConfiguration) -> dict[tuple[int, int], list[int]]:
    Z = target.Z
    table: dict[tuple[int, int], list[int]] = {}
    for e in range(Z.n_darts):
        dy, dx = target.lo[Z.head[e]], target.lo[Z.tail(e)]
        if dy > CONF_DEG_MAX or dx > CONF_DEG_MAX:
            continue
        table.setdefault((dy, dx), []).append(e)
    return table


def rooted_contain_conf(target: PseudoConfiguration, e_star: int, conf: PseudoConfiguration, e: int) -> bool:
    return homomorphism(conf, e, target, e_star, include) is not None


def contain_conf(target: PseudoConfiguration, center: int, K: ConfigurationSet | Sequence[DbarEntry]) -> bool:
    entries = K.entries if isinstance(K, ConfigurationSet) else K
    if not entries:
        return False
    table = darts_by_degree(target)
    for entry in entries:
        Z = entry.conf.Z
        f = entry.special
        if f == NIL:
            # a lone vertex: match by degree range alone
            lo, hi = entry.conf.lo[0], entry.conf.hi[0]
            if any(lo <= target.lo[v] and target.hi[v] <= hi and (lo <= 8 or v == center)
                   for v in range(target.Z.n_vertices)):
                return True
            continue
        dy, dx = entry.conf.lo[Z.head[f]], entry.conf.lo[Z.tail(f)]
        for f_star in table.get((dy, dx), ()):
            if dy > 8 and target.Z.head[f_star] != center:
                continue
            if rooted_contain_conf(target, f_star, entry.conf, f):
                return True
    return False


def representative_degrees(target: PseudoConfiguration, center: int) -> list[PseudoConfiguration]:
    choices = []
    for v in range(target.Z.n_vertices):
        lo, hi = target.lo[v], target.hi[v]
        cap = CONF_DEG_MAX if v == center else 8
        choices.append([hi] if hi > cap else list(range(int(lo), int(hi) + 1)))
    return [PseudoConfiguration(target.Z, list(c), list(c)) for c in itertools.product(*choices)]


def blocked_by(target: PseudoConfiguration, center: int, K: ConfigurationSet | Sequence[DbarEntry]) -> bool:
    entries = K.entries if isinstance(K, ConfigurationSet) else K
    if not entries:
        return False
    return all(contain_conf(t, center, entries) for t in representative_degrees(target, center))


def configuration_pseudo(conf: Configuration) -> PseudoConfiguration:
    """The configuration with its ring removed, single degrees everywhere."""
    return remove_ring_all(conf)


def remove_ring_all(conf: Configuration) -> PseudoConfiguration:
    return remove_ring(conf, [True] * conf.ring_size)
