"""D-reducibility by ring-coloring enumeration and planar Kempe-chain structures.

Colors are ``0..3``.  For a split into the pair ``{0, i}`` and its complement,
the Kempe flip of a chain is XOR with ``i``.  Ring colorings are stored either
raw or modulo color permutations (first-appearance relabelling); the two
modes give the same verdict and levels.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .configlib import Configuration, FreeCompletion, free_completion

PERMUTATIONS = np.array(list(itertools.permutations(range(4))), dtype=np.int8)
DENSE_RING_LIMIT = 13  # raw bitmap of 4**R flags up to this ring size
LEVEL_FLAG = 25


class OddLength(ValueError):
    pass


@dataclass(frozen=True)
class ChainPartition:
    """One planar Kempe-chain structure on a contracted ring of ``n`` blocks.

    ``labels`` is the label list produced by the parenthesis stack; ``regions``
    gives, for each block, the region it belongs to when parenthesis positions
    are read as the edges between consecutive blocks.
    """

    parens: str
    labels: tuple
    regions: tuple

    def classes(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for block, r in enumerate(self.regions):
            groups.setdefault(r, []).append(block)
        return list(groups.values())


def _parenthesis_strings(n: int) -> list[str]:
    if n == 0:
        return [""]
    out = []
    for k in range(0, n, 2):
        for inner in _parenthesis_strings(k):
            for rest in _parenthesis_strings(n - k - 2):
                out.append("(" + inner + ")" + rest)
    return out


@lru_cache(maxsize=None)
def all_planar_kempe_chains(n: int) -> tuple[ChainPartition, ...]:
    if n < 0 or n % 2:
        raise OddLength(f"contracted ring length {n} is odd")
    out = []
    for s in _parenthesis_strings(n):
        stack = [0]
        labels = []
        tops = []
        c = 1
        for ch in s:
            if ch == "(":
                stack.append(c)
                labels.append(c)
                c += 1
            else:
                labels.append(stack[-1])
                stack.pop()
            tops.append(stack[-1])
        regions = tuple([0] + tops[:-1]) if n else (0,)
        out.append(ChainPartition(s, tuple(labels), regions))
    return tuple(out)


@lru_cache(maxsize=None)
def _union_masks(n: int) -> np.ndarray:
    """For every chain structure, the block masks of all unions of its classes."""
    rows = []
    for part in all_planar_kempe_chains(n):
        class_masks = [sum(1 << b for b in cls) for cls in part.classes()]
        k = len(class_masks)
        masks = np.zeros(1 << k, dtype=np.int64)
        for j, m in enumerate(class_masks):
            masks[1 << j:1 << (j + 1)] = masks[:1 << j] | m
        rows.append(masks)
    return np.array(rows, dtype=np.int64)


# -- colorings -------------------------------------------------------------

def codes_of(rows: np.ndarray) -> np.ndarray:
    R = rows.shape[1]
    weights = (4 ** np.arange(R, dtype=np.int64))
    return rows.astype(np.int64) @ weights


def decode(code: int, R: int) -> tuple:
    return tuple((code >> (2 * p)) & 3 for p in range(R))


def canonicalize(rows: np.ndarray, return_mapping: bool = False):
    """First-appearance relabelling of each row (colors renamed 0,1,2,3 in order of use)."""
    rows = np.asarray(rows, dtype=np.int8)
    m, R = rows.shape
    mapping = np.full((m, 4), -1, dtype=np.int8)
    nxt = np.zeros(m, dtype=np.int8)
    out = np.empty_like(rows)
    idx = np.arange(m)
    for p in range(R):
        c = rows[:, p]
        cur = mapping[idx, c]
        fresh = cur < 0
        if fresh.any():
            mapping[idx[fresh], c[fresh]] = nxt[fresh]
            nxt[fresh] += 1
        out[:, p] = mapping[idx, c]
    if return_mapping:
        # colors never used are assigned the remaining labels in order
        for col in range(4):
            unused = mapping[:, col] < 0
            if unused.any():
                mapping[unused, col] = nxt[unused]
                nxt[unused] += 1
        return out, mapping
    return out


def canonical_codes(rows: np.ndarray) -> np.ndarray:
    return codes_of(canonicalize(rows))


def proper_ring_colorings(R: int, canonical: bool = True) -> np.ndarray:
    """All proper colorings of an ``R``-cycle, optionally one per permutation class."""
    if canonical:
        rows = np.zeros((1, 1), dtype=np.int8)
        top = np.zeros(1, dtype=np.int8)
        for _ in range(1, R):
            parts, tops = [], []
            for c in range(4):
                ok = (rows[:, -1] != c) & (c <= top + 1)
                if ok.any():
                    sel = rows[ok]
                    parts.append(np.hstack([sel, np.full((len(sel), 1), c, dtype=np.int8)]))
                    tops.append(np.maximum(top[ok], c))
            rows = np.vstack(parts)
            top = np.concatenate(tops)
    else:
        rows = np.arange(4, dtype=np.int8).reshape(4, 1)
        for _ in range(1, R):
            parts = []
            for c in range(4):
                sel = rows[rows[:, -1] != c]
                parts.append(np.hstack([sel, np.full((len(sel), 1), c, dtype=np.int8)]))
            rows = np.vstack(parts)
    return rows[rows[:, -1] != rows[:, 0]]


def _expand_allowed(allowed: Sequence[Sequence[int]]) -> np.ndarray:
    rows = np.array(allowed[0], dtype=np.int8).reshape(-1, 1)
    for opts in allowed[1:]:
        parts = []
        for c in opts:
            sel = rows[rows[:, -1] != c]
            if len(sel):
                parts.append(np.hstack([sel, np.full((len(sel), 1), c, dtype=np.int8)]))
        if not parts:
            return np.zeros((0, len(allowed)), dtype=np.int8)
        rows = np.vstack(parts)
    return rows[rows[:, -1] != rows[:, 0]]


def _interior_colorings(rotations: Sequence[Sequence[int]], R: int) -> Iterable[dict]:
    """Proper colorings of the configuration, one per permutation class."""
    interior = list(range(R, len(rotations)))
    # order vertices so each has an earlier neighbour when possible
    order, seen = [], set()
    for s in interior:
        if s in seen:
            continue
        queue = [s]
        seen.add(s)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in rotations[v]:
                if u >= R and u not in seen:
                    seen.add(u)
                    queue.append(u)
    earlier = []
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        earlier.append([pos[u] for u in rotations[v] if u >= R and pos[u] < pos[v]])
    colors = [0] * len(order)

    def dfs(i: int, top: int):
        if i == len(order):
            yield {order[j]: colors[j] for j in range(len(order))}
            return
        banned = {colors[j] for j in earlier[i]}
        for c in range(min(top + 2, 4)):
            if c in banned:
                continue
            colors[i] = c
            yield from dfs(i + 1, max(top, c))

    yield from dfs(0, -1)


def extendible_canonical_codes(fc: FreeCompletion) -> np.ndarray:
    """Sorted canonical codes of ring colorings that extend into the configuration."""
    R = fc.ring_size
    rotations = fc.rotations
    seen_patterns = set()
    found = []
    for col in _interior_colorings(rotations, R):
        pattern = []
        for p in range(R):
            banned = {col[u] for u in rotations[p] if u >= R}
            pattern.append(tuple(c for c in range(4) if c not in banned))
        pattern = tuple(pattern)
        if pattern in seen_patterns:
            continue
        seen_patterns.add(pattern)
        rows = _expand_allowed(pattern)
        if len(rows):
            found.append(np.unique(canonical_codes(rows)))
    if not found:
        return np.zeros(0, dtype=np.int64)
    return np.unique(np.concatenate(found))


def all_ring_colorings(fc: FreeCompletion) -> set[tuple]:
    """Every ring coloring (raw) that extends to a proper coloring of the completion."""
    R = fc.ring_size
    canon = extendible_canonical_codes(fc)
    rows = np.array([decode(int(c), R) for c in canon], dtype=np.int8).reshape(-1, R)
    out = set()
    for perm in PERMUTATIONS:
        out.update(map(tuple, perm[rows].tolist()))
    return out


def all_ring_colorings_dfs(fc: FreeCompletion) -> set[tuple]:
    """Direct depth-first search over all vertices of the completion."""
    rotations = fc.rotations
    n = len(rotations)
    R = fc.ring_size
    nbrs = [[u for u in rot if u != -1 and u < v] for v, rot in enumerate(rotations)]
    colors = [0] * n
    out = set()

    def dfs(i: int):
        if i == n:
            out.add(tuple(colors[:R]))
            return
        for c in range(4):
            if all(colors[j] != c for j in nbrs[i]):
                colors[i] = c
                dfs(i + 1)

    dfs(0)
    return out


def extension_witnesses(conf: Configuration) -> dict[int, dict]:
    """For each extendible canonical ring code, one interior coloring (in the
    canonical color names) that extends it."""
    fc = free_completion(conf)
    R = fc.ring_size
    table: dict[int, dict] = {}
    for col in _interior_colorings(fc.rotations, R):
        pattern = []
        for p in range(R):
            banned = {col[u] for u in fc.rotations[p] if u >= R}
            pattern.append(tuple(c for c in range(4) if c not in banned))
        rows = _expand_allowed(pattern)
        if not len(rows):
            continue
        canon, mapping = canonicalize(rows, return_mapping=True)
        codes = codes_of(canon)
        for code, mp in zip(codes.tolist(), mapping.tolist()):
            if code not in table:
                table[code] = {v: mp[c] for v, c in col.items()}
    return table


# -- the fixed point -------------------------------------------------------

@dataclass
class RingColoringTable:
    """Levels of canonical ring colorings; missing codes are unclassified."""

    ring_size: int
    levels: dict[int, int]

    def level(self, coloring: Sequence[int]) -> int | None:
        code = int(canonical_codes(np.array([coloring], dtype=np.int8))[0])
        return self.levels.get(code)

    def levels_of(self, rows: np.ndarray) -> np.ndarray:
        codes = canonical_codes(rows)
        return np.array([self.levels.get(int(c), -1) for c in codes.tolist()], dtype=np.int64)


@dataclass
class DReducible:
    max_level: int
    table: RingColoringTable
    ring_size: int
    seconds: float = 0.0

    @property
    def flagged(self) -> bool:
        return self.max_level > LEVEL_FLAG

    def __bool__(self) -> bool:
        return True


@dataclass
class NotDReducible:
    stuck_colorings: list[tuple]
    table: RingColoringTable
    ring_size: int
    rounds: int = 0
    seconds: float = 0.0

    def __bool__(self) -> bool:
        return False


class _Membership:
    """Membership test for the classified set, raw bitmap or canonical codes."""

    def __init__(self, R: int, canonical_codes_sorted: np.ndarray, dense: bool):
        self.R = R
        self.dense = dense
        if dense:
            self.bits = np.zeros(4 ** R, dtype=bool)
            self.add(canonical_codes_sorted)
        else:
            self.sorted = np.array(canonical_codes_sorted, dtype=np.int64)

    def add(self, canon: np.ndarray) -> None:
        if not len(canon):
            return
        if self.dense:
            rows = ((np.asarray(canon, dtype=np.int64)[:, None] >> (2 * np.arange(self.R))) & 3).astype(np.int8)
            for perm in PERMUTATIONS:
                self.bits[codes_of(perm[rows])] = True
        else:
            self.sorted = np.union1d(self.sorted, canon)

    def contains(self, rows: np.ndarray) -> np.ndarray:
        if self.dense:
            return self.bits[codes_of(rows)]
        codes = canonical_codes(rows)
        pos = np.searchsorted(self.sorted, codes)
        pos[pos >= len(self.sorted)] = 0
        return self.sorted[pos] == codes if len(self.sorted) else np.zeros(len(codes), bool)


def contracted_blocks(phi: np.ndarray, pair: int) -> tuple[np.ndarray, int]:
    """Block index of each ring position after contracting same-side edges."""
    R = len(phi)
    cut = (phi ^ np.roll(phi, -1)) != pair  # edge p joins p and p+1
    n = int(cut.sum())
    if n == 0:
        return np.zeros(R, dtype=np.int64), 0
    before = np.concatenate([[0], np.cumsum(cut)[:-1]])
    return (before % n).astype(np.int64), n


def kempe_flips(phi: np.ndarray, pair: int) -> tuple[np.ndarray, int]:
    """Rows are the ring colorings after flipping each subset of blocks."""
    block_of, n = contracted_blocks(phi, pair)
    masks = np.arange(1 << n, dtype=np.int64)
    bits = ((masks[:, None] >> block_of[None, :]) & 1).astype(np.int8)
    return (phi[None, :] ^ (bits * pair)).astype(np.int8), n


def improvable(phi: np.ndarray, member: _Membership) -> bool:
    for pair in (1, 2, 3):
        flips, n = kempe_flips(phi, pair)
        if n == 0:
            continue
        good = member.contains(flips)
        if good[_union_masks(n)].any(axis=1).all():
            return True
    return False


def check_d_reducibility(conf: Configuration, symmetry: bool = True, dense: bool | None = None,
                         max_rounds: int | None = None) -> DReducible | NotDReducible:
    """Round-based fixed point; round ``i`` classifies colorings using the set
    classified by the end of round ``i-1``."""
    start = time.perf_counter()
    fc = free_completion(conf)
    R = fc.ring_size
    if dense is None:
        dense = R <= DENSE_RING_LIMIT
    extendible = extendible_canonical_codes(fc)
    member = _Membership(R, extendible, dense)
    levels = {int(c): 0 for c in extendible.tolist()}

    if symmetry:
        candidates = proper_ring_colorings(R, canonical=True)
        keys = codes_of(candidates)
    else:
        candidates = proper_ring_colorings(R, canonical=False)
        keys = canonical_codes(candidates)
    pending = ~np.isin(keys, extendible)
    rnd = 0
    while pending.any():
        if max_rounds is not None and rnd >= max_rounds:
            break
        rnd += 1
        newly = [j for j in np.flatnonzero(pending) if improvable(candidates[j], member)]
        if not newly:
            rnd -= 1
            break
        new_keys = np.unique(keys[newly])
        for k in new_keys.tolist():
            levels.setdefault(int(k), rnd)
        pending[np.isin(keys, new_keys)] = False
        member.add(new_keys)
    table = RingColoringTable(R, levels)
    elapsed = time.perf_counter() - start
    if pending.any():
        stuck = sorted({decode(int(k), R) for k in keys[pending].tolist()})
        stuck = sorted({tuple(canonicalize(np.array([s], dtype=np.int8))[0].tolist()) for s in stuck})
        return NotDReducible(stuck, table, R, rnd, elapsed)
    return DReducible(max(levels.values()), table, R, elapsed)


def check_d_reducibility_reference(conf: Configuration) -> tuple[bool, dict[tuple, int]]:
    """Plain-set rendition of the fixed point on raw colorings (slow; small rings)."""
    fc = free_completion(conf)
    R = fc.ring_size
    classified = {c: 0 for c in all_ring_colorings_dfs(fc)}
    proper = [c for c in itertools.product(range(4), repeat=R)
              if all(c[p] != c[(p + 1) % R] for p in range(R))]
    rnd = 0
    while True:
        rnd += 1
        snapshot = set(classified)
        newly = []
        for phi in proper:
            if phi in snapshot:
                continue
            for pair in (1, 2, 3):
                cuts = [p for p in range(R) if phi[p] ^ phi[(p + 1) % R] != pair]
                n = len(cuts)
                if n == 0:
                    continue
                block_of = [sum(1 for c in cuts if c < p) % n for p in range(R)]
                feasible = True
                for part in all_planar_kempe_chains(n):
                    classes = part.classes()
                    found = False
                    for k in range(len(classes) + 1):
                        for chosen in itertools.combinations(classes, k):
                            flip = {b for cls in chosen for b in cls}
                            psi = tuple(phi[p] ^ pair if block_of[p] in flip else phi[p] for p in range(R))
                            if psi in snapshot:
                                found = True
                                break
                        if found:
                            break
                    if not found:
                        feasible = False
                        break
                if feasible:
                    newly.append(phi)
                    break
        if not newly:
            break
        for phi in newly:
            classified[phi] = rnd
    return len(classified) == len(proper), classified
