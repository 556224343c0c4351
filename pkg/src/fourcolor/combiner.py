"""Combining neighbouring cartwheels and checking that every combination is blocked."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .cartwheel import CENTER, TAIL_TOP, center_darts_by_degree, with_ranges
from .configlib import ConfigurationSet, DbarEntry, blocked_by, entry_from_pseudo
from .dartcore import NIL, from_rotations
from .homcore import Hom, PseudoConfiguration, compose, disjoint_union, free_hom_configuration, homomorphism, include

Combination = tuple[PseudoConfiguration, Hom]


@dataclass
class Failure:
    check: str
    cartwheel: int
    darts: tuple
    witness: PseudoConfiguration | None = None


@dataclass
class CombineReport:
    name: str
    examined: int = 0
    combinations: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "CombineReport") -> None:
        self.examined += other.examined
        self.combinations += other.combinations
        self.failures += other.failures


def delete_degree_from_k_to_9(cartwheels: Iterable[PseudoConfiguration], k: int) -> list[PseudoConfiguration]:
    """Drop cartwheels with a vertex fixed at ``k``; collapse ``[k-1, 9]`` to ``k-1``."""
    out = []
    for C in cartwheels:
        hi = list(C.hi)
        removed = False
        for v in range(C.Z.n_vertices):
            if C.lo[v] == C.hi[v] == k:
                removed = True
                break
            if C.lo[v] == k - 1 and C.hi[v] == TAIL_TOP:
                hi[v] = k - 1
        if not removed:
            out.append(with_ranges(C, C.lo, hi))
    return out


def t73() -> DbarEntry:
    """A facial triangle whose three vertices have degree 7."""
    Z = from_rotations([[1, 2, -1], [2, 0, -1], [0, 1, -1]])
    return entry_from_pseudo(PseudoConfiguration(Z, [7, 7, 7], [7, 7, 7]), "T7^3")


def _restrict(hom: Hom, n_vertices: int, n_darts: int) -> Hom:
    return Hom(hom.vmap[:n_vertices], hom.dmap[:n_darts], hom.n_cod_vertices, hom.n_cod_darts)


def combine_each_cartwheel(C: PseudoConfiguration, e: int, cartwheels: Sequence[PseudoConfiguration],
                           K: ConfigurationSet | Sequence[DbarEntry], center: int = CENTER,
                           center_mode: str = "input") -> list[Combination]:
    """Glue ``e`` onto every center dart of every cartwheel; keep images not blocked by ``K``.

    ``center_mode`` chooses the vertex handed to the blocking test: the image of
    ``center`` ("input"), the image of the glued cartwheel's center ("member"),
    or any vertex at all ("any").
    """
    out = []
    nv, nd = C.Z.n_vertices, C.Z.n_darts
    for W in cartwheels:
        union, offsets = disjoint_union([C, W])
        for e_w in W.Z.darts_at(CENTER):
            for image, hom in free_hom_configuration(union, [(e, e_w + offsets[1][1])]):
                if _is_blocked(image, hom, center, offsets[1][0] + CENTER, K, center_mode):
                    continue
                out.append((image, _restrict(hom, nv, nd)))
    return out


def _is_blocked(image, hom, center, member_center, K, mode) -> bool:
    if mode == "input":
        return blocked_by(image, hom.vmap[center], K)
    if mode == "member":
        return blocked_by(image, hom.vmap[member_center], K)
    if mode == "any":
        return any(blocked_by(image, c, K) for c in range(image.Z.n_vertices))
    raise ValueError(f"unknown center mode {mode!r}")


def combine_each_cartwheel_twice(C: PseudoConfiguration, e1: int, e2: int,
                                 cartwheels: Sequence[PseudoConfiguration],
                                 dbar: ConfigurationSet | Sequence[DbarEntry],
                                 K: ConfigurationSet | Sequence[DbarEntry],
                                 center: int = CENTER, center_mode: str = "input") -> list[Combination]:
    out = []
    for first, phi in combine_each_cartwheel(C, e1, cartwheels, dbar, center, center_mode):
        for second, psi in combine_each_cartwheel(first, phi.dmap[e2], cartwheels, K,
                                                  phi.vmap[center], center_mode):
            out.append((second, compose(psi, phi)))
    return out


def contain_x(Z: PseudoConfiguration, v: int, X: PseudoConfiguration, x_center: int) -> bool:
    """Whether ``X`` sits in ``Z`` with its degree-8 center on ``v``."""
    if not Z.Z.darts_at(v) or not X.Z.darts_at(x_center):
        return False
    e_z = Z.Z.darts_at(v)[0]
    e_x = X.Z.darts_at(x_center)[0]
    for _ in range(8):
        if homomorphism(X, e_x, Z, e_z, include) is not None:
            return True
        e_x = X.Z.succ[e_x]
        if e_x == NIL:
            break
    return False


def check88(index: int, C: PseudoConfiguration, darts8: Sequence[int], cartwheels, dbar, report, **kw) -> None:
    for e in darts8:
        found = combine_each_cartwheel(C, C.Z.rev[e], cartwheels, dbar, **kw)
        report.combinations += 1
        if found:
            report.failures.append(Failure("88", index, (e,), found[0][0]))


def check87(index: int, C: PseudoConfiguration, darts7: Sequence[int], cartwheels, dbar, report, **kw) -> None:
    (e,) = darts7
    found = combine_each_cartwheel(C, C.Z.rev[e], cartwheels, dbar, **kw)
    report.combinations += 1
    if found:
        report.failures.append(Failure("87", index, (e,), found[0][0]))


def successor_distances(C: PseudoConfiguration, darts: Sequence[int]) -> list[int]:
    dist = []
    for i, e1 in enumerate(darts):
        e2 = darts[(i + 1) % len(darts)]
        steps = 0
        while True:
            e1 = C.Z.succ[e1]
            steps += 1
            if e1 == e2:
                break
        dist.append(steps)
    return dist


def check787(index: int, C: PseudoConfiguration, darts7: Sequence[int], cartwheels, dbar, report,
             X: PseudoConfiguration | None = None, x_center: int = 0, **kw) -> None:
    dist = successor_distances(C, darts7)
    low = min(dist)
    for i, e1 in enumerate(darts7):
        if dist[i] > low:
            continue
        e2 = darts7[(i + 1) % len(darts7)]
        for image, hom in combine_each_cartwheel_twice(C, C.Z.rev[e1], C.Z.rev[e2], cartwheels, dbar, dbar, **kw):
            report.combinations += 1
            c = hom.vmap[CENTER]
            if X is None or not contain_x(image, c, X, x_center):
                report.failures.append(Failure("787", index, (e1, e2), image))


def check_deg8(cartwheels: Sequence[PseudoConfiguration], dbar: ConfigurationSet,
               X: PseudoConfiguration | None = None, x_center: int = 0,
               select: Callable[[int], bool] | None = None, center_mode: str = "input") -> CombineReport:
    report = CombineReport("deg8")
    pool = delete_degree_from_k_to_9(cartwheels, 9)
    for index, C in enumerate(pool):
        if select is not None and not select(index):
            continue
        if C.lo[CENTER] != 8:
            continue
        report.examined += 1
        darts = center_darts_by_degree(C)
        if darts[8]:
            check88(index, C, darts[8], pool, dbar, report, center_mode=center_mode)
        elif len(darts[7]) == 1:
            check87(index, C, darts[7], pool, dbar, report, center_mode=center_mode)
        elif len(darts[7]) > 1:
            check787(index, C, darts[7], pool, dbar, report, X=X, x_center=x_center, center_mode=center_mode)
    return report


def check_7triangle(cartwheels: Sequence[PseudoConfiguration], dbar: ConfigurationSet,
                    select: Callable[[int], bool] | None = None, center_mode: str = "input") -> CombineReport:
    report = CombineReport("7triangle")
    pool = delete_degree_from_k_to_9(delete_degree_from_k_to_9(cartwheels, 9), 8)
    for index, C in enumerate(pool):
        if select is not None and not select(index):
            continue
        report.examined += 1
        Z = C.Z
        for e in Z.darts_at(CENTER):
            f = Z.succ[e]
            if C.lo[Z.tail(e)] == 7 and C.lo[Z.tail(f)] == 7:
                found = combine_each_cartwheel_twice(C, Z.rev[e], Z.rev[f], pool, dbar, dbar,
                                                     center_mode=center_mode)
                report.combinations += 1
                if found:
                    report.failures.append(Failure("7triangle", index, (e, f), found[0][0]))
    return report


def check_deg7(cartwheels: Sequence[PseudoConfiguration], dbar: ConfigurationSet,
               select: Callable[[int], bool] | None = None, center_mode: str = "input") -> CombineReport:
    report = CombineReport("deg7")
    pool = delete_degree_from_k_to_9(delete_degree_from_k_to_9(cartwheels, 9), 8)
    triangle = [t73()]
    pool = [C for C in pool if not blocked_by(C, CENTER, triangle)]
    extended = dbar.with_extra(triangle)
    for index, C in enumerate(pool):
        if select is not None and not select(index):
            continue
        report.examined += 1
        darts7 = center_darts_by_degree(C)[7]
        if len(darts7) == 1:
            found = combine_each_cartwheel(C, C.Z.rev[darts7[0]], pool, extended, center_mode=center_mode)
            report.combinations += 1
            if found:
                report.failures.append(Failure("77", index, tuple(darts7), found[0][0]))
        elif len(darts7) > 1:
            for i, e1 in enumerate(darts7):
                for e2 in darts7[:i]:
                    found = combine_each_cartwheel_twice(C, C.Z.rev[e1], C.Z.rev[e2], pool, dbar, extended,
                                                         center_mode=center_mode)
                    report.combinations += 1
                    if found:
                        report.failures.append(Failure("777", index, (e1, e2), found[0][0]))
    return report
