"""Free cartwheels with limited degrees and tail ranges, and bad-cartwheel enumeration.

Vertex 0 is the center, vertices ``1..d`` its neighbours in clockwise order,
and the remaining vertices are second neighbours.  Degree 9 stands for "9 or
more"; the only non-singleton ranges ever produced are tail ranges ``[x, 9]``.
"""

from __future__ import annotations

import json
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .configlib import ConfigurationSet, blocked_by
from .dartcore import NIL, PseudoTriangulation, canonical_form, from_rotations, trace_digest
from .discharging import (
    CombinedRule,
    Rule,
    RuleSet,
    always_apply,
    amount_of_charge_send,
    amount_of_possible_charge_send,
    dominantly_apply,
)
from .homcore import PseudoConfiguration, homomorphism, intersect

CARTWHEEL_DEGREES = (5, 6, 7, 8, 9)
CENTER = 0
TAIL_TOP = 9


class CartwheelAssertion(AssertionError):
    def __init__(self, message: str, witness: PseudoConfiguration):
        super().__init__(message)
        self.witness = witness


@dataclass
class Context:
    """The rule set, its unblocked combinations and the blocking configurations."""

    rules: RuleSet | Sequence[Rule]
    combined: Sequence[CombinedRule]
    blockers: ConfigurationSet | None = None


# -- generation ------------------------------------------------------------------

def generate_cartwheel(d: int, degrees: Sequence[int]) -> PseudoConfiguration:
    if len(degrees) != d:
        raise ValueError("one degree per neighbour is required")
    rotations: list[list[int]] = [list(range(1, d + 1))]
    for i in range(1, d + 1):
        nxt = i + 1 if i < d else 1
        prv = i - 1 if i > 1 else d
        rotations.append([nxt, 0, prv])
    k = d + 1
    for i in range(1, d + 1):
        if degrees[i - 1] == 9:
            continue
        for _ in range(degrees[i - 1] - len(rotations[i])):
            last = rotations[i][-1]
            rotations.append([i, last])
            rotations[i].append(k)
            rotations[last] = [k] + rotations[last]
            k += 1
        first, last = rotations[i][0], rotations[i][-1]
        rotations[first].append(last)
        rotations[last] = [first] + rotations[last]
    for i in range(1, k):
        if i > d or degrees[i - 1] == 9:
            rotations[i].append(-1)
    Z = from_rotations(rotations)
    lo = [d] + list(degrees) + [5] * (k - d - 1)
    hi = [d] + list(degrees) + [TAIL_TOP] * (k - d - 1)
    return PseudoConfiguration(Z, lo, hi)


def degree_words(d: int) -> list[tuple[int, ...]]:
    """Neighbour-degree words that are lexicographically minimal among their rotations."""
    words = []
    degrees = [0] * d

    def extend(i: int, lowest: int) -> None:
        if i == d:
            if any(degrees[r:] + degrees[:r] < degrees for r in range(1, d)):
                return
            words.append(tuple(degrees))
            return
        for j in range(lowest, len(CARTWHEEL_DEGREES)):
            degrees[i] = CARTWHEEL_DEGREES[j]
            extend(i + 1, lowest)

    for j in range(len(CARTWHEEL_DEGREES)):
        degrees[0] = CARTWHEEL_DEGREES[j]
        extend(1, j)
    return words


def enum_wheels(d: int) -> list[PseudoConfiguration]:
    return [generate_cartwheel(d, w) for w in degree_words(d)]


def center_degree(C: PseudoConfiguration) -> int:
    return int(C.lo[CENTER])


def spoke_in(C: PseudoConfiguration, j: int) -> int:
    """The dart from neighbour ``j`` to the center."""
    Z = C.Z
    for e in Z.darts_at(CENTER):
        if Z.tail(e) == j:
            return e
    raise KeyError(j)


def spoke_out(C: PseudoConfiguration, j: int) -> int:
    return C.Z.rev[spoke_in(C, j)]


def center_darts_by_degree(C: PseudoConfiguration) -> dict[int, list[int]]:
    Z = C.Z
    table: dict[int, list[int]] = {d: [] for d in range(10)}
    for e in Z.darts_at(CENTER):
        table.setdefault(int(C.lo[Z.tail(e)]), []).append(e)
    return table


def with_ranges(C: PseudoConfiguration, lo: Sequence, hi: Sequence) -> PseudoConfiguration:
    return PseudoConfiguration(C.Z, lo, hi)


# -- pruning ------------------------------------------------------------------------

def prune_by_non_associated_rule(C: PseudoConfiguration, in_rules: Sequence[CombinedRule],
                                 rules: Sequence[Rule]) -> bool:
    for j, rc in enumerate(in_rules, 1):
        e = spoke_in(C, j)
        for index, rule in enumerate(rules):
            if index not in rc.flags and always_apply(C, e, rule):
                return True
    return False


def upper_bound_of_charge(C: PseudoConfiguration, in_rules: Sequence[CombinedRule], ctx: Context) -> int:
    d = center_degree(C)
    fixed = sum(rc.charge for rc in in_rules)
    possible = sum(amount_of_possible_charge_send(C, spoke_in(C, j), ctx.combined)
                   for j in range(len(in_rules) + 1, d + 1))
    outgoing = sum(amount_of_charge_send(C, spoke_out(C, j), ctx.rules) for j in range(1, d + 1))
    return 10 * (6 - d) + fixed + possible - outgoing


def is_blocked(C: PseudoConfiguration, ctx: Context) -> bool:
    return ctx.blockers is not None and len(ctx.blockers) > 0 and blocked_by(C, CENTER, ctx.blockers)


def prune(C: PseudoConfiguration, in_rules: Sequence[CombinedRule], ctx: Context) -> bool:
    """True when the cartwheel can be discarded."""
    if prune_by_non_associated_rule(C, in_rules, ctx.rules):
        return True
    if upper_bound_of_charge(C, in_rules, ctx) < 0:
        return True
    return is_blocked(C, ctx)


def enum_possible_bad_wheels(d: int, ctx: Context) -> list[PseudoConfiguration]:
    return [C for C in enum_wheels(d) if not prune(C, (), ctx)]


# -- fixing the rules sent into the center -----------------------------------------------

def concrete_degree_except_tail(C: PseudoConfiguration) -> list[PseudoConfiguration]:
    """Split every range that is neither single nor a tail range into fixed degrees."""
    variants = [(list(C.lo), list(C.hi))]
    for v in range(C.Z.n_vertices):
        lo, hi = C.lo[v], C.hi[v]
        if lo == hi or hi == TAIL_TOP:
            continue
        nxt = []
        for d in CARTWHEEL_DEGREES[:4]:
            if lo <= d <= hi:
                for vlo, vhi in variants:
                    a, b = list(vlo), list(vhi)
                    a[v] = b[v] = d
                    nxt.append((a, b))
        variants = nxt
    return [with_ranges(C, lo, hi) for lo, hi in variants]


def update_degree_by_rule(C: PseudoConfiguration, e: int, rc: CombinedRule) -> list[PseudoConfiguration]:
    hom = homomorphism(rc.conf, rc.dart, C, e, intersect)
    if hom is None:
        return []
    lo, hi = list(C.lo), list(C.hi)
    for u, w in enumerate(hom.vmap):
        lo[w] = max(lo[w], rc.conf.lo[u])
        hi[w] = min(hi[w], rc.conf.hi[u])
    return concrete_degree_except_tail(with_ranges(C, lo, hi))


def fix_in_rules(C0: PseudoConfiguration, ctx: Context) -> list[tuple[PseudoConfiguration, tuple]]:
    d = center_degree(C0)
    layer: list[tuple[PseudoConfiguration, tuple]] = [(C0, ())]
    for i in range(1, d + 1):
        nxt = []
        for C, assigned in layer:
            e = spoke_in(C, i)
            for rc in ctx.combined:
                chosen = assigned + (rc,)
                for refined in update_degree_by_rule(C, e, rc):
                    if not prune(refined, chosen, ctx):
                        nxt.append((refined, chosen))
        layer = nxt
    return layer


# -- refining the rules sent out of the center ---------------------------------------------

def should_refine(C: PseudoConfiguration, i: int, rule: Rule) -> bool:
    e = spoke_out(C, i)
    return not always_apply(C, e, rule) and dominantly_apply(C, e, rule)


def refinement(C: PseudoConfiguration, i: int, rule: Rule) -> list[PseudoConfiguration]:
    """Split ``C`` into the cases where ``rule`` always or never applies on the spoke."""
    hom = homomorphism(rule.conf, rule.dart, C, spoke_out(C, i), intersect)
    lifted: dict[int, int] = {}
    for u, w in enumerate(hom.vmap):
        if C.hi[w] == TAIL_TOP and C.lo[w] < rule.conf.lo[u]:
            lifted[w] = max(lifted.get(w, 0), rule.conf.lo[u])
    lo = list(C.lo)
    for w, bound in lifted.items():
        lo[w] = bound
    out = [with_ranges(C, lo, C.hi)]
    for u, w in enumerate(hom.vmap):
        if not (C.hi[w] == TAIL_TOP and C.lo[w] < rule.conf.lo[u]):
            continue
        hi = list(C.hi)
        hi[w] = rule.conf.lo[u] - 1
        out += concrete_degree_except_tail(with_ranges(C, C.lo, hi))
    return out


def fix_out_rules(fixed: Iterable[tuple[PseudoConfiguration, tuple]],
                  ctx: Context) -> list[tuple[PseudoConfiguration, tuple]]:
    queue = deque(fixed)
    done = []
    while queue:
        C, in_rules = queue.popleft()
        d = center_degree(C)
        refined = False
        for i in range(1, d + 1):
            for rule in ctx.rules:
                if not should_refine(C, i, rule):
                    continue
                refined = True
                for child in refinement(C, i, rule):
                    if not prune(child, in_rules, ctx):
                        queue.append((child, in_rules))
                break
            if refined:
                break
        if not refined:
            done.append((C, in_rules))
    return done


def enum_bad_cartwheels(C0: PseudoConfiguration, ctx: Context, check: bool = True) -> list[PseudoConfiguration]:
    survivors = fix_out_rules(fix_in_rules(C0, ctx), ctx)
    if check:
        for C, in_rules in survivors:
            bound = upper_bound_of_charge(C, in_rules, ctx)
            d = center_degree(C)
            darts = center_darts_by_degree(C)
            if bound != 0:
                raise CartwheelAssertion(f"charge bound {bound} is not 0", C)
            if d not in (7, 8):
                raise CartwheelAssertion(f"center degree {d} survived", C)
            if not (darts[7] or darts[8] or darts[9]):
                raise CartwheelAssertion("no neighbour of degree 7, 8 or 9", C)
    return [C for C, _ in survivors]


# -- persistence ----------------------------------------------------------------------------

def cartwheel_to_dict(C: PseudoConfiguration) -> dict:
    Z = C.Z
    return {"center": CENTER, "vertices": Z.n_vertices, "head": list(Z.head), "rev": list(Z.rev),
            "succ": list(Z.succ), "pred": list(Z.pred),
            "lo": [int(x) for x in C.lo], "hi": [int(x) for x in C.hi]}


def cartwheel_from_dict(data: dict) -> PseudoConfiguration:
    Z = PseudoTriangulation(data["vertices"], data["head"], data["rev"], data["succ"], data["pred"])
    return PseudoConfiguration(Z, data["lo"], data["hi"])


def cartwheel_digest(C: PseudoConfiguration) -> str:
    """Name independent of vertex numbering: the least rooted trace over center darts."""
    labels = [(C.lo[v], C.hi[v], v == CENTER) for v in range(C.Z.n_vertices)]
    trace = min(canonical_form(C.Z, e, labels) for e in C.Z.darts_at(CENTER))
    return trace_digest(trace)


def write_cartwheel(directory: Path, C: PseudoConfiguration) -> Path:
    path = Path(directory) / f"d{center_degree(C)}-{cartwheel_digest(C)}.json"
    path.write_text(json.dumps(cartwheel_to_dict(C), sort_keys=True))
    return path


def read_cartwheels(directory: str | Path) -> list[PseudoConfiguration]:
    return [cartwheel_from_dict(json.loads(p.read_text())) for p in sorted(Path(directory).glob("d*.json"))]


def _run_wheel(args) -> list[dict]:
    C0, ctx, check = args
    return [cartwheel_to_dict(C) for C in enum_bad_cartwheels(C0, ctx, check)]


def enum_all_bad_cartwheels(ctx: Context, degrees: Iterable[int] = (7, 8, 9, 10, 11),
                            out_dir: str | Path | None = None, jobs: int = 1, check: bool = True,
                            limit: int | None = None) -> dict:
    """Run the pipeline for every center degree; optionally persist survivors and a manifest."""
    initial = [C for d in degrees for C in enum_possible_bad_wheels(d, ctx)]
    tasks = [(C, ctx, check) for C in initial[:limit]]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_wheel, tasks, chunksize=8))
    else:
        results = [_run_wheel(t) for t in tasks]
    survivors = [cartwheel_from_dict(x) for batch in results for x in batch]
    counts: dict[int, int] = {}
    names = []
    for C in survivors:
        counts[center_degree(C)] = counts.get(center_degree(C), 0) + 1
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        names = sorted({write_cartwheel(out, C).name for C in survivors})
    manifest = {"initial_wheels": len(initial), "survivors": len(survivors),
                "by_center_degree": {str(k): counts[k] for k in sorted(counts)}, "files": names}
    if out_dir is not None:
        (Path(out_dir) / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    return {"manifest": manifest, "cartwheels": survivors}


def fixed_instances(C: PseudoConfiguration, cap: int = TAIL_TOP) -> Iterable[tuple[int, ...]]:
    """Every single-degree assignment inside the ranges (9 meaning 9 or more)."""
    from itertools import product
    return product(*[range(int(C.lo[v]), int(min(C.hi[v], cap)) + 1) for v in range(C.Z.n_vertices)])


def worker_count(jobs: int | None) -> int:
    return jobs if jobs and jobs > 0 else (os.cpu_count() or 1)
