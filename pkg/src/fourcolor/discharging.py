"""Discharging rules, their application, charge bookkeeping and free rule combination.

Rule file grammar (blank lines and ``#`` comments ignored)::

    rule NAME charge R
    0: 1 2 -1          # clockwise neighbours of vertex 0, -1 marks the boundary
    1: 2 0 -1
    2: 0 1 -1
    degrees 5 7+ 6-    # one token per vertex: d, d+ = [d, inf], d- = [5, d], a..b
    arrow 0 1          # charge moves from vertex 0 to vertex 1
    end

A rule's distinguished dart points from ``s`` to ``t`` (its head is ``t``).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx

from .configlib import ConfigurationSet, InvariantViolation, ParseError, blocked_by
from .dartcore import NIL, PseudoTriangulation, from_rotations, validate as validate_darts
from .homcore import (
    INF,
    PseudoConfiguration,
    disjoint_union,
    dominant,
    free_hom_configuration,
    homomorphism,
    include,
    intersect,
    mirror,
    rooted_key,
)


class NotATriangulation(ValueError):
    pass


@dataclass
class Rule:
    name: str
    conf: PseudoConfiguration
    dart: int
    charge: int
    rotations: list = field(default_factory=list, repr=False)
    mirrored: bool = False

    @property
    def source(self) -> int:
        return self.conf.Z.tail(self.dart)

    @property
    def target(self) -> int:
        return self.conf.Z.head[self.dart]


@dataclass
class RuleSet:
    rules: list[Rule]

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __getitem__(self, i: int) -> Rule:
        return self.rules[i]

    def index(self, rule: Rule) -> int:
        return next(i for i, r in enumerate(self.rules) if r is rule)

    def subset(self, indices: Iterable[int]) -> "RuleSet":
        return RuleSet([self.rules[i] for i in indices])


@dataclass
class CombinedRule:
    """A free combination of the rules whose indices are in ``flags``."""

    conf: PseudoConfiguration
    dart: int
    charge: int
    flags: frozenset

    def key(self) -> tuple:
        return (self.flags, self.charge, rooted_key(self.conf, self.dart))


# -- parsing -----------------------------------------------------------------

_RANGE = re.compile(r"^(\d+)(\+|-|\.\.(\d+))?$")


def parse_range(token: str) -> tuple[int, float]:
    m = _RANGE.match(token)
    if not m:
        raise ParseError(f"bad degree token {token!r}")
    d = int(m.group(1))
    if m.group(2) is None:
        return d, d
    if m.group(2) == "+":
        return d, INF
    if m.group(2) == "-":
        return 5, d
    return d, int(m.group(3))


def format_range(lo: int, hi: float) -> str:
    if lo == hi:
        return str(lo)
    if hi == INF:
        return f"{lo}+"
    if lo == 5:
        return f"{int(hi)}-"
    return f"{lo}..{int(hi)}"


def find_dart(Z: PseudoTriangulation, tail: int, head: int) -> int:
    for e in range(Z.n_darts):
        if Z.head[e] == head and Z.tail(e) == tail:
            return e
    raise InvariantViolation("iii", f"vertices {tail} and {head} are not adjacent")


def rule_violations(rule: Rule) -> list[str]:
    """Requirements (i)-(iv) of a discharging rule plus dart-table sanity."""
    out = [f"{v.requirement}: {v.detail}" for v in validate_darts(rule.conf.Z)]
    Z = rule.conf.Z
    graph = nx.Graph()
    graph.add_nodes_from(range(Z.n_vertices))
    graph.add_edges_from((Z.head[e], Z.tail(e)) for e in range(Z.n_darts))
    if not nx.is_connected(graph):
        out.append("i: graph is disconnected")
    elif Z.n_vertices > 2 and list(nx.articulation_points(graph)):
        out.append("i: removing a vertex disconnects the graph")
    for v in range(Z.n_vertices):
        lo, hi = rule.conf.range(v)
        if not 5 <= lo <= hi:
            out.append(f"ii: vertex {v} has range [{lo}, {hi}]")
    if rule.source == rule.target:
        out.append("iii: s and t coincide")
    if rule.charge < 1:
        out.append("iv: charge must be positive")
    out += rule.conf.violations()
    return out


def _parse_blocks(text: str) -> list[dict]:
    blocks, cur = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "rule":
            if cur is not None or len(words) != 4 or words[2] != "charge":
                raise ParseError(f"line {lineno}: expected 'rule NAME charge R'")
            cur = {"name": words[1], "charge": int(words[3]), "rot": {}, "line": lineno}
        elif cur is None:
            raise ParseError(f"line {lineno}: content outside a rule block")
        elif words[0] == "end":
            blocks.append(cur)
            cur = None
        elif words[0] == "degrees":
            cur["degrees"] = [parse_range(t) for t in words[1:]]
        elif words[0] == "arrow":
            cur["arrow"] = (int(words[1]), int(words[2]))
        elif words[0].endswith(":"):
            cur["rot"][int(words[0][:-1])] = [int(t) for t in words[1:]]
        else:
            raise ParseError(f"line {lineno}: unknown directive {words[0]!r}")
    if cur is not None:
        raise ParseError(f"rule {cur['name']} has no 'end'")
    return blocks


def make_rule(name: str, rotations: Sequence[Sequence[int]], ranges: Sequence[tuple],
              arrow: tuple[int, int], charge: int) -> Rule:
    Z = from_rotations(rotations)
    conf = PseudoConfiguration(Z, [r[0] for r in ranges], [r[1] for r in ranges])
    rule = Rule(name, conf, find_dart(Z, *arrow), charge, [list(r) for r in rotations])
    problems = rule_violations(rule)
    if problems:
        raise InvariantViolation(problems[0].split(":")[0], f"rule {name}: " + "; ".join(problems))
    return rule


def is_symmetric(rule: Rule) -> bool:
    return rooted_key(rule.conf, rule.dart) == rooted_key(mirror(rule.conf), rule.dart)


def mirror_rule(rule: Rule) -> Rule:
    return Rule(rule.name + "'", mirror(rule.conf), rule.dart, rule.charge, rule.rotations, True)


def parse_rules(text: str, closure: bool = True) -> RuleSet:
    """Parse a rule file; each asymmetric rule is followed by its reflection."""
    rules = []
    for block in _parse_blocks(text):
        n = len(block["rot"])
        if sorted(block["rot"]) != list(range(n)):
            raise ParseError(f"rule {block['name']}: vertices must be numbered 0..{n - 1}")
        if len(block.get("degrees", ())) != n or "arrow" not in block:
            raise ParseError(f"rule {block['name']}: need one degree per vertex and an arrow")
        rotations = [block["rot"][v] for v in range(n)]
        rule = make_rule(block["name"], rotations, block["degrees"], block["arrow"], block["charge"])
        rules.append(rule)
        if closure and not is_symmetric(rule):
            rules.append(mirror_rule(rule))
    return RuleSet(rules)


def serialize_rules(rules: RuleSet | Sequence[Rule]) -> str:
    """Inverse of :func:`parse_rules` (reflections are regenerated on load)."""
    lines = []
    for rule in rules:
        if rule.mirrored:
            continue
        lines.append(f"rule {rule.name} charge {rule.charge}")
        for v, rot in enumerate(rule.rotations):
            lines.append(f"{v}: " + " ".join(map(str, rot)))
        lines.append("degrees " + " ".join(format_range(*rule.conf.range(v))
                                          for v in range(rule.conf.Z.n_vertices)))
        lines.append(f"arrow {rule.source} {rule.target}")
        lines.append("end")
    return "\n".join(lines) + "\n"


def load_rules(path: str | Path) -> RuleSet:
    return parse_rules(Path(path).read_text())


# -- application -------------------------------------------------------------

def always_apply(target: PseudoConfiguration, e: int, rule: Rule | CombinedRule) -> bool:
    return homomorphism(rule.conf, rule.dart, target, e, include) is not None


def never_apply(target: PseudoConfiguration, e: int, rule: Rule | CombinedRule) -> bool:
    return homomorphism(rule.conf, rule.dart, target, e, intersect) is None


def dominantly_apply(target: PseudoConfiguration, e: int, rule: Rule | CombinedRule) -> bool:
    return homomorphism(rule.conf, rule.dart, target, e, dominant) is not None


def amount_of_charge_send(target: PseudoConfiguration, e: int, rules: Iterable[Rule]) -> int:
    """Charge that certainly crosses ``e`` towards its head."""
    return sum(rule.charge for rule in rules if always_apply(target, e, rule))


def amount_of_possible_charge_send(target: PseudoConfiguration, e: int,
                                   combined: Iterable[CombinedRule]) -> int:
    """Largest combined charge that might cross ``e``."""
    best = 0
    for rc in combined:
        if not never_apply(target, e, rc):
            best = max(best, rc.charge)
    return best


# -- charges on triangulations -------------------------------------------------

@dataclass
class ChargeLedger:
    degrees: list[int]
    initial: list[int]
    final: list[int]
    sent: dict  # (u, v) -> charge moved from u to v

    @property
    def total(self) -> int:
        return sum(self.final)


def rule_matches(G: PseudoConfiguration, g: int, rule: Rule) -> bool:
    """Rule ``rule`` is applied at dart ``g`` when it embeds with its arrow on ``g``."""
    hom = homomorphism(rule.conf, rule.dart, G, g, include)
    return hom is not None and len(set(hom.vmap)) == len(hom.vmap)


def charge_ledger(Z: PseudoTriangulation, rules: RuleSet | Sequence[Rule]) -> ChargeLedger:
    if any(Z.succ[e] == NIL for e in range(Z.n_darts)):
        raise NotATriangulation("every vertex must be inner")
    G = PseudoConfiguration.exact(Z)
    degrees = [Z.degree(v) for v in range(Z.n_vertices)]
    sent: Counter = Counter()
    for rule in rules:
        lo, hi = rule.conf.range(rule.target)
        slo, shi = rule.conf.range(rule.source)
        for g in range(Z.n_darts):
            h, t = Z.head[g], Z.tail(g)
            if not (lo <= degrees[h] <= hi and slo <= degrees[t] <= shi):
                continue
            if rule_matches(G, g, rule):
                sent[(t, h)] += rule.charge
    initial = [10 * (6 - d) for d in degrees]
    final = list(initial)
    for (u, v), amount in sent.items():
        final[u] -= amount
        final[v] += amount
    return ChargeLedger(degrees, initial, final, dict(sent))


# -- free combination ------------------------------------------------------------

def neutral_rule() -> CombinedRule:
    """Two vertices joined by one edge, ranges [1, inf], no charge."""
    Z = PseudoTriangulation(2, [1, 0], [1, 0], [NIL, NIL], [NIL, NIL])
    return CombinedRule(PseudoConfiguration(Z, [1, 1], [INF, INF]), 0, 0, frozenset())


def add_rule_to_combination(rc: CombinedRule, rule: Rule, index: int,
                            K: ConfigurationSet | None = None,
                            tally: Counter | None = None) -> list[CombinedRule]:
    union, offsets = disjoint_union([rc.conf, rule.conf])
    request = [(rc.dart, rule.dart + offsets[1][1])]
    flags = rc.flags | {index}
    out = []
    for image, hom in free_hom_configuration(union, request, tally):
        e = hom.dmap[rc.dart]
        if K is not None and len(K) and blocked_by(image, image.Z.head[e], K):
            continue
        out.append(CombinedRule(image, e, rc.charge + rule.charge, flags))
    return out


def combine_rules(rules: RuleSet | Sequence[Rule], K: ConfigurationSet | None = None,
                  tally: Counter | None = None) -> list[CombinedRule]:
    """Free combinations of every subset of ``rules`` not blocked by ``K``."""
    combined = [neutral_rule()]
    for index, rule in enumerate(rules):
        grown = list(combined)
        for rc in combined:
            grown += add_rule_to_combination(rc, rule, index, K, tally)
        combined = grown
    return combined


def combine_subset_directly(rules: Sequence[Rule], indices: Sequence[int]) -> list[CombinedRule]:
    """One-shot free image of the neutral rule together with every listed rule."""
    base = neutral_rule()
    if not indices:
        return [base]
    parts = [base.conf] + [rules[i].conf for i in indices]
    union, offsets = disjoint_union(parts)
    requests = [(base.dart, rules[i].dart + offsets[k + 1][1]) for k, i in enumerate(indices)]
    charge = sum(rules[i].charge for i in indices)
    return [CombinedRule(image, hom.dmap[base.dart], charge, frozenset(indices))
            for image, hom in free_hom_configuration(union, requests)]


def summarize(combined: Sequence[CombinedRule]) -> dict:
    top = max((rc.charge for rc in combined), default=0)
    carriers = {rooted_key(rc.conf, rc.dart) for rc in combined if rc.charge == top}
    return {"count": len(combined), "max_charge": top, "max_carriers": len(carriers)}
