"""Recompute the brute-force reference values used by the tests and store them.

Run from the repository root: ``python3 scripts/freeze_oracles.py``.  The
values come only from ``tests/oracles.py`` and the raw configuration files.
"""

import json
import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracles  # noqa: E402

CONFIGS = ROOT / "src" / "fourcolor" / "data" / "configs"
OUT = ROOT / "tests" / "data" / "frozen_oracles.json"


def read_conf(path: Path) -> tuple[list[list[int]], int]:
    rows = [ln.split("#", 1)[0].strip() for ln in path.read_text().splitlines()]
    rows = [r for r in rows if r]
    n, ring = map(int, rows[0].split())
    rot_rows = rows[1 + (n - ring):]
    rotations = [[] for _ in range(n)]
    for row in rot_rows:
        left, _, right = row.partition(":")
        rotations[int(left)] = [int(x) for x in right.split()]
    return rotations, ring


def main() -> None:
    frozen = {"configs": {}}
    for name in ("deg3", "deg4", "deg5", "birkhoff"):
        rotations, ring = read_conf(CONFIGS / f"{name}.conf")
        ext = oracles.extendible_ring_colorings(rotations, ring)
        ok, level = oracles.d_reducibility_levels(rotations, ring)
        frozen["configs"][name] = {
            "ring_size": ring,
            "proper_ring_colorings": len(oracles.proper_cycle_colorings(ring)),
            "extendible": len(ext),
            "d_reducible": ok,
            "max_level": max(level.values()) if ok else None,
            "level_histogram": {str(k): v for k, v in sorted(Counter(level.values()).items())},
        }
    frozen["catalan"] = {str(n): oracles.catalan(n // 2) for n in (0, 2, 4, 6, 8, 10, 12)}
    frozen["noncrossing_partitions"] = {str(n): len(oracles.non_crossing_partitions(n)) for n in range(7)}
    frozen["wheel_words"] = {str(d): oracles.necklaces(d, 5) for d in (5, 6, 7, 8)}
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(frozen, indent=1, sort_keys=True) + "\n")
    print(json.dumps(frozen, indent=1, sort_keys=True))


if __name__ == "__main__":
    main()
