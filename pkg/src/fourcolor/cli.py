"""Command-line front end: ``fourcolor <subcommand> ...``."""

from __future__ import annotations

import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import __version__
from .configlib import (ConfigurationSet, InvariantViolation, ParseError, build_Dbar, load_config,
                        load_directory, parse_config)
from .dartcore import dumps
from .discharging import charge_ledger, combine_rules, load_rules, parse_rules, rule_violations, summarize
from .reducibility import DReducible, check_d_reducibility
from .triangulations import read_rot, to_darts

PACKAGE_DATA = Path(__file__).parent / "data"
DEFAULT_CONFIGS = PACKAGE_DATA / "configs"
DEFAULT_RULES = PACKAGE_DATA / "rules" / "sample_rules.txt"


def _sha1(path: Path) -> str:
    return hashlib.sha1(path.read_bytes()).hexdigest()


def _write_manifest(out: Path, command: str, inputs: list[Path], params: dict, files: list[str],
                    counts: dict, seconds: float) -> None:
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"command": command, "inputs": {p.name: _sha1(p) for p in inputs if p.is_file()},
                "parameters": params, "files": sorted(files), "counts": counts,
                "seconds": round(seconds, 3)}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))


def _blockers(configs: str | None) -> ConfigurationSet:
    """Every configuration in ``configs``; by default the shipped reducible ones."""
    if configs:
        return build_Dbar(load_directory(configs))
    from .colorer import DEFAULT_MEMBERS

    return build_Dbar([load_config(DEFAULT_CONFIGS / f"{name}.conf") for name in DEFAULT_MEMBERS])


def _rules(path: str | None):
    return load_rules(path or DEFAULT_RULES)


@click.group()
@click.version_option(__version__)
def main():
    """Reducibility, discharging, cartwheel and four-coloring tools."""


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
def validate(files):
    """Check .conf, .rot and rule files for well-formedness."""
    from .colorer import InvalidInput, check_triangulation

    bad = 0
    for name in files:
        path = Path(name)
        text = path.read_text()
        try:
            if path.suffix == ".conf":
                parse_config(text)
            elif path.suffix == ".rot":
                check_triangulation(read_rot(text))
            else:
                problems = [p for r in parse_rules(text, closure=False) for p in rule_violations(r)]
                if problems:
                    raise ValueError("; ".join(problems))
            click.echo(f"{name}: ok")
        except (ParseError, InvariantViolation, InvalidInput, ValueError) as exc:
            bad += 1
            click.echo(f"{name}: invalid: {exc}")
    sys.exit(1 if bad else 0)


def _reduce_one(path: str) -> dict:
    conf = load_config(path)
    result = check_d_reducibility(conf)
    return {"name": conf.name or Path(path).stem, "file": Path(path).name,
            "verdict": "D-reducible" if isinstance(result, DReducible) else "not D-reducible",
            "max_level": result.max_level if isinstance(result, DReducible) else None,
            "ring_size": conf.ring_size, "seconds": round(result.seconds, 3),
            "stuck": 0 if isinstance(result, DReducible) else len(result.stuck_colorings)}


@main.command("check-reducible")
@click.argument("files", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("--configs", type=click.Path(exists=True, file_okay=False), help="Check every .conf in DIR.")
@click.option("--sample", type=int, default=None, help="Check a seeded random sample of this size.")
@click.option("--seed", type=int, default=0)
@click.option("--full", is_flag=True, help="Check everything found under --configs.")
@click.option("--jobs", type=int, default=1)
@click.option("--out", type=click.Path(file_okay=False), default=None)
@click.option("--strict", is_flag=True, help="Exit nonzero when a configuration is not D-reducible.")
def check_reducible(files, configs, sample, seed, full, jobs, out, strict):
    """D-reducibility verdict, maximum level and ring size per configuration."""
    import random

    paths = [str(p) for p in files]
    if configs:
        found = sorted(str(p) for p in Path(configs).glob("*.conf"))
        if sample and not full:
            found = sorted(random.Random(seed).sample(found, min(sample, len(found))))
        paths += found
    if not paths:
        raise click.UsageError("give configuration files or --configs DIR")
    start = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_reduce_one, paths))
    else:
        reports = [_reduce_one(p) for p in paths]
    for r in reports:
        level = f", level <= {r['max_level']}" if r["max_level"] is not None else f", {r['stuck']} stuck colorings"
        click.echo(f"{r['name']}: {r['verdict']}{level}, ring {r['ring_size']}, {r['seconds']} s")
    failing = [r for r in reports if r["max_level"] is None]
    if out:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "reducibility.json").write_text(json.dumps(reports, indent=1, sort_keys=True))
        _write_manifest(outdir, "check-reducible", [Path(p) for p in paths], {"sample": sample, "seed": seed},
                        ["reducibility.json"], {"checked": len(reports), "reducible": len(reports) - len(failing)},
                        time.perf_counter() - start)
    sys.exit(1 if strict and failing else 0)


@main.command("combine-rules")
@click.argument("rules", type=click.Path(exists=True, dir_okay=False))
@click.option("--block", default="none", help="'none' or a directory of blocking configurations.")
@click.option("--out", type=click.Path(file_okay=False), default=None)
def combine_rules_cmd(rules, block, out):
    """Free combinations of every rule subset; reports the maximum charge."""
    start = time.perf_counter()
    ruleset = load_rules(rules)
    K = None if block == "none" else _blockers(block)
    combined = combine_rules(ruleset, K)
    info = summarize(combined)
    click.echo(f"max charge {info['max_charge']}, {info['max_carriers']} max carriers, "
               f"{info['count']} combinations")
    if out:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        top = [rc for rc in combined if rc.charge == info["max_charge"]]
        lines = [json.dumps({"charge": rc.charge, "dart": rc.dart, "rules": sorted(rc.flags),
                             "lo": list(map(float, rc.conf.lo)), "hi": list(map(float, rc.conf.hi)),
                             "map": json.loads(dumps(rc.conf.Z))}, sort_keys=True) for rc in top]
        (outdir / "carriers.jsonl").write_text("\n".join(sorted(lines)) + "\n")
        _write_manifest(outdir, "combine-rules", [Path(rules)], {"block": block}, ["carriers.jsonl"],
                        info, time.perf_counter() - start)


def _read_graph(path) -> list[list[int]]:
    try:
        return read_rot(Path(path).read_text())
    except (ValueError, IndexError) as exc:
        raise click.ClickException(f"{path}: not a rotation file ({exc})")


@main.command()
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@click.option("--rules", type=click.Path(exists=True, dir_okay=False), default=None)
def charge(graph, rules):
    """Final charges of a triangulation under a rule set."""
    ledger = charge_ledger(to_darts(_read_graph(graph)), _rules(rules))
    click.echo(f"sum={ledger.total}, max T={max(ledger.final)}")


@main.command("enum-bad-cartwheels")
@click.option("--rules", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--configs", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--degrees", default="7,8", help="Comma-separated center degrees.")
@click.option("--full", is_flag=True, help="All center degrees 7..11.")
@click.option("--jobs", type=int, default=1)
@click.option("--limit", type=int, default=None, help="Refine only the first N initial wheels.")
@click.option("--no-check", is_flag=True, help="Skip the survivor assertions.")
@click.option("--out", type=click.Path(file_okay=False), default=None)
def enum_bad_cartwheels_cmd(rules, configs, degrees, full, jobs, limit, no_check, out):
    """Cartwheels that survive pruning, grouped by center degree."""
    from .cartwheel import CartwheelAssertion, Context, enum_all_bad_cartwheels, worker_count

    ruleset = _rules(rules)
    ctx = Context(ruleset, combine_rules(ruleset), _blockers(configs))
    degs = (7, 8, 9, 10, 11) if full else tuple(int(x) for x in degrees.split(","))
    start = time.perf_counter()
    try:
        result = enum_all_bad_cartwheels(ctx, degs, out, worker_count(jobs) if jobs != 1 else 1,
                                         check=not no_check, limit=limit)
    except CartwheelAssertion as exc:
        click.echo(f"assertion failed: {exc}")
        if out:
            Path(out).mkdir(parents=True, exist_ok=True)
            (Path(out) / "witness.json").write_text(dumps(exc.witness.Z))
        sys.exit(2)
    info = result["manifest"]
    for d, k in info["by_center_degree"].items():
        click.echo(f"center degree {d}: {k} survivors")
    click.echo(f"total: {info['survivors']}")
    if out:
        inputs = [Path(rules or DEFAULT_RULES)]
        params = {"degrees": list(degs), "limit": limit, "check": not no_check, "jobs": jobs,
                  "configs": configs or "default"}
        counts = {"initial_wheels": info["initial_wheels"], "survivors": info["survivors"],
                  "by_center_degree": info["by_center_degree"]}
        _write_manifest(Path(out), "enum-bad-cartwheels", inputs, params, info["files"], counts,
                        time.perf_counter() - start)


@main.command("check-combine")
@click.argument("cartwheels", type=click.Path(exists=True, file_okay=False))
@click.option("--configs", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--sample", type=int, default=None, help="Smoke run: sample this many survivors (seeded) as the whole pool.")
@click.option("--seed", type=int, default=0)
@click.option("--full", is_flag=True)
@click.option("--out", type=click.Path(file_okay=False), default=None)
def check_combine(cartwheels, configs, sample, seed, full, out):
    """Degree-8, 7-triangle and degree-7 combination checks over stored survivors."""
    import random

    from .cartwheel import read_cartwheels
    from .combiner import check_7triangle, check_deg7, check_deg8

    pool = read_cartwheels(cartwheels)
    D = _blockers(configs)
    if sample and not full:
        # the sampled survivors are both examined and used as the gluing pool
        pool = [pool[i] for i in sorted(random.Random(seed).sample(range(len(pool)), min(sample, len(pool))))]
    start = time.perf_counter()
    failures = []
    counts = {}
    for check in (check_deg8, check_7triangle, check_deg7):
        report = check(pool, D)
        click.echo(f"{report.name}: {report.examined} examined, {report.combinations} combinations, "
                   f"{len(report.failures)} failures")
        counts[report.name] = {"examined": report.examined, "combinations": report.combinations,
                               "failures": len(report.failures)}
        failures += report.failures
    if out:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        names = []
        for i, f in enumerate(failures):
            if f.witness is not None:
                name = f"failure-{f.check}-{i}.json"
                (outdir / name).write_text(dumps(f.witness.Z))
                names.append(name)
        if names:
            click.echo(f"witnesses written to {outdir}")
        params = {"sample": sample, "seed": seed, "full": full, "configs": configs or "default",
                  "cartwheels": str(cartwheels)}
        _write_manifest(outdir, "check-combine", [], params, names, counts, time.perf_counter() - start)
    sys.exit(1 if failures else 0)


@main.command()
@click.option("--in", "infile", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "outfile", type=click.Path(dir_okay=False), default=None)
@click.option("--verify", is_flag=True)
@click.option("--prefer", type=click.Choice(["reducibles", "obstructions", "larger"]), default="reducibles")
def color(infile, outfile, verify, prefer):
    """Four-color a triangulation given as a rotation system."""
    from .colorer import ColorerConfig, InvalidInput, four_color, verify_coloring, write_coloring

    rot = _read_graph(infile)
    try:
        coloring = four_color(rot, config=ColorerConfig(prefer=prefer))
    except InvalidInput as exc:
        raise click.ClickException(f"invalid input: {exc}")
    text = write_coloring(coloring)
    if outfile:
        Path(outfile).write_text(text)
    else:
        click.echo(text, nl=False)
    if verify:
        ok = verify_coloring(rot, coloring)
        click.echo(f"verified: {'proper' if ok else 'IMPROPER'}", err=True)
        sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
