import os
from pathlib import Path

import pytest

from fourcolor.configlib import build_Dbar, load_config
from fourcolor.discharging import combine_rules, load_rules

PKG_DATA = Path(__file__).resolve().parents[1] / "src" / "fourcolor" / "data"
CONFIGS = PKG_DATA / "configs"
SAMPLE_RULES = PKG_DATA / "rules" / "sample_rules.txt"
REDUCIBLE_MEMBERS = ("deg3", "deg4", "birkhoff")


def published_data() -> Path | None:
    """Directory with the published corpus: configs/*.conf, rules.txt, cartwheels/."""
    root = os.environ.get("FOURCOLOR_DATA")
    return Path(root) if root and Path(root).is_dir() else None


def pytest_addoption(parser):
    parser.addoption("--full", action="store_true", default=False, help="run the long optional gates")


def pytest_configure(config):
    config.addinivalue_line("markers", "full: long-running gate, enabled with --full")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--full"):
        return
    skip = pytest.mark.skip(reason="needs --full")
    for item in items:
        if "full" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(LINES):
            terminalreporter.write_line(LINES[key])


@pytest.fixture(scope="session")
def conf():
    return lambda name: load_config(CONFIGS / f"{name}.conf")


@pytest.fixture(scope="session")
def sample_rules():
    return load_rules(SAMPLE_RULES)


@pytest.fixture(scope="session")
def sample_combined(sample_rules):
    return combine_rules(sample_rules)


@pytest.fixture(scope="session")
def dbar():
    return build_Dbar([load_config(CONFIGS / f"{n}.conf") for n in REDUCIBLE_MEMBERS])


@pytest.fixture(scope="session")
def blocked_ctx(sample_rules, dbar):
    from fourcolor.cartwheel import Context

    return Context(sample_rules, combine_rules(sample_rules, dbar), dbar)


@pytest.fixture(scope="session")
def initial7(blocked_ctx):
    from fourcolor.cartwheel import enum_possible_bad_wheels

    return enum_possible_bad_wheels(7, blocked_ctx)


@pytest.fixture(scope="session")
def survivors7(initial7, blocked_ctx):
    """Degree-7 survivors of the sample pipeline (charge assertions off: the rules are synthetic)."""
    from fourcolor.cartwheel import enum_bad_cartwheels

    return [C for C0 in initial7 for C in enum_bad_cartwheels(C0, blocked_ctx, check=False)]
