from pathlib import Path

import pytest

from lambridge.core import load_grammar

ROOT = Path(__file__).resolve().parent.parent
GRAMMARS = ROOT / "grammars"
GOLDEN = Path(__file__).resolve().parent / "golden"
FIXTURES = ("g0", "g0_ext", "g1", "g2", "g3")


def grammar(name: str):
    return load_grammar(GRAMMARS / f"{name}.txt")


def golden(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def g0():
    return grammar("g0")


@pytest.fixture(scope="session")
def g0_ext():
    return grammar("g0_ext")


@pytest.fixture(scope="session")
def g1():
    return grammar("g1")


@pytest.fixture(scope="session")
def g2():
    return grammar("g2")


@pytest.fixture(scope="session")
def g3():
    return grammar("g3")


# ---------------------------------------------------------------------------
# One PASS/FAIL line per acceptance criterion at the end of the run
# ---------------------------------------------------------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion checked by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    xfail = item.get_closest_marker("xfail")
    if call.when == "setup" and call.excinfo is not None:
        _CRITERIA.setdefault(n, []).append((item.name, False))
    elif call.when == "call":
        ok = call.excinfo is None and xfail is None
        _CRITERIA.setdefault(n, []).append((item.name, ok))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        failed = [name for name, ok in results if not ok]
        verdict = "PASS" if not failed else "FAIL"
        detail = "" if not failed else f" ({', '.join(failed)})"
        terminalreporter.write_line(f"criterion {n}: {verdict}{detail}")
