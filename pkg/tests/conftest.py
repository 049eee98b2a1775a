import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"
sys.path.insert(0, str(Path(__file__).resolve().parent))

# criterion number -> (title, outcome); filled in by test_acceptance.py
ACCEPTANCE: dict[int, list] = {}


@pytest.fixture
def scenarios_dir() -> Path:
    return SCENARIOS


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for mark in report.keywords:
        if mark.startswith("criterion_"):
            n = int(mark.split("_")[1])
            entry = ACCEPTANCE.setdefault(n, [True, []])
            entry[0] = entry[0] and report.passed
            entry[1].append(report.nodeid.split("::")[-1])


def pytest_configure(config):
    for n in range(1, 11):
        config.addinivalue_line("markers", f"criterion_{n}: acceptance criterion {n}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    from test_acceptance import TITLES

    terminalreporter.section("acceptance criteria")
    for n in sorted(TITLES):
        if n not in ACCEPTANCE:
            terminalreporter.write_line(f"[ NOT RUN ] {n:2d}. {TITLES[n]}")
            continue
        ok, tests = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL':^9}] {n:2d}. {TITLES[n]}")
