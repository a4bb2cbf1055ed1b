"""Prints one PASS/FAIL line per acceptance criterion after the run."""

import re

CRITERIA = {
    1: "difference census formulas exact for n in [5, 14]",
    2: "sphere basis sandwich: exact minima and constructed covers",
    3: "overlap trial suites all hold at the claimed scales",
    4: "exact interval minima match the exhaustive oracle for M <= 24",
    5: "interval bases cover [1..M] within the size bound up to 10^6",
    6: "seeded reductions preserve covers and shrink products",
    7: "seeded surviving products divide (M-1)!",
    8: "certificate suites sound on sphere covers and pipeline runs",
    9: "reports byte-identical across worker pool sizes",
}

_NODE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_outcomes: dict = {}


def pytest_runtest_logreport(report):
    m = _NODE.search(report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    if report.when == "call":
        _outcomes[num] = _outcomes.get(num, True) and report.passed
    elif report.failed:
        _outcomes[num] = False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_outcomes):
        status = "PASS" if _outcomes[num] else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status} - {CRITERIA[num]}")
