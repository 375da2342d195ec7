"""Prints one PASS/FAIL line per acceptance criterion after the run."""

from __future__ import annotations

import re

_CRITERIA = {
    1: "paper-example fixtures (exact, < 1 s)",
    2: "classification table and prediction rows",
    3: "conn_cpss = brute force on >= 500 random CPSS formulas (< 60 s)",
    4: "Horn structure suite on >= 500 random clause sets",
    5: "distance non-expansion on >= 200 safely-cw-bijunctive formulas",
    6: "reduction correctness, exhaustive sweep + figure fixture (< 120 s)",
    7: "express_m on [phi_coNP], R_coNP, and >= 20 random Horn relations",
    8: "non-separation fixtures T and F",
    9: "nu-normalization preserves solutions on >= 500 clause sets",
}

_PATTERN = re.compile(r"test_acceptance\.py::\w*test_criterion_(\d+)")
_results: dict[int, str] = {}


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.failed:
        _results[n] = "FAIL"
    elif report.skipped:
        _results.setdefault(n, "SKIP")
    elif report.when == "call" and report.passed:
        _results.setdefault(n, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_CRITERIA):
        status = _results.get(n, "NOT RUN")
        terminalreporter.write_line(f"criterion {n}: {status} - {_CRITERIA[n]}")
