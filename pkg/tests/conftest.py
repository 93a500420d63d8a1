"""Shared brute-force oracles and the acceptance summary hook.

The oracles below are plain nested loops over Python values, kept apart from
the vectorised library code so the two routes can be compared.
"""

from __future__ import annotations

import itertools

import pytest


def oracle_transitivity_failures(f, op, xs, dissimilarity=True, tol=1e-9):
    """All ``(x, z, y)`` in lexicographic order where transitivity fails."""
    bad = []
    for x, z, y in itertools.product(xs, repeat=3):
        lhs, rhs = f(x, y), op(f(x, z), f(z, y))
        if (lhs > rhs + tol) if dissimilarity else (lhs < rhs - tol):
            bad.append((x, z, y))
    return bad


def oracle_same_preorder(f, g, xs, tol=1e-9):
    pairs = list(itertools.product(xs, repeat=2))
    for p, q in itertools.product(pairs, repeat=2):
        if (f(*p) <= f(*q) + tol) != (g(*p) <= g(*q) + tol):
            return False
    return True


def unit_grid(points):
    return [k / (points - 1) for k in range(points)]


_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__.endswith("test_acceptance"):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE.append((item.name, report.outcome, doc))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, doc in _ACCEPTANCE:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}: {doc}")
