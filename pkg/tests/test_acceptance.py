"""Acceptance gate: the full verification suite at default parameters and grids.

alpha = 0.5, beta = -0.5, M = (1, 1; 1, 2). One test per criterion; each
prints a single PASS/FAIL line (also collected into the terminal summary).
"""
import time

import pytest

from conftest import ACCEPTANCE_LINES
from lcjdt.checks import SUITE, run_suite

CRITERIA = [(i + 1, name) for i, (name, _) in enumerate(SUITE)]


@pytest.fixture(scope="module")
def results(ctx):
    t0 = time.perf_counter()
    res = run_suite(ctx)
    res["_elapsed"] = time.perf_counter() - t0
    return res


@pytest.mark.parametrize("num,name", CRITERIA, ids=[f"{n:02d}-{name.replace(' ', '-')}" for n, name in CRITERIA])
def test_criterion(results, num, name):
    rep = results[name]
    worst = [e for e in rep if e.tolerance is not None]
    summary = "; ".join(f"{e.name}={e.residual:.2e}<={e.tolerance:.0e}" for e in worst) or "no asserted entries"
    failed = [e for e in rep if not e.passed]
    line = f"{'PASS' if not failed else 'FAIL'}  {num:2d}. {name}: {summary}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not failed, rep.text()


def test_runtime_budget(results):
    line = f"INFO  suite runtime {results['_elapsed']:.1f} s (budget 300 s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert results["_elapsed"] < 300
