import pytest

from lcjdt import checks
from lcjdt.report import CheckReport


def test_report_statuses():
    rep = CheckReport()
    rep.add("a", 1e-9, 1e-8)
    rep.add("b", 2.0, None)
    rep.skip("c", "not applicable")
    assert rep.passed and rep.max_residual == 2.0
    rep.add("d", 1.0, 0.5)
    assert not rep.passed
    assert rep["d"].status == "fail"
    assert "[FAIL    ] d" in rep.text()
    with pytest.raises(KeyError):
        rep["zzz"]


def test_suite_isolates_exceptions(ctx, monkeypatch):
    def boom(ctx):
        raise RuntimeError("exploded")

    suite = (("first", boom), ("special-function oracles", checks.check_special_functions))
    monkeypatch.setattr(checks, "SUITE", suite)
    seen = []
    res = checks.run_suite(ctx, echo=lambda name, rep: seen.append(name))
    assert seen == ["first", "special-function oracles"]
    assert not res["first"].passed and "exploded" in res["first"].entries[0].note
    assert res["special-function oracles"].passed


def test_suite_covers_every_criterion():
    assert len(checks.SUITE) == 14
    assert len({name for name, _ in checks.SUITE}) == 14


def test_caveats_are_plain_text():
    for c in checks.CAVEATS:
        assert "\u2014" not in c and "Eq." not in c
