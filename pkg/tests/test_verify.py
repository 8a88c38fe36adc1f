import pytest

from cycinv.context import GroupContext
from cycinv.verify import (conjecture_search, length_laws, operator_identities, run_all,
                           series_bridge, series_identities)


@pytest.mark.parametrize("ctx", [GroupContext(2), GroupContext(3), GroupContext(5),
                                 GroupContext(3, 1, 2), GroupContext(2, 3, 5)],
                         ids=["p2", "p3", "p5", "p3r1n2", "p2r3n5"])
def test_operator_identities(ctx):
    res = operator_identities(ctx, 4, seed=3, samples=10)
    assert res.ok, res.failures
    assert res.checks > 0


def test_run_all_general_context():
    res = run_all(GroupContext(3, 1, 3), 5)
    assert all(r.ok for r in res)
    # ring-specific suites only run for r = 2, n = p + 1
    assert "length laws" not in [r.name for r in res]


@pytest.mark.parametrize("p", [2, 3])
def test_length_laws_nonvacuous(p):
    res = length_laws(p, 10)
    assert res.ok, res.failures
    assert res.checks > 300


def test_series_suites():
    for p in (2, 3):
        assert series_bridge(p, 10).ok
        assert series_identities(p, 30).ok


def test_suite_line_format():
    res = series_identities(2, 10)
    assert res.line().startswith("PASS\tseries identities\t")


def test_conjecture_report():
    rep = conjecture_search(GroupContext(3), 9)
    d = rep.to_dict()
    assert set(d) == {"p", "max_degree", "pairs_checked", "monotonicity_failures",
                      "counterexamples", "status"}
    assert d["pairs_checked"] > 0
    assert d["status"] in ("no counterexample found", "counterexample found")
