from __future__ import annotations

import json
from fractions import Fraction

from spgraphs import verify
from spgraphs.families import counts


def test_diff_and_corrupt():
    t = counts("outerplanar", "connected", 6, refined=True)
    assert verify.diff_tables(t, t) == []
    bad = verify.corrupt(t)
    diffs = verify.diff_tables(bad, t)
    assert len(diffs) == 1
    assert not verify.compare_tables(bad, t, "x").passed


def test_oracle_suite_includes_a_failing_control():
    results = verify.verify_oracle_all(5)
    control = [r for r in results if "control" in r.name]
    assert control and all(r.passed for r in results)


def test_identities_suite():
    results = verify.verify_identities(n_max=10, dissection_max=20)
    assert results and all(r.passed for r in results), [r.name for r in results if not r.passed]


def test_two_tree_formula():
    assert [verify.two_tree_count(n) for n in (3, 4, 5)] == [1, 6, 70]


def test_moment_routes_agree_for_small_n():
    for family in ("sp", "k23free"):
        table = counts(family, "connected", 7, refined=True)
        jet = verify.moments_from_jet_series(family, "connected", range(1, 8))
        for row in jet:
            assert verify.moments_from_table(table, row.n) == row
    assert verify.moments_from_table(counts("sp", "all", 3, refined=True), 2) == verify.MomentRow(2, Fraction(1, 2), Fraction(1, 4))


def test_component_cutoff_grows_slowly():
    assert verify.component_cutoff(50) == 14
    assert verify.component_cutoff(300) == 16


def test_renderers():
    res = [verify.CheckResult("a", True, "fine", {"v": Fraction(1, 3)}), verify.CheckResult("b", False, "bad")]
    md = verify.render_markdown(res)
    assert "a" in md and "FAIL" in md
    data = json.loads(verify.render_json(res, {"k": 1}))
    assert data["meta"] == {"k": 1}
    assert [r["passed"] for r in data["results"]] == [True, False]
    assert data["results"][0]["data"]["v"] == "1/3"


def test_small_run_suite():
    results = verify.run_suite("identities", upto=8)
    assert all(r.passed for r in results)
