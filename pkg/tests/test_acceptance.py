"""Acceptance checks, one group per criterion (see the summary printed by conftest)."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest

from spgraphs import report, singular, verify
from spgraphs.cli import main
from spgraphs.families import FAMILIES, LEVELS, ConnectivityLevel, FamilyKind, counts

C = pytest.mark.criterion


# -- 1 -----------------------------------------------------------------------------------

@C(1)
@pytest.mark.parametrize("family", [f.value for f in FAMILIES])
@pytest.mark.parametrize("level", [lev.value for lev in LEVELS])
def test_pipeline_equals_brute_force(family, level, oracle_tables):
    res = verify.verify_oracle(family, level, 7, oracle_tables)
    assert res.passed, res.detail


@C(1)
def test_corrupted_table_is_located(oracle_tables):
    good = counts("sp", "all", 7, refined=True)
    bad = verify.corrupt(good, (5, 6))
    res = verify.compare_tables(bad, oracle_tables[FamilyKind.SP].count_table("all"), "control")
    assert not res.passed
    assert "n=5 q=6" in res.detail


# -- 2 -----------------------------------------------------------------------------------

@C(2)
def test_two_trees_are_the_edge_maximal_sp_blocks():
    table = counts("sp", "biconnected", 30, refined=True)
    for n in range(4, 31):
        assert table.entries[(n, 2 * n - 3)] == math.comb(n, 2) * (2 * n - 3) ** (n - 4)
        assert not any(q > 2 * n - 3 for (m, q) in table.entries if m == n)


# -- 3 -----------------------------------------------------------------------------------

@C(3)
def test_dissection_bijection_and_schroeder_numbers():
    results = verify.verify_identities(n_max=4, dissection_max=60)
    by_name = {r.name: r for r in results}
    assert by_name["dissection bijection 3<=n<=60"].passed
    assert by_name["little Schroeder numbers n=3..7"].passed


# -- 4 -----------------------------------------------------------------------------------

PUBLISHED = [
    # (family, name, published value)
    ("sp", "R", "0.12800"), ("sp", "b", "0.0010131"), ("sp", "t", "0.80703"),
    ("sp", "R_prime", "-0.22002"), ("sp", "R_second", "0.57667"),
    ("sp", "kappa0", "1.71891"), ("sp", "lambda0", "0.16846"),
    ("sp", "tau", "0.1279695"), ("sp", "D_at_tau", "1.84351"), ("sp", "rho", "0.11021"),
    ("sp", "c", "0.0067912"), ("sp", "g", "0.0076388"),
    ("sp", "rho_prime", "-0.17818"), ("sp", "tau_prime", "-0.21992"), ("sp", "rho_second", "0.44298"),
    ("sp", "kappa", "1.61673"),
    ("outerplanar", "tau", "0.17076"), ("outerplanar", "rho", "0.13659"), ("outerplanar", "h", "0.017657"),
    ("outerplanar", "zeta", "1.56251"), ("outerplanar", "eta", "0.22399"),
    ("k23free", "rho", "0.13648"), ("k23free", "s", "0.013961"),
    ("k23free", "zeta", "1.56325"), ("k23free", "eta", "0.224206"),
    ("sp", "nu", "0.11761"), ("sp", "exp_minus_nu", "0.88904"), ("outerplanar", "exp_minus_xi", "0.86208"),
    ("sp", "gamma", "9.0733"), ("outerplanar", "gamma", "7.3209"), ("k23free", "gamma", "7.3270"),
]


@C(4)
@pytest.mark.parametrize("family,name,published", PUBLISHED, ids=[f"{f}-{n}" for f, n, _ in PUBLISHED])
def test_constant_matches_published_digits(family, name, published, constants_256):
    value = constants_256[(family, name)].value
    ref = mpmath.mpf(published)
    rel = abs(value - ref) / abs(ref)
    assert rel <= 1e-4, f"computed {mpmath.nstr(value, 12)} vs {published} (relative gap {mpmath.nstr(rel, 3)})"


@C(4)
def test_outerplanar_block_radius_is_exact(constants_256):
    with mpmath.workprec(256):
        assert abs(constants_256[("outerplanar", "R")].value - (3 - 2 * mpmath.sqrt(2))) < mpmath.mpf(2) ** -240


# -- 5 -----------------------------------------------------------------------------------

@C(5)
def test_sp_variance_matches_exactly_one_published_value(constants_256):
    lam = constants_256[("sp", "lambda")].value
    assert report.variance_match(lam) == ["0.21125"]


# -- 6 -----------------------------------------------------------------------------------

@C(6)
@pytest.mark.parametrize("family", [f.value for f in FAMILIES])
@pytest.mark.parametrize("level", ["biconnected", "connected"])
def test_analytic_derivatives_match_finite_differences(family, level):
    law = singular.edge_law(family, level, 256)
    assert law.fd_agreement < 1e-8
    for route, gap in law.routes.items():
        assert gap < mpmath.mpf(2) ** -128, route


# -- 7 -----------------------------------------------------------------------------------

_expansions: dict = {}


@C(7)
@pytest.mark.parametrize("family", [f.value for f in FAMILIES])
@pytest.mark.parametrize("level", [lev.value for lev in LEVELS])
def test_coefficients_approach_singular_asymptotics(family, level):
    ex = _expansions.get(family) or _expansions.setdefault(family, singular.expansion(family, 1, 256))
    rep = verify.asymptotic_handshake(family, level, (100, 400), 256, ex)
    (_, r100), (_, r400) = rep.ratios
    assert 0.9 < r400 < 1.1
    assert abs(r400 - 1) < abs(r100 - 1)


# -- 8 -----------------------------------------------------------------------------------

@C(8)
@pytest.mark.parametrize("family", [f.value for f in FAMILIES])
@pytest.mark.parametrize("level", [lev.value for lev in LEVELS])
def test_edge_moments_converge(family, level):
    rep = verify.edge_moments(family, level, (40, 120), 256)
    res = verify.moment_check(rep)
    assert res.passed, res.detail


@C(8)
def test_sp_block_edge_support():
    assert verify.support_check(40).passed


@C(8)
def test_small_moment_matches_refined_table(oracle_tables):
    from_table = verify.moments_from_table(oracle_tables[FamilyKind.SP].count_table("all"), 4)
    from_series = verify.moments_from_jet_series("sp", "all", [4])[0]
    assert from_table == from_series
    assert from_table.mean == Fraction(186, 63)


# -- 9 -----------------------------------------------------------------------------------

@C(9)
@pytest.mark.parametrize("family,limit", [("sp", "0.88904"), ("outerplanar", "0.86208")])
def test_component_law(family, limit):
    rows = verify.component_distribution(family, (50, 300), 256)
    assert sum(rows[0].probabilities.values()) == 1
    assert rows[1].tail < Fraction(1, 10 ** 12)
    assert rows[1].tv < rows[0].tv
    lim = mpmath.mpf(limit)
    assert abs(verify._mp(rows[1].p1) - lim) < abs(verify._mp(rows[0].p1) - lim)


# -- 10 ----------------------------------------------------------------------------------

@C(10)
@pytest.mark.parametrize("argv", [
    ["count", "--family", "sp", "--level", "all", "--upto", "60"],
    ["count", "--family", "outerplanar", "--level", "connected", "--upto", "25", "--refined", "--format", "json"],
    ["verify", "--suite", "identities", "--upto", "12", "--format", "json"],
], ids=["count-csv", "count-json", "verify-json"])
def test_reruns_are_byte_identical(argv, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(argv + ["--output", str(a)]) == 0
    assert main(argv + ["--output", str(b), "--threads", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


@C(10)
def test_constants_report_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["constants", "--output", str(a)]) == 0
    assert main(["constants", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@C(10)
def test_doubling_precision_changes_no_reported_digit():
    lo = report.constants_report(256)
    hi = report.constants_report(512)
    for a, b in zip(lo, hi):
        assert (a["family"], a["name"]) == (b["family"], b["name"])
        assert a["agreed_digits"] >= 50
        assert a["value_decimal"] == b["value_decimal"], a["name"]
