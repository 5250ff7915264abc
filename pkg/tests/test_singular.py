from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from spgraphs import singular as sg
from spgraphs.jets import Jet, exp, log, newton_jets, sqrt

TINY = mpmath.mpf(10) ** -50


def test_jet_elementary_functions():
    with mpmath.workprec(200):
        j = Jet.variable(mpmath.mpf("0.3"), 4)
        e = exp(log(1 + j))
        assert all(abs(a - b) < TINY for a, b in zip(e.c, (1 + j).c))
        s = sqrt(j * j)
        assert abs(s.derivative(1) - 1) < TINY
        f = exp(j) / (1 + j)
        ref = mpmath.diff(lambda t: mpmath.exp(t) / (1 + t), mpmath.mpf("0.3"), 3)
        assert abs(f.derivative(3) - ref) < mpmath.mpf(10) ** -40


def test_newton_jets_on_an_explicit_inverse():
    with mpmath.workprec(200):
        # x^2 = p has x(p) = sqrt(p)
        p0 = mpmath.mpf(2)
        x = newton_jets(lambda xs, p: [xs[0] * xs[0] - p], [mpmath.sqrt(p0)], 3, Jet.variable(p0, 3))[0]
        assert abs(x.derivative(3) - mpmath.diff(mpmath.sqrt, p0, 3)) < TINY


@pytest.mark.parametrize("y", [Fraction(1, 2), 1, 2])
def test_solve_t_residual(y):
    with mpmath.workprec(256):
        t = sg.solve_t(y, 256)
        yy = mpmath.mpf(y.numerator) / y.denominator if isinstance(y, Fraction) else mpmath.mpf(y)
        assert 0 < t < 1
        assert abs(sg.Y(t) - yy) < TINY


def test_solve_t_limits():
    small = [sg.solve_t(mpmath.mpf(10) ** -k, 128) for k in (4, 8, 12)]
    assert small[0] > small[1] > small[2] and small[2] < 1e-5 ** 0.5
    with pytest.raises(ValueError):
        sg.solve_t(0)


def test_radius_2conn():
    R, ex = sg.radius_2conn(1, 256)
    assert abs(R - mpmath.mpf("0.128003817736")) < 1e-11
    assert ex.D1 < 0 and ex.B3 > 0
    assert sg.psi2_t(sg.solve_t(1)) < 0
    assert ex.residuals["psi'(upsilon)"] < TINY
    for name, gap in ex.cross_checks.items():
        assert gap < mpmath.mpf(10) ** -40, name


def test_sp_saddle_system():
    sol = sg.saddle_sp(1, 256)
    assert 0 < sol.tau < sol.R
    assert sol.residuals["T(tau,D)"] < TINY
    assert sol.residuals["network(tau,D)"] < TINY
    assert abs(sol.rho - mpmath.mpf("0.1102133466805")) < 1e-12


def test_sp_expansion_signs_and_routes():
    ex = sg.rho_and_expansion_sp(1, 256)
    assert ex.F1 < 0 and ex.C3 > 0
    assert abs(ex.C2 + ex.F0) == 0
    for name, gap in ex.cross_checks.items():
        assert gap < mpmath.mpf(10) ** -40, name


def test_network_series_seeds_converge_towards_scalar_value():
    res = __import__("spgraphs.verify", fromlist=["x"]).network_series_trend(128, (25, 50, 100))
    assert res.passed, res.detail


def test_outerplanar_quartic_and_radius():
    sol, ex = sg.solve_outerplanar(1, 256)
    assert ex.cross_checks["quartic root"] < TINY
    assert ex.cross_checks["R = 3 - 2 sqrt 2"] < TINY
    assert ex.cross_checks["B(tau) quadrature"] < mpmath.mpf(10) ** -30


def test_k23_family_has_larger_growth():
    _, op = sg.solve_outerplanar(1, 128)
    _, k23 = sg.solve_k23(1, 128)
    assert k23.gamma > op.gamma


@pytest.mark.parametrize("y", [Fraction(1, 2), 2])
def test_solvers_away_from_one(y):
    with mpmath.workprec(160):
        ex = sg.rho_and_expansion_sp(y, 160)
        assert ex.residuals["Psi'(tau)"] < mpmath.mpf(10) ** -30
        _, op = sg.solve_outerplanar(y, 160)
        assert op.residuals["Psi'(tau)"] < mpmath.mpf(10) ** -30


def test_edge_law_invariants():
    for fam in ("sp", "outerplanar", "k23free"):
        law = sg.edge_law(fam, "connected", 128)
        assert 1 < law.kappa < 2
        assert law.lam > 0


def test_component_law_is_c0():
    nu, p = sg.component_law("sp", 128)
    assert nu == sg.rho_and_expansion_sp(1, 128).C0
    with mpmath.workprec(128):
        assert abs(p - mpmath.exp(-nu)) < mpmath.mpf(10) ** -30


def test_summary_table():
    rows = sg.summary_table(128)
    assert [r[0] for r in rows] == ["sp", "outerplanar", "k23free", "planar"]
    assert rows[-1][3] == "reference-only"
    assert abs(rows[0][1] - mpmath.mpf("9.0733")) < 1e-4


def test_safe_newton_requires_a_bracket():
    with pytest.raises(sg.SolverError):
        sg.safe_newton(lambda x: x * x + 1, lambda x: 2 * x, mpmath.mpf(-1), mpmath.mpf(1))
