"""Tables of constants, computed at two precisions with their agreed digits."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import mpmath

from . import singular
from .families import ConnectivityLevel as Lv, FamilyKind as Fk

REPORT_DIGITS = 50
# the two published values for the SP edge-count variance constant
VARIANCE_CANDIDATES = ("0.21125", "0.55347")


@dataclass(frozen=True)
class ConstantEntry:
    family: str
    level: str
    name: str
    value: mpmath.mpf
    method: str
    residual: mpmath.mpf


def _worst(*dicts):
    vals = [v for d in dicts for v in d.values()]
    return max(vals) if vals else mpmath.mpf(0)


def _check_consistency(where: str, prec: int, *dicts):
    tol = mpmath.mpf(2) ** (-(prec // 2))
    for d in dicts:
        for k, v in d.items():
            if not v < tol:
                raise singular.SolverError(f"{where}: {k} off by {mpmath.nstr(v, 5)} (tolerance {mpmath.nstr(tol, 3)})")


def _check_law(law: singular.LawReport, prec: int):
    _check_consistency(f"{law.family.value}/{law.level.value} edge law", prec, law.routes)
    if not law.fd_agreement < mpmath.mpf(10) ** -8:
        raise singular.SolverError(f"{law.family.value}/{law.level.value}: analytic and finite-difference derivatives disagree")


def constant_entries(prec: int = singular.DEFAULT_PREC) -> list:
    """Every reported constant at one precision, after all internal cross-checks."""
    out = []

    def add(fam, lev, name, value, method, residual):
        out.append(ConstantEntry(fam.value, lev.value, name, +value, method, residual))

    with mpmath.workprec(prec):
        # SP
        fam = Fk.SP
        R, bx = singular.radius_2conn(1, prec)
        _check_consistency("SP blocks", prec, bx.cross_checks, bx.residuals)
        res = _worst(bx.residuals)
        t = singular.solve_t(1, prec)
        add(fam, Lv.BICONNECTED, "t", t, "safeguarded Newton on Y(t) = y", res)
        add(fam, Lv.BICONNECTED, "R", R, "R = q(t)", res)
        for name in ("D0", "D1", "D2", "B0", "B2", "B3"):
            add(fam, Lv.BICONNECTED, name, getattr(bx, name), "closed form in t, checked by a second route", _worst(bx.cross_checks))
        add(fam, Lv.BICONNECTED, "b", bx.b, "3 B3 / (4 sqrt(pi))", res)
        law = singular.edge_law(fam, Lv.BICONNECTED, prec)
        _check_law(law, prec)
        add(fam, Lv.BICONNECTED, "R_prime", law.d1, "Taylor jets of q(t(y))", law.fd_agreement)
        add(fam, Lv.BICONNECTED, "R_second", law.d2, "Taylor jets of q(t(y))", law.fd_agreement)
        add(fam, Lv.BICONNECTED, "kappa0", law.kappa, "-R'/R", law.fd_agreement)
        add(fam, Lv.BICONNECTED, "lambda0", law.lam, "-R''/R - R'/R + (R'/R)^2", law.fd_agreement)

        ex = singular.rho_and_expansion_sp(1, prec)
        _check_consistency("SP connected", prec, ex.cross_checks, ex.residuals)
        res = _worst(ex.residuals)
        sol = singular.saddle_sp(1, prec)
        add(fam, Lv.CONNECTED, "tau", sol.tau, "2x2 Newton on T = 0 and the network equation", res)
        add(fam, Lv.CONNECTED, "D_at_tau", sol.D_at_tau, "2x2 Newton on T = 0 and the network equation", res)
        add(fam, Lv.CONNECTED, "rho", sol.rho, "Psi(tau)", res)
        for name in ("F1", "S", "C0", "C2", "C3"):
            add(fam, Lv.CONNECTED, name, getattr(ex, name), "expansion at rho", res)
        add(fam, Lv.CONNECTED, "c", ex.c, "3 C3 / (4 sqrt(pi))", res)
        law = singular.edge_law(fam, Lv.CONNECTED, prec)
        _check_law(law, prec)
        add(fam, Lv.CONNECTED, "tau_prime", law.dtau, "implicit differentiation, checked by jets", law.fd_agreement)
        add(fam, Lv.CONNECTED, "rho_prime", law.d1, "Taylor jets of Psi(tau(y), D(tau(y), y))", law.fd_agreement)
        add(fam, Lv.CONNECTED, "rho_second", law.d2, "Taylor jets of Psi(tau(y), D(tau(y), y))", law.fd_agreement)
        add(fam, Lv.CONNECTED, "kappa", law.kappa, "-rho'/rho", law.fd_agreement)
        add(fam, Lv.CONNECTED, "lambda", law.lam, "-rho''/rho - rho'/rho + (rho'/rho)^2", law.fd_agreement)
        for name in ("G0", "G2", "G3"):
            add(fam, Lv.ALL, name, getattr(ex, name), "G = exp(C) at rho", res)
        add(fam, Lv.ALL, "g", ex.g, "exp(C0) c", res)
        add(fam, Lv.ALL, "gamma", ex.gamma, "1 / rho", res)
        add(fam, Lv.ALL, "nu", ex.C0, "C0 = C(rho)", res)
        add(fam, Lv.ALL, "exp_minus_nu", mpmath.exp(-ex.C0), "exp(-C0)", res)

        # outerplanar and K23-minor-free
        for fam, solver, big, param in ((Fk.OUTERPLANAR, singular.solve_outerplanar, "h", "xi"),
                                        (Fk.K23FREE, singular.solve_k23, "s", "xi")):
            sol, ex = solver(1, prec)
            _check_consistency(f"{fam.value}", prec, ex.cross_checks, ex.residuals)
            res = _worst(ex.residuals)
            add(fam, Lv.BICONNECTED, "R", ex.radius[Lv.BICONNECTED], "smallest root of the radicand", mpmath.mpf(0))
            add(fam, Lv.BICONNECTED, "B3", ex.B3, "square-root factor of the radicand", mpmath.mpf(0))
            add(fam, Lv.BICONNECTED, "b", ex.b, "3 B3 / (4 sqrt(pi))", mpmath.mpf(0))
            add(fam, Lv.CONNECTED, "tau", sol.tau, "safeguarded Newton on 1 - u B''(u) = 0", res)
            add(fam, Lv.CONNECTED, "rho", sol.rho, "Psi(tau)", res)
            for name in ("F1", "C0", "C3"):
                add(fam, Lv.CONNECTED, name, getattr(ex, name), "expansion at rho", res)
            add(fam, Lv.CONNECTED, "c", ex.c, "3 C3 / (4 sqrt(pi))", res)
            law = singular.edge_law(fam, Lv.CONNECTED, prec)
            _check_law(law, prec)
            add(fam, Lv.CONNECTED, "tau_prime", law.dtau, "Taylor jets", law.fd_agreement)
            add(fam, Lv.CONNECTED, "rho_prime", law.d1, "Taylor jets", law.fd_agreement)
            add(fam, Lv.CONNECTED, "rho_second", law.d2, "Taylor jets", law.fd_agreement)
            add(fam, Lv.CONNECTED, "zeta", law.kappa, "-rho'/rho", law.fd_agreement)
            add(fam, Lv.CONNECTED, "eta", law.lam, "-rho''/rho - rho'/rho + (rho'/rho)^2", law.fd_agreement)
            add(fam, Lv.ALL, big, ex.g, "exp(C0) c", res)
            add(fam, Lv.ALL, "gamma", ex.gamma, "1 / rho", res)
            add(fam, Lv.ALL, param, ex.C0, "C0 = C(rho)", res)
            add(fam, Lv.ALL, "exp_minus_" + param, mpmath.exp(-ex.C0), "exp(-C0)", res)
    return out


def agreed_digits(a, b, limit: int = 70) -> int:
    """Largest d <= limit such that a and b round to the same d significant digits."""
    best = 0
    for d in range(1, limit + 1):
        if mpmath.nstr(a, d, strip_zeros=False) != mpmath.nstr(b, d, strip_zeros=False):
            break
        best = d
    return best


def constants_report(prec: int = singular.DEFAULT_PREC) -> list:
    """Rows {family, level, name, value_decimal, agreed_digits, method, residual}.

    Each constant is computed at prec and 2*prec bits; only digits on which
    both runs agree are printed (at most 50).
    """
    lo = constant_entries(prec)
    hi = constant_entries(2 * prec)
    rows = []
    with mpmath.workprec(2 * prec):
        for a, b in zip(lo, hi):
            assert (a.family, a.level, a.name) == (b.family, b.level, b.name)
            d = agreed_digits(a.value, b.value)
            shown = min(d, REPORT_DIGITS)
            rows.append({
                "family": a.family, "level": a.level, "name": a.name,
                "value_decimal": mpmath.nstr(a.value, max(shown, 1), strip_zeros=False, min_fixed=-5, max_fixed=5),
                "agreed_digits": d, "method": a.method,
                "residual": mpmath.nstr(a.residual, 3),
            })
    return rows


def lookup(rows: list, family: str, name: str) -> str:
    for r in rows:
        if r["family"] == family and r["name"] == name:
            return r["value_decimal"]
    raise KeyError((family, name))


def variance_match(value, candidates=VARIANCE_CANDIDATES, rtol: float = 1e-3):
    """The candidates within relative rtol of value."""
    v = mpmath.mpf(value)
    return [c for c in candidates if abs(v - mpmath.mpf(c)) <= rtol * abs(mpmath.mpf(c))]


def summary_rows(prec: int = singular.DEFAULT_PREC) -> list:
    rows = []
    for fam, gamma, kappa, status in singular.summary_table(prec):
        rows.append({"family": fam, "growth_constant": mpmath.nstr(gamma, 10),
                     "edges_per_vertex": mpmath.nstr(kappa, 10), "status": status})
    return rows


def rows_to_csv(rows: list, header_lines=()) -> str:
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def rows_to_json(rows: list, meta: dict | None = None, extra: dict | None = None) -> str:
    doc = {"meta": meta or {}, "constants": rows}
    doc.update(extra or {})
    return json.dumps(doc, indent=2) + "\n"
