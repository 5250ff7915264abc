"""Cross-checks between the exact series, the brute-force oracle and the asymptotics.

Exact comparisons (oracle tables, combinatorial identities) are equalities of
integers.  Convergence checks compare finite-n quantities with limiting
constants and only ask for a shrinking error plus a loose window.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import singular
from .families import (
    FAMILIES, LEVELS, ConnectivityLevel, CountTable, FamilyKind, YRing,
    blocks_outerplanar, component_counts, counts, dissections, level_series,
    network_series,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "data": {k: _jsonable(v) for k, v in self.data.items()}}


@dataclass(frozen=True)
class MomentRow:
    """Exact mean and variance of the edge count over family members on n vertices."""

    n: int
    mean: Fraction
    variance: Fraction

    @property
    def mean_per_n(self) -> Fraction:
        return self.mean / self.n

    @property
    def variance_per_n(self) -> Fraction:
        return self.variance / self.n


@dataclass
class ConvergenceReport:
    family: FamilyKind
    level: ConnectivityLevel
    constants: dict = field(default_factory=dict)
    ratios: list = field(default_factory=list)       # (n, ratio)
    moments: list = field(default_factory=list)      # MomentRow
    components: list = field(default_factory=list)  # (n, total variation)


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _jsonable(v):
    if isinstance(v, (mpmath.mpf, Fraction)):
        return str(mpmath.nstr(mpmath.mpf(v), 20)) if isinstance(v, mpmath.mpf) else f"{v.numerator}/{v.denominator}"
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (FamilyKind, ConnectivityLevel)):
        return v.value
    return v


# -- exact checks against the oracle -------------------------------------------------------------

def diff_tables(pipeline_table: CountTable, oracle_table: CountTable) -> list:
    """Every (n, q) where the tables differ, as (n, q, pipeline, oracle)."""
    keys = set(pipeline_table.entries) | set(oracle_table.entries)
    out = []
    for key in sorted(keys, key=lambda k: (k[0], -1 if k[1] is None else k[1])):
        a = pipeline_table.entries.get(key, 0)
        b = oracle_table.entries.get(key, 0)
        if a != b:
            out.append((key[0], key[1], a, b))
    return out


def corrupt(table: CountTable, key=None, delta: int = 1) -> CountTable:
    """Copy of a table with one entry shifted (for negative controls)."""
    entries = dict(table.entries)
    key = key or max(entries)
    entries[key] = entries.get(key, 0) + delta
    return CountTable(table.family, table.level, table.max_n, table.refined, entries)


def compare_tables(pipeline_table: CountTable, oracle_table: CountTable, name: str) -> CheckResult:
    diff = diff_tables(pipeline_table, oracle_table)
    detail = "all entries equal" if not diff else "; ".join(
        f"n={n} q={q}: pipeline {a} oracle {b}" for n, q, a, b in diff[:10])
    return CheckResult(name, not diff, detail, {"mismatches": len(diff)})


def verify_oracle(family, level, n_max: int = 7, oracle=None) -> CheckResult:
    """Refined pipeline counts equal brute-force counts for every n <= n_max and q."""
    from .oracle import classify_and_count

    family = FamilyKind.parse(family)
    level = ConnectivityLevel.parse(level)
    if oracle is None:
        oracle = classify_and_count(n_max, families=[family])
    expected = oracle[family].count_table(level, refined=True)
    got = counts(family, level, n_max, refined=True)
    return compare_tables(got, expected, f"oracle {family.value}/{level.value} n<={n_max}")


def verify_oracle_all(n_max: int = 7, threads: int = 1) -> list:
    from .oracle import classify_and_count

    oracle = classify_and_count(n_max, threads=threads)
    results = [verify_oracle(f, lev, n_max, oracle) for f in FAMILIES for lev in LEVELS]
    # negative control: a corrupted table must be caught and located
    base = counts(FamilyKind.SP, ConnectivityLevel.ALL, n_max, refined=True)
    bad = compare_tables(corrupt(base), oracle[FamilyKind.SP].count_table(ConnectivityLevel.ALL), "negative control")
    results.append(CheckResult("oracle negative control", not bad.passed and bad.data["mismatches"] == 1, bad.detail))
    return results


# -- identities ---------------------------------------------------------------------------

def two_tree_count(n: int) -> int:
    """Labelled 2-trees on n >= 2 vertices."""
    return math.comb(n, 2) * (2 * n - 3) ** (n - 4) if n >= 4 else {2: 1, 3: 1}[n]


def verify_identities(n_max: int = 30, dissection_max: int = 60) -> list:
    """Edge-maximal SP blocks are 2-trees; outerplanar blocks match polygon dissections."""
    results = []
    sp = counts(FamilyKind.SP, ConnectivityLevel.BICONNECTED, n_max, refined=True)
    bad = [n for n in range(4, n_max + 1) if sp.entries.get((n, 2 * n - 3), 0) != two_tree_count(n)]
    results.append(CheckResult(f"2-tree identity 4<=n<={n_max}", not bad,
                               "exact" if not bad else f"fails at n={bad}", {"checked": n_max - 3}))

    ring = YRing.refined()
    b = blocks_outerplanar(dissection_max, ring, check=False)
    a = dissections(dissection_max, ring, check=True)
    bad = []
    for n in range(3, dissection_max + 1):
        half = Fraction(math.factorial(n - 1), 2)
        # a is an ordinary series in x, b an exponential one
        if any(b.count(n, q) != a[n][q] * half for q in range(2 * n)):
            bad.append(n)
    results.append(CheckResult(f"dissection bijection 3<=n<={dissection_max}", not bad,
                               "exact" if not bad else f"fails at n={bad[:5]}"))

    little = [int(a[n](1)) for n in range(3, 8)]
    results.append(CheckResult("little Schroeder numbers n=3..7", little == [1, 3, 11, 45, 197], str(little)))
    ob = counts(FamilyKind.OUTERPLANAR, ConnectivityLevel.BICONNECTED, 5)
    results.append(CheckResult("outerplanar blocks n=5 total 132", ob.marginal(5) == 132, str(ob.marginal(5))))
    return results


def support_check(N: int = 40) -> CheckResult:
    """2-connected SP graphs on n >= 3 vertices have between n and 2n-3 edges."""
    t = counts(FamilyKind.SP, ConnectivityLevel.BICONNECTED, N, refined=True)
    bad = [(n, q) for (n, q), c in t.entries.items()
           if c and n >= 3 and not n <= q <= 2 * n - 3]
    return CheckResult(f"SP block support n<=q<=2n-3, n<={N}", not bad, str(bad[:5]) if bad else "holds")


# -- convergence ---------------------------------------------------------------------------

def asymptotic_handshake(family, level, n_list=(100, 400), prec: int = 256,
                         expansion=None) -> ConvergenceReport:
    """Ratios (count_n/n!) n^(5/2) r^n / amplitude for the computed amplitude and radius."""
    family = FamilyKind.parse(family)
    level = ConnectivityLevel.parse(level)
    ex = expansion or singular.expansion(family, 1, prec)
    r, amp = ex.radius[level], ex.amplitude[level]
    ser = level_series(family, level, max(n_list), YRing.at(1), check=False)
    rep = ConvergenceReport(family, level, {"radius": r, "amplitude": amp})
    with mpmath.workprec(prec):
        for n in n_list:
            c = mpmath.mpf(ser.count(n)) / mpmath.factorial(n)
            rep.ratios.append((n, c * mpmath.mpf(n) ** 2.5 * r ** n / amp))
    return rep


def handshake_check(rep: ConvergenceReport) -> CheckResult:
    (n0, r0), (n1, r1) = rep.ratios[0], rep.ratios[-1]
    ok = 0.9 < r1 < 1.1 and abs(r1 - 1) < abs(r0 - 1)
    return CheckResult(f"handshake {rep.family.value}/{rep.level.value}", bool(ok),
                       f"ratio n={n0}: {mpmath.nstr(r0, 8)}, n={n1}: {mpmath.nstr(r1, 8)}",
                       {"ratios": dict(rep.ratios)})


def moments_from_jet_series(family, level, n_list) -> list:
    """Exact edge moments from the series in y = 1 + e (e^3 = 0)."""
    ser = level_series(family, level, max(n_list), YRing.jet(2, 1), check=False)
    rows = []
    for n in n_list:
        c0, c1, c2 = (Fraction(ser.count(n, k)) for k in range(3))
        mean = c1 / c0
        rows.append(MomentRow(n, mean, 2 * c2 / c0 + mean - mean * mean))
    return rows


def moments_from_table(table: CountTable, n: int) -> MomentRow:
    row = table.row(n)
    tot = sum(row.values())
    mean = Fraction(sum(q * c for q, c in row.items()), tot)
    second = Fraction(sum(q * q * c for q, c in row.items()), tot)
    return MomentRow(n, mean, second - mean * mean)


def edge_moments(family, level, n_list=(40, 120), prec: int = 256, law=None) -> ConvergenceReport:
    family = FamilyKind.parse(family)
    level = ConnectivityLevel.parse(level)
    law = law or singular.edge_law(family, level, prec)
    rep = ConvergenceReport(family, level, {"kappa": law.kappa, "lambda": law.lam})
    rep.moments = moments_from_jet_series(family, level, n_list)
    return rep


def moment_check(rep: ConvergenceReport) -> CheckResult:
    k, lam = rep.constants["kappa"], rep.constants["lambda"]
    first, last = rep.moments[0], rep.moments[-1]
    em = [abs(_mp(r.mean_per_n) - k) for r in (first, last)]
    ev = [abs(_mp(r.variance_per_n) - lam) for r in (first, last)]
    ok = em[1] < em[0] and ev[1] < ev[0] and all(r.variance >= 0 for r in rep.moments)
    return CheckResult(
        f"edge moments {rep.family.value}/{rep.level.value}", bool(ok),
        f"|mu/n-kappa| {mpmath.nstr(em[0], 4)} -> {mpmath.nstr(em[1], 4)}, "
        f"|var/n-lambda| {mpmath.nstr(ev[0], 4)} -> {mpmath.nstr(ev[1], 4)}",
        {"rows": [(r.n, float(r.mean_per_n), float(r.variance_per_n)) for r in rep.moments]})


@dataclass
class ComponentRow:
    n: int
    probabilities: dict       # k -> Fraction
    tail: Fraction            # exact mass of k beyond the computed range
    tv: mpmath.mpf
    parameter: mpmath.mpf

    @property
    def p1(self) -> Fraction:
        return self.probabilities.get(1, Fraction(0))


def component_cutoff(n: int) -> int:
    return math.ceil(math.log(n)) + 10


def component_distribution(family, n_list=(50, 300), prec: int = 256, full_up_to: int = 50) -> list:
    """Exact P_n(k) for k <= ceil(log n)+10 and the total-variation distance to 1 + Poisson(C0).

    For n <= full_up_to every k is included, so the probabilities sum to 1
    exactly; otherwise the exact leftover mass is kept in ``tail``.
    """
    family = FamilyKind.parse(family)
    nmax = max(n_list)
    kmax = max(component_cutoff(n) if n > full_up_to else n for n in n_list)
    comp = component_counts(family, nmax, kmax)
    g = counts(family, ConnectivityLevel.ALL, nmax)
    param, _ = singular.component_law(family, prec)
    rows = []
    with mpmath.workprec(prec):
        for n in n_list:
            K = n if n <= full_up_to else component_cutoff(n)
            total = g.marginal(n)
            probs = {k: Fraction(comp.get((n, k), 0), total) for k in range(1, K + 1)}
            tail = 1 - sum(probs.values())
            pois = {k: mpmath.exp(-param) * param ** (k - 1) / mpmath.factorial(k - 1) for k in range(1, K + 1)}
            pois_tail = 1 - mpmath.fsum(pois.values())
            tv = (mpmath.fsum(abs(_mp(probs[k]) - pois[k]) for k in probs) + _mp(tail) + pois_tail) / 2
            rows.append(ComponentRow(n, probs, tail, tv, param))
    return rows


def component_check(family, rows: list, limit_reference=None) -> list:
    family = FamilyKind.parse(family)
    first, last = rows[0], rows[-1]
    out = []
    full = [r for r in rows if r.tail == 0]
    out.append(CheckResult(f"components {family.value}: exact sum is 1",
                           bool(full) and all(r.tail == 0 for r in full) and all(r.tail < Fraction(1, 10 ** 12) for r in rows),
                           ", ".join(f"n={r.n} tail={float(r.tail):.2e}" for r in rows)))
    out.append(CheckResult(f"components {family.value}: TV decreases", bool(last.tv < first.tv),
                           f"TV n={first.n}: {mpmath.nstr(first.tv, 5)}, n={last.n}: {mpmath.nstr(last.tv, 5)}"))
    lim = mpmath.exp(-first.parameter)
    e = [abs(_mp(r.p1) - lim) for r in (first, last)]
    out.append(CheckResult(f"components {family.value}: P_n(1) -> exp(-C0)", bool(e[1] < e[0]),
                           f"limit {mpmath.nstr(lim, 8)}; P_{first.n}(1)={float(first.p1):.8f}, P_{last.n}(1)={float(last.p1):.8f}"))
    if limit_reference is not None:
        lp = mpmath.mpf(limit_reference)
        e = [abs(_mp(r.p1) - lp) for r in (first, last)]
        out.append(CheckResult(f"components {family.value}: P_n(1) -> {limit_reference}", bool(e[1] < e[0]),
                               f"error {mpmath.nstr(e[0], 4)} -> {mpmath.nstr(e[1], 4)}"))
    return out


def network_series_trend(prec: int = 256, orders=(50, 100, 200)) -> CheckResult:
    """Truncations of D(x, 1) evaluated at tau approach the scalar D(tau, 1).

    tau sits just inside the radius of D, so the convergence is slow; the
    check asks for a shrinking gap.
    """
    with mpmath.workprec(prec):
        tau, d = singular.solve_tau_sp(1, prec)
        ser = network_series(max(orders), YRing.at(1), check=False)
        coeffs = [mpmath.mpf(ser[n](0).numerator) / ser[n](0).denominator for n in range(max(orders) + 1)]
        gaps = [abs(mpmath.polyval(coeffs[:N + 1][::-1], tau) - d) for N in orders]
    ok = all(a > b for a, b in zip(gaps, gaps[1:]))
    return CheckResult("network series at tau converges", ok,
                       ", ".join(f"N={N}: {mpmath.nstr(g, 4)}" for N, g in zip(orders, gaps)))


# -- suites and reports -----------------------------------------------------------------------

SUITES = ("oracle", "identities", "convergence", "moments", "components", "all")
REFERENCE_CONNECTIVITY = {FamilyKind.SP: "0.88904", FamilyKind.OUTERPLANAR: "0.86208"}


def run_suite(suite: str, families=FAMILIES, max_n: int = 7, upto: int = 30, prec: int = 256,
              threads: int = 1) -> list:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    families = [FamilyKind.parse(f) for f in families]
    run = (lambda s: suite in (s, "all"))
    results = []
    if run("oracle"):
        if set(families) == set(FAMILIES):
            results += verify_oracle_all(max_n, threads)
        else:
            from .oracle import classify_and_count
            oracle = classify_and_count(max_n, families, threads=threads)
            results += [verify_oracle(f, lev, max_n, oracle) for f in families for lev in LEVELS]
    if run("identities"):
        results += verify_identities(upto, max(60, upto))
        results.append(support_check(min(upto, 40)))
    if run("convergence"):
        for f in families:
            ex = singular.expansion(f, 1, prec)
            for lev in LEVELS:
                results.append(handshake_check(asymptotic_handshake(f, lev, (100, 400), prec, ex)))
        if FamilyKind.SP in families:
            results.append(network_series_trend(prec))
    if run("moments"):
        for f in families:
            for lev in LEVELS:
                results.append(moment_check(edge_moments(f, lev, (40, 120), prec)))
    if run("components"):
        for f in families:
            results += component_check(f, component_distribution(f, (50, 300), prec), REFERENCE_CONNECTIVITY.get(f))
    return results


def render_markdown(results: list, title: str = "Verification report") -> str:
    lines = [f"# {title}", "", "| check | result | detail |", "|---|---|---|"]
    for r in results:
        lines.append(f"| {r.name} | {'PASS' if r.passed else 'FAIL'} | {r.detail.replace('|', '/')} |")
    passed = sum(r.passed for r in results)
    lines += ["", f"{passed}/{len(results)} checks passed.", ""]
    return "\n".join(lines)


def render_json(results: list, meta: dict | None = None) -> str:
    return json.dumps({"meta": meta or {}, "results": [r.as_dict() for r in results]}, indent=2, sort_keys=True) + "\n"
