"""Generating functions of the three graph families and exact counts.

Every family is described by the derivative B'(x, y) of its block series.
Rooted connected graphs satisfy F = x exp(B'(F)), connected graphs are
C = F (1 - log(F/x)) + int_0^x B'(F(s)) F'(s) ds and all graphs G = exp(C).
The composition B'(F) is never formed explicitly: each kernel is written as
an implicit system in F that the lazy engine solves coefficient by
coefficient.

The variable y marks edges.  A :class:`YRing` chooses how y is handled:
kept symbolic (``refined``), fixed to a rational (``at``), or expanded as
y = y0 + e modulo e^(k+1) (``jet``), which is what the edge moments need.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import _poly as P
from ._poly import ONE, ZERO
from .series import (
    BivariateSeries,
    Const,
    Ctx,
    Deriv,
    DivConst,
    Fix,
    Integ,
    Mul,
    Node,
    XDiv,
    XMul,
    div_,
    exp_,
    log_,
    materialize,
    sqrt_,
    x_node,
)


class FamilyKind(str, enum.Enum):
    SP = "sp"
    OUTERPLANAR = "outerplanar"
    K23FREE = "k23free"

    @classmethod
    def parse(cls, s) -> "FamilyKind":
        if isinstance(s, cls):
            return s
        key = str(s).strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "sp": cls.SP, "seriesparallel": cls.SP,
            "outerplanar": cls.OUTERPLANAR, "op": cls.OUTERPLANAR,
            "k23free": cls.K23FREE, "k23": cls.K23FREE, "k23minorfree": cls.K23FREE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown family {s!r}; expected one of sp, outerplanar, k23free") from None


class ConnectivityLevel(str, enum.Enum):
    ALL = "all"
    CONNECTED = "connected"
    BICONNECTED = "biconnected"

    @classmethod
    def parse(cls, s) -> "ConnectivityLevel":
        if isinstance(s, cls):
            return s
        key = str(s).strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "all": cls.ALL, "g": cls.ALL,
            "connected": cls.CONNECTED, "c": cls.CONNECTED,
            "biconnected": cls.BICONNECTED, "2connected": cls.BICONNECTED, "blocks": cls.BICONNECTED, "b": cls.BICONNECTED,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown level {s!r}; expected one of all, connected, biconnected") from None


FAMILIES = tuple(FamilyKind)
LEVELS = tuple(ConnectivityLevel)


class PipelineError(ArithmeticError):
    """A built-in cross-check of a generating function failed."""


@dataclass(frozen=True)
class YRing:
    """How the edge variable y is represented."""

    kind: str = "refined"
    value: Fraction = Fraction(1)
    jet_order: int = 2

    @classmethod
    def refined(cls):
        return cls("refined")

    @classmethod
    def at(cls, value=1):
        return cls("value", Fraction(value))

    @classmethod
    def jet(cls, order=2, at=1):
        return cls("jet", Fraction(at), order)

    @property
    def ydeg(self):
        return self.jet_order if self.kind == "jet" else None

    @property
    def y(self):
        if self.kind == "refined":
            return P.make((0, 1))
        if self.kind == "value":
            return P.from_fractions([self.value])
        return P.from_fractions([self.value, 1])

    def power(self, k):
        out = ONE
        for _ in range(k):
            out = P.mul(out, self.y, self.ydeg)
        return out


def _xpoly(ctx, coeffs):
    """Exact polynomial in x from ordinary coefficients (y-pairs)."""
    out = []
    fact = 1
    for n, c in enumerate(coeffs):
        if n:
            fact *= n
        out.append(P.scale(c, fact))
    return Const(ctx, out, exact=True)


def _ycoef(*terms):
    """Sum of rational multiples of y-pairs."""
    acc = ZERO
    for k, pair in terms:
        acc = P.add(acc, P.mul(P.from_fractions([k]), pair))
    return acc


class FamilyPipeline:
    """Lazily built generating functions for one family and one y-ring."""

    def __init__(self, family, ring: YRing = YRing.refined()):
        self.family = FamilyKind.parse(family)
        self.ring = ring
        self.ctx = Ctx(ring.ydeg)
        self._nodes: dict = {}

    # helpers
    def _y(self):
        return self.ring.y

    def _one_plus_y(self):
        return P.add(ONE, self._y())

    def _sp_kernel(self, f: Node):
        """B'(f) for SP blocks, with the network series evaluated at f.

        Returns (kernel, delta) where delta = D(f, y) solves
        delta = (1+y) exp(f delta^2 / (1 + f delta)) - 1.
        """
        delta = Fix(self.ctx, 0)
        fd = Mul(f, delta)
        fdd = Mul(fd, delta)
        delta.bind(self._one_plus_y() * exp_(div_(fdd, 1 + fd, ONE)) - 1)
        kernel = div_(fd * (2 - fdd), 1 + fd, ONE) / 2
        return kernel, delta

    def _dissection_kernel(self, f: Node):
        """B'(f) for outerplanar blocks, via u = A(f)/f with u = y f + y u^2/(1-u)."""
        y = self._y()
        u = Fix(self.ctx, 1)
        u.bind(y * f + y * div_(Mul(u, u), 1 - u, ONE))
        kernel = (u + y * f) / 2
        return kernel, u

    def _kernel(self, f: Node) -> Node:
        if self.family is FamilyKind.SP:
            return self._sp_kernel(f)[0]
        kernel, _ = self._dissection_kernel(f)
        if self.family is FamilyKind.K23FREE:
            kernel = kernel + P.scale(self.ring.power(6), 1, 6) * Mul(Mul(f, f), f)
        return kernel

    def _get(self, key, build):
        node = self._nodes.get(key)
        if node is None:
            node = self._nodes[key] = build()
        return node

    # series nodes
    def network(self) -> Node:
        """D(x, y), the series of networks."""
        return self._get("D", lambda: self._sp_kernel(x_node(self.ctx))[1])

    def radicand(self) -> Node:
        y = self._y()
        y2 = P.mul(y, y, self.ring.ydeg)
        return _xpoly(self.ctx, [ONE, _ycoef((-2, y), (-4, y2)), y2])

    def dissections(self) -> Node:
        """A(x, y) = x (1 + yx - sqrt(1 - 2yx - 4y^2x + y^2x^2)) / (2 + 2y)."""
        def build():
            inner = _xpoly(self.ctx, [ONE, self._y()]) - sqrt_(self.radicand())
            return XMul(DivConst(inner, P.scale(self._one_plus_y(), 2)))
        return self._get("A", build)

    def dissections_implicit(self) -> Node:
        """A(x, y) from its functional equation, independent of the square root."""
        return self._get("A_fix", lambda: XMul(self._dissection_kernel(x_node(self.ctx))[1]))

    def blocks_prime(self) -> Node:
        """B'(x, y) in closed form."""
        def build():
            ctx = self.ctx
            if self.family is FamilyKind.SP:
                d = self.network()
                xd = XMul(d)
                return div_(xd * (2 - Mul(xd, d)), 1 + xd, ONE) / 2
            y = self._y()
            lin = _ycoef((3, y), (2, P.mul(y, y, self.ring.ydeg)))
            top = _xpoly(ctx, [ONE, lin]) - sqrt_(self.radicand())
            bp = DivConst(top, P.scale(self._one_plus_y(), 4))
            if self.family is FamilyKind.K23FREE:
                bp = bp + _xpoly(ctx, [ZERO, ZERO, ZERO, P.scale(self.ring.power(6), 1, 6)])
            return bp
        return self._get("Bp", build)

    def blocks(self) -> Node:
        """B(x, y), 2-connected graphs (the single edge included)."""
        def build():
            if self.family is FamilyKind.SP:
                d = self.network()
                xd = XMul(d)
                one_xd = 1 + xd
                x = x_node(self.ctx)
                rest = Mul(xd, Mul(xd, xd) + xd + 2 - 2 * x)
                return log_(one_xd) / 2 - div_(rest, one_xd, ONE) / 4
            return Integ(self.blocks_prime())
        return self._get("B", build)

    def rooted(self) -> Node:
        """F(x, y) = x exp(B'(F, y)), vertex-rooted connected graphs."""
        def build():
            f = Fix(self.ctx, 1)
            kernel = self._kernel(f)
            self._nodes["BpF"] = kernel
            f.bind(XMul(exp_(kernel)))
            return f
        return self._get("F", build)

    def kernel_at_rooted(self) -> Node:
        self.rooted()
        return self._nodes["BpF"]

    def connected(self) -> Node:
        """C = F (1 - log(F/x)) + int B'(F) F' dx."""
        def build():
            f = self.rooted()
            bf = Integ(Mul(self.kernel_at_rooted(), Deriv(f)))
            return Mul(f, 1 - log_(XDiv(f))) + bf
        return self._get("C", build)

    def all_graphs(self) -> Node:
        return self._get("G", lambda: exp_(self.connected()))

    def level(self, level) -> Node:
        level = ConnectivityLevel.parse(level)
        if level is ConnectivityLevel.ALL:
            return self.all_graphs()
        if level is ConnectivityLevel.CONNECTED:
            return self.connected()
        return self.blocks()

    def series(self, node: Node, order: int) -> BivariateSeries:
        return materialize(node, order)


@lru_cache(maxsize=64)
def pipeline(family, ring: YRing = YRing.refined()) -> FamilyPipeline:
    """Shared pipeline per (family, ring); nodes cache their coefficients."""
    return FamilyPipeline(FamilyKind.parse(family), ring)


# -- checks ---------------------------------------------------------------------------

def edge_cap(family, n: int) -> int:
    """Largest possible number of edges of a graph on n vertices in the family."""
    if n < 2:
        return 0
    # K4 blocks have 2m - 2 edges on m vertices; every other block at most 2m - 3
    if FamilyKind.parse(family) is FamilyKind.K23FREE:
        return 2 * n - 2
    return 2 * n - 3


def _check_degree_cap(s: BivariateSeries, family, shift=0):
    if s.ydeg is not None:
        return
    for n in range(s.order + 1):
        cap = edge_cap(family, n) if shift == 0 else 2 * n + 1
        if s.egf(n).degree > cap:
            raise PipelineError(f"y-degree {s.egf(n).degree} exceeds the edge cap {cap} at n={n}")


def _check_nonnegative(s: BivariateSeries, what):
    for n in range(s.order + 1):
        vec, _ = s._c[n]
        if any(c < 0 for c in vec) and s.ydeg is None:
            raise PipelineError(f"negative coefficient in {what} at n={n}")


def _fail_unless(cond, msg):
    if not cond:
        raise PipelineError(msg)


# -- public series builders -----------------------------------------------------------

def _ring(ring):
    return YRing.refined() if ring is None else ring


def network_series(N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    """Networks D(x, y) with D(0, y) = y, to order N."""
    ring = _ring(ring)
    p = pipeline(FamilyKind.SP, ring)
    d = p.series(p.network(), N)
    if check:
        _fail_unless(d.egf(0) == BivariateSeries([ring.y], 0, ring.ydeg).egf(0), "D(0, y) != y")
        _check_degree_cap(d, FamilyKind.SP, shift=1)
        # log((1+D)/(1+y)) = xD^2/(1+xD), exponentiated to stay polynomial in y
        one_y = BivariateSeries([ring.y], N, ring.ydeg) + 1
        xd = _shift_x(d)
        rhs = (xd * d / (1 + xd)).exp()
        _fail_unless(1 + d == one_y * rhs, "network equation residual is nonzero")
    return d


def _shift_x(a: BivariateSeries) -> BivariateSeries:
    return BivariateSeries.x(a.order, a.ydeg) * a


def blocks_sp(N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    """2-connected SP graphs, B(x, y), from the closed form in terms of D."""
    ring = _ring(ring)
    p = pipeline(FamilyKind.SP, ring)
    b = p.series(p.blocks(), N)
    if check and N >= 2:
        if ring.kind == "refined":
            _fail_unless(b.count(2, 1) == 1, "b_{2,1} != 1")
            _check_degree_cap(b, FamilyKind.SP)
        if ring.kind != "value":
            # (1+y) dB/dy = x^2 (1+D)/2
            d = p.series(p.network(), N)
            lhs = b.derive_y()
            ydeg = lhs.ydeg
            one_y = BivariateSeries([P.add(ONE, ring.y)], N, ydeg)
            dd = d if ydeg == d.ydeg else BivariateSeries._raw([P.truncate(c, ydeg) for c in d._c], ydeg)
            x2 = BivariateSeries([0, 0, Fraction(1, 2)], N, ydeg)
            _fail_unless(one_y * lhs == x2 * (1 + dd), "dB/dy cross-check failed")
    return b


def dissections(N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    """Dissections of convex polygons, A(x, y) with x marking vertices (ordinary GF)."""
    ring = _ring(ring)
    p = pipeline(FamilyKind.OUTERPLANAR, ring)
    a = p.series(p.dissections(), N)
    if check:
        x = BivariateSeries.x(N, ring.ydeg)
        y = BivariateSeries([ring.y], N, ring.ydeg)
        resid = a * (x - a) - y * x * x * (x - a) - y * a * a
        _fail_unless(resid == BivariateSeries.zero(N, ring.ydeg), "dissection equation residual is nonzero")
    return a


def _dissection_bijection(b: BivariateSeries, a: BivariateSeries, ring: YRing):
    import math
    for n in range(3, min(a.order, b.order) + 1):
        expect = P.scale(P.scale(a._c[n], 1, math.factorial(n)), math.factorial(n - 1), 2)
        if b._c[n] != P.truncate(expect, b.ydeg):
            raise PipelineError(f"b_n != a_n (n-1)!/2 at n={n}")
    if b.order >= 2 and b._c[2] != P.truncate(P.scale(ring.y, 2, 2), b.ydeg):
        raise PipelineError("b_{2,1} != 1")


def blocks_outerplanar(N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    """2-connected outerplanar graphs, B = integral of the closed-form B'."""
    ring = _ring(ring)
    p = pipeline(FamilyKind.OUTERPLANAR, ring)
    b = p.series(p.blocks(), N)
    if check:
        _dissection_bijection(b, dissections(N, ring, check=False), ring)
        if ring.kind == "refined":
            _check_degree_cap(b, FamilyKind.OUTERPLANAR)
    return b


def blocks_k23(N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    """2-connected K_{2,3}-minor-free graphs: outerplanar blocks plus K_4."""
    ring = _ring(ring)
    p = pipeline(FamilyKind.K23FREE, ring)
    b = p.series(p.blocks(), N)
    if check:
        ob = blocks_outerplanar(N, ring, check=False)
        diff = b - ob
        k4 = [ZERO] * (N + 1)
        if N >= 4:
            k4[4] = P.truncate(ring.power(6), ring.ydeg)
        _fail_unless(diff == BivariateSeries.from_egf(k4, ring.ydeg), "K23 blocks differ from outerplanar by more than K4")
    return b


def blocks(family, N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    family = FamilyKind.parse(family)
    return {FamilyKind.SP: blocks_sp, FamilyKind.OUTERPLANAR: blocks_outerplanar, FamilyKind.K23FREE: blocks_k23}[family](N, ring, check)


def rooted_connected(family, N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    """F(x, y) = x exp(B'(F, y))."""
    ring = _ring(ring)
    p = pipeline(family, ring)
    f = p.series(p.rooted(), N)
    if check and N >= 1:
        _fail_unless(f.egf(1) == BivariateSeries([0, 1], 1, ring.ydeg).egf(1), "[x]F != 1")
    return f


def connected(family, N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    """C(x, y), connected graphs; checked against x C' = F."""
    ring = _ring(ring)
    p = pipeline(family, ring)
    c = p.series(p.connected(), N)
    if check:
        f = p.series(p.rooted(), N)
        for n in range(1, N + 1):
            if P.scale(c._c[n], n) != f._c[n]:
                raise PipelineError(f"x C' != F at n={n}")
        if ring.kind == "refined":
            _check_degree_cap(c, family)
    return c


def all_graphs(family, N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    """G = exp(C)."""
    ring = _ring(ring)
    p = pipeline(family, ring)
    g = p.series(p.all_graphs(), N)
    if check and ring.kind == "refined":
        _check_degree_cap(g, family)
        _check_nonnegative(g, "G")
    return g


def level_series(family, level, N: int, ring: YRing | None = None, check: bool = True) -> BivariateSeries:
    level = ConnectivityLevel.parse(level)
    if level is ConnectivityLevel.ALL:
        return all_graphs(family, N, ring, check)
    if level is ConnectivityLevel.CONNECTED:
        return connected(family, N, ring, check)
    return blocks(family, N, ring, check)


# -- count tables ----------------------------------------------------------------------

@dataclass(frozen=True)
class CountTable:
    """Exact labelled counts; keys are (n, q) with q None for marginal rows."""

    family: FamilyKind
    level: ConnectivityLevel
    max_n: int
    refined: bool
    entries: dict = field(default_factory=dict)

    def marginal(self, n: int) -> int:
        if self.refined:
            return sum(c for (m, _), c in self.entries.items() if m == n)
        return self.entries.get((n, None), 0)

    def row(self, n: int) -> dict:
        return {q: c for (m, q), c in self.entries.items() if m == n}

    def rows(self):
        """(family, level, n, q, count) tuples in canonical order."""
        for (n, q) in sorted(self.entries, key=lambda k: (k[0], -1 if k[1] is None else k[1])):
            yield (self.family.value, self.level.value, n, q, self.entries[(n, q)])

    def to_csv(self, header: list[str] | None = None) -> str:
        buf = io.StringIO()
        for line in header or []:
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "level", "n", "q", "count"])
        for fam, lev, n, q, c in self.rows():
            w.writerow([fam, lev, n, "" if q is None else q, str(c)])
        return buf.getvalue()

    def to_json(self, meta: dict | None = None) -> str:
        doc = {
            "meta": meta or {},
            "family": self.family.value,
            "level": self.level.value,
            "max_n": self.max_n,
            "refined": self.refined,
            "rows": [{"n": n, "q": q, "count": str(c)} for _, _, n, q, c in self.rows()],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "CountTable":
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        rd = csv.DictReader(lines)
        entries = {}
        fam = lev = None
        refined = False
        for r in rd:
            fam, lev = r["family"], r["level"]
            q = None if r["q"] == "" else int(r["q"])
            refined = refined or q is not None
            entries[(int(r["n"]), q)] = int(r["count"])
        if fam is None:
            raise ValueError("empty count table")
        return cls(FamilyKind.parse(fam), ConnectivityLevel.parse(lev), max(n for n, _ in entries), refined, entries)

    @classmethod
    def from_json(cls, text: str) -> "CountTable":
        doc = json.loads(text)
        entries = {(r["n"], r["q"]): int(r["count"]) for r in doc["rows"]}
        return cls(FamilyKind.parse(doc["family"]), ConnectivityLevel.parse(doc["level"]), doc["max_n"], doc["refined"], entries)


def table_from_series(s: BivariateSeries, family, level, refined: bool, start: int = 1) -> CountTable:
    entries = {}
    for n in range(start, s.order + 1):
        if refined:
            poly = s.egf(n)
            for q, v in poly.coefficients.items():
                if v.denominator != 1 or v < 0:
                    raise PipelineError(f"bad count {v} at n={n}, q={q}")
                entries[(n, q)] = v.numerator
        else:
            v = s.count(n)
            if v < 0:
                raise PipelineError(f"negative count at n={n}")
            entries[(n, None)] = v
    return CountTable(FamilyKind.parse(family), ConnectivityLevel.parse(level), s.order, refined, entries)


def counts(family, level, N: int, refined: bool = False) -> CountTable:
    """Labelled counts n! [x^n y^q] (refined) or n! [x^n] at y = 1, for 1 <= n <= N."""
    family = FamilyKind.parse(family)
    level = ConnectivityLevel.parse(level)
    if N < 1:
        raise ValueError("N must be at least 1")
    ring = YRing.refined() if refined else YRing.at(1)
    s = level_series(family, level, N, ring)
    return table_from_series(s, family, level, refined)


def component_counts(family, N: int, kmax: int | None = None) -> dict:
    """Number of graphs on n vertices with exactly k components, {(n, k): count}.

    Uses n! [x^n] C^k / k! at y = 1; every k up to n is included unless kmax
    caps it.
    """
    c = connected(family, N, YRing.at(1))
    kmax = N if kmax is None else min(kmax, N)
    out = {}
    power = BivariateSeries.one(N)
    fact = 1
    for k in range(1, kmax + 1):
        power = power * c
        fact *= k
        for n in range(k, N + 1):
            v = power.count(n)
            if v % fact:
                raise PipelineError("non-integral component count")
            out[(n, k)] = v // fact
    return out
