"""Exact truncated power series in x with polynomial coefficients in y.

Two layers live here.

* A lazy engine (:class:`Node` and friends).  Every node produces its
  x-coefficients on demand, one index at a time, and caches them.  Implicit
  equations are expressed with :class:`Fix` placeholders, which lets
  ``exp``, ``log``, ``sqrt``, division and whole graph-family systems be
  solved online with a single convolution per coefficient.
* An eager, immutable :class:`BivariateSeries` with the usual ring and
  calculus operations.  Each eager operation wraps its inputs in constant
  nodes and materialises the result.

Internally coefficients are kept in exponential normalisation, i.e. index n
stores ``n! [x^n]``.  For labelled structures these are integers, so the
common case never touches a denominator.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable

from . import _poly as P
from ._poly import ONE, ZERO, Z

INF = float("inf")


class DivergenceError(ArithmeticError):
    """Raised when an iteration or recursion fails to make progress."""


class TruncationError(ValueError):
    """Raised when a coefficient beyond the known truncation order is requested."""


# -- binomial rows -------------------------------------------------------------

_ROWS: list = [[Z(1)]]


def binom_row(n: int):
    while len(_ROWS) <= n:
        prev = _ROWS[-1]
        _ROWS.append([Z(1)] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [Z(1)])
    return _ROWS[n]


# -- y-polynomials --------------------------------------------------------------

class YPolynomial:
    """Immutable polynomial in y with rational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coefficients=None):
        if coefficients is None:
            self._c = ZERO
        elif isinstance(coefficients, YPolynomial):
            self._c = coefficients._c
        elif isinstance(coefficients, dict):
            top = max(coefficients, default=-1)
            dense = [0] * (top + 1)
            for k, v in coefficients.items():
                if k < 0:
                    raise ValueError("negative y-exponent")
                dense[k] = v
            self._c = P.from_fractions(dense)
        elif isinstance(coefficients, (int, Rational)):
            self._c = P.from_fractions([coefficients])
        else:
            self._c = P.from_fractions(list(coefficients))

    @classmethod
    def _raw(cls, pair) -> "YPolynomial":
        obj = cls.__new__(cls)
        obj._c = pair
        return obj

    @property
    def coefficients(self) -> dict:
        """Nonzero coefficients as ``{exponent: Fraction}``."""
        vec, den = self._c
        return {i: Fraction(int(v), int(den)) for i, v in enumerate(vec) if v}

    @property
    def degree(self) -> int:
        return len(self._c[0]) - 1

    def __getitem__(self, q: int) -> Fraction:
        vec, den = self._c
        if 0 <= q < len(vec):
            return Fraction(int(vec[q]), int(den))
        return Fraction(0)

    def __call__(self, y0) -> Fraction:
        return P.evaluate(self._c, y0)

    def derivative(self) -> "YPolynomial":
        return YPolynomial._raw(P.deriv_y(self._c))

    def __bool__(self):
        return bool(self._c[0])

    def __eq__(self, other):
        if not isinstance(other, YPolynomial):
            try:
                other = YPolynomial(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __add__(self, other):
        return YPolynomial._raw(P.add(self._c, _ypair(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return YPolynomial._raw(P.sub(self._c, _ypair(other)))

    def __rsub__(self, other):
        return YPolynomial._raw(P.sub(_ypair(other), self._c))

    def __neg__(self):
        return YPolynomial._raw(P.neg(self._c))

    def __mul__(self, other):
        return YPolynomial._raw(P.mul(self._c, _ypair(other)))

    __rmul__ = __mul__

    def __repr__(self):
        terms = []
        for q, c in sorted(self.coefficients.items()):
            mono = "" if q == 0 else ("y" if q == 1 else f"y^{q}")
            if q == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "YPolynomial(" + (" + ".join(terms) or "0") + ")"


def _ypair(c):
    if isinstance(c, YPolynomial):
        return c._c
    if isinstance(c, tuple) and len(c) == 2 and isinstance(c[0], tuple):
        return c
    if isinstance(c, (int, Rational)):
        return P.from_fractions([c])
    return YPolynomial(c)._c


# -- lazy engine -----------------------------------------------------------------

class Ctx:
    """Shared state of a family of nodes: y-truncation and Kronecker slot width."""

    __slots__ = ("ydeg", "wb")

    def __init__(self, ydeg=None):
        self.ydeg = ydeg
        self.wb = 0


class Node:
    """A lazily evaluated series.  ``val`` is a lower bound on the x-valuation."""

    def __init__(self, ctx: Ctx, val):
        self.ctx = ctx
        self.val = val
        self._c: list = []
        self._mb: list = []
        self._pk: list = []
        self._pkw = 0

    def _compute(self, n):  # pragma: no cover - abstract
        raise NotImplementedError

    def coeff(self, n: int):
        c = self._c
        while len(c) <= n:
            v = self._compute(len(c))
            c.append(v)
            b = P.bitlen(v[0])
            mb = self._mb
            mb.append(b if not mb or b > mb[-1] else mb[-1])
        return c[n]

    def packed(self, k, wb):
        if self._pkw != wb:
            self._pk = []
            self._pkw = wb
        pk = self._pk
        while len(pk) <= k:
            pk.append(None)
        p = pk[k]
        if p is None:
            p = pk[k] = P.pack(self._c[k][0], wb)
        return p

    # operator sugar, used heavily by the family pipelines
    def __add__(self, other):
        return Add(self, _lift(other, self.ctx))

    def __radd__(self, other):
        return Add(_lift(other, self.ctx), self)

    def __sub__(self, other):
        return Sub(self, _lift(other, self.ctx))

    def __rsub__(self, other):
        return Sub(_lift(other, self.ctx), self)

    def __neg__(self):
        return Neg(self)

    def __mul__(self, other):
        if isinstance(other, Node):
            return Mul(self, other)
        return Scale(self, _ypair(other))

    def __rmul__(self, other):
        return Scale(self, _ypair(other))

    def __truediv__(self, other):
        if isinstance(other, Node):
            return div_(self, other)
        return DivConst(self, _ypair(other))


def _lift(c, ctx):
    if isinstance(c, Node):
        return c
    return Const(ctx, [_ypair(c)], exact=True)


class Const(Node):
    """Known coefficients; beyond them either zero (exact) or unknown."""

    def __init__(self, ctx, coeffs, exact=False):
        coeffs = [P.truncate(c, ctx.ydeg) for c in coeffs]
        val = next((i for i, c in enumerate(coeffs) if c[0]), INF if exact else len(coeffs))
        super().__init__(ctx, val)
        self._known = coeffs
        self._exact = exact

    def _compute(self, n):
        if n < len(self._known):
            return self._known[n]
        if self._exact:
            return ZERO
        raise TruncationError(f"coefficient {n} is beyond the truncation order {len(self._known) - 1}")


def x_node(ctx):
    return Const(ctx, [ZERO, ONE], exact=True)


class Add(Node):
    def __init__(self, a, b):
        super().__init__(a.ctx, min(a.val, b.val))
        self.a, self.b = a, b

    def _compute(self, n):
        return P.add(self.a.coeff(n), self.b.coeff(n))


class Sub(Add):
    def _compute(self, n):
        return P.sub(self.a.coeff(n), self.b.coeff(n))


class Neg(Node):
    def __init__(self, a):
        super().__init__(a.ctx, a.val)
        self.a = a

    def _compute(self, n):
        return P.neg(self.a.coeff(n))


class Scale(Node):
    """Multiplication by a constant y-polynomial."""

    def __init__(self, a, c):
        super().__init__(a.ctx, a.val if c[0] else INF)
        self.a, self.k = a, c

    def _compute(self, n):
        if not self.k[0]:
            return ZERO
        return P.mul(self.a.coeff(n), self.k, self.ctx.ydeg)


class DivConst(Node):
    """Division by a constant y-polynomial (exact in the refined ring)."""

    def __init__(self, a, c):
        super().__init__(a.ctx, a.val)
        if not c[0]:
            raise ZeroDivisionError("division by zero")
        self.a, self.k = a, c
        self._inv = None
        if a.ctx.ydeg is not None:
            self._inv = P.inverse_trunc(c, a.ctx.ydeg)
        elif len(c[0]) == 1:
            self._inv = P.make((c[1],), c[0][0])

    def _compute(self, n):
        v = self.a.coeff(n)
        if self._inv is not None:
            return P.mul(v, self._inv, self.ctx.ydeg)
        return P.poly_divexact(v, self.k)


class Deriv(Node):
    """x-derivative (a shift in exponential normalisation)."""

    def __init__(self, a):
        super().__init__(a.ctx, max(a.val - 1, 0))
        self.a = a

    def _compute(self, n):
        return self.a.coeff(n + 1)


class Integ(Node):
    """x-antiderivative with zero constant term."""

    def __init__(self, a):
        super().__init__(a.ctx, a.val + 1)
        self.a = a

    def _compute(self, n):
        return ZERO if n == 0 else self.a.coeff(n - 1)


class XMul(Node):
    def __init__(self, a):
        super().__init__(a.ctx, a.val + 1)
        self.a = a

    def _compute(self, n):
        return ZERO if n == 0 else P.scale(self.a.coeff(n - 1), n)


class XDiv(Node):
    """Division by x of a series with zero constant term."""

    def __init__(self, a):
        if a.val < 1:
            raise ValueError("division by x needs a series with positive valuation")
        super().__init__(a.ctx, a.val - 1)
        self.a = a

    def _compute(self, n):
        return P.scale(self.a.coeff(n + 1), 1, n + 1)


class Tail(Node):
    """The series with its coefficients below index m removed."""

    def __init__(self, a, m=1):
        super().__init__(a.ctx, max(a.val, m))
        self.a, self.m = a, m

    def _compute(self, n):
        return ZERO if n < self.m else self.a.coeff(n)


class Check(Node):
    """Pass-through that validates the constant term."""

    def __init__(self, a, expected, what):
        super().__init__(a.ctx, a.val)
        self.a, self.expected, self.what = a, expected, what

    def _compute(self, n):
        v = self.a.coeff(n)
        if n == 0 and v != P.truncate(self.expected, self.ctx.ydeg):
            raise ValueError(self.what)
        return v


class Fix(Node):
    """Placeholder for a series defined implicitly by ``fix.bind(expr)``."""

    def __init__(self, ctx, val):
        super().__init__(ctx, val)
        self.body = None
        self._busy = -1

    def bind(self, body: Node):
        if self.body is not None:
            raise ValueError("fixed point already bound")
        self.body = body

    def _compute(self, n):
        if self.body is None:
            raise ValueError("unbound fixed point")
        if self._busy == n:
            raise DivergenceError(f"coefficient {n} depends on itself; the update is not contracting")
        prev, self._busy = self._busy, n
        try:
            v = self.body.coeff(n)
        finally:
            self._busy = prev
        if n < self.val and v[0]:
            raise DivergenceError(f"fixed point has a nonzero coefficient below its declared valuation at {n}")
        return v


class Mul(Node):
    def __init__(self, a, b):
        super().__init__(a.ctx, a.val + b.val)
        self.a, self.b = a, b

    def _compute(self, n):
        a, b = self.a, self.b
        lo, hi = a.val, n - b.val
        if lo > hi:
            return ZERO
        return convolve(a, b, n, int(lo), int(hi), self.ctx)


def _combine(groups):
    if len(groups) == 1:
        (d, acc), = groups.items()
        return acc, d
    lcm = Z(1)
    for d in groups:
        lcm = lcm * d // P._gcd(lcm, d)
    return None, lcm


def convolve(a: Node, b: Node, n: int, lo: int, hi: int, ctx: Ctx):
    """sum_k C(n,k) a_k b_{n-k} for lo <= k <= hi (exponential convolution)."""
    a.coeff(hi)
    b.coeff(n - lo)
    ac, bc = a._c, b._c
    row = binom_row(n)
    terms = [k for k in range(lo, hi + 1) if ac[k][0] and bc[n - k][0]]
    if not terms:
        return ZERO
    ydeg = ctx.ydeg
    la = max(len(ac[k][0]) for k in terms)
    lb = max(len(bc[n - k][0]) for k in terms)

    if la == 1 and lb == 1:
        groups: dict = {}
        for k in terms:
            (u, da), (v, db) = ac[k], bc[n - k]
            d = da * db
            groups[d] = groups.get(d, 0) + row[k] * u[0] * v[0]
        acc, d = _combine(groups)
        if acc is not None:
            return P.make((acc,), d)
        return P.make((sum(s * (d // g) for g, s in groups.items()),), d)

    if min(la, lb) <= P.SCHOOL_MAX or (ydeg is not None and ydeg <= P.SCHOOL_MAX):
        vgroups: dict = {}
        for k in terms:
            (u, da), (v, db) = ac[k], bc[n - k]
            d = da * db
            prod = P.school(u, v, ydeg)
            r = row[k]
            prod = [r * t for t in prod]
            cur = vgroups.get(d)
            vgroups[d] = prod if cur is None else P._vadd(cur, prod)
        acc, d = _combine(vgroups)
        if acc is not None:
            return P.make(acc, d)
        out: list = []
        for g, vec in vgroups.items():
            out = P._vadd(out, [t * (d // g) for t in vec])
        return P.make(out, d)

    need = a._mb[hi] + b._mb[n - lo] + row[n // 2].bit_length() + min(la, lb).bit_length() + len(terms).bit_length() + 2
    if 8 * ctx.wb - 1 < need:
        ctx.wb = P.slot_bytes(need + need // 4)
    wb = ctx.wb
    zgroups: dict = {}
    for k in terms:
        d = ac[k][1] * bc[n - k][1]
        t = a.packed(k, wb) * b.packed(n - k, wb)
        r = row[k]
        if r != 1:
            t *= r
        zgroups[d] = zgroups.get(d, 0) + t
    length = max(len(ac[k][0]) + len(bc[n - k][0]) - 1 for k in terms)
    acc, d = _combine(zgroups)
    if acc is not None:
        res = P.make(P.unpack(acc, length, wb), d)
    else:
        out = []
        for g, z in zgroups.items():
            out = P._vadd(out, [t * (d // g) for t in P.unpack(z, length, wb)])
        res = P.make(out, d)
    return P.truncate(res, ydeg)


# -- derived lazy operations -------------------------------------------------------

def exp_(s: Node) -> Node:
    """exp(s) for s with zero constant term, via E = 1 + integral(s' E)."""
    s = Check(s, ZERO, "exp needs a series with zero constant term")
    e = Fix(s.ctx, 0)
    e.bind(Integ(Mul(Deriv(s), e)) + 1)
    return e


def _unit_inverse(b0, ctx):
    if not b0[0]:
        raise ZeroDivisionError("divisor has a non-invertible constant term")
    if ctx.ydeg is not None:
        return P.inverse_trunc(b0, ctx.ydeg)
    if len(b0[0]) != 1:
        raise ZeroDivisionError("divisor constant term must be free of y in the exact ring")
    return P.make((b0[1],), b0[0][0])


def div_(a: Node, b: Node, b0=None) -> Node:
    """a / b, solved online as q = (a - (b - b0) q) / b0."""
    if b0 is None:
        b0 = b.coeff(0)
    else:
        b = Check(b, b0, "divisor constant term differs from the declared one")
    inv = _unit_inverse(P.truncate(b0, a.ctx.ydeg), a.ctx)
    q = Fix(a.ctx, a.val)
    q.bind(Scale(a - Mul(Tail(b, 1), q), inv))
    return q


def log_(u: Node) -> Node:
    """log(u) for u with constant term 1."""
    u = Check(u, ONE, "log needs a series with constant term 1")
    return Integ(div_(Deriv(u), u, ONE))


def sqrt_(r: Node) -> Node:
    """Square root with constant term 1 of a series with constant term 1."""
    r = Check(r, ONE, "sqrt needs a series with constant term 1")
    t = Fix(r.ctx, 1)
    t.bind(Scale(Tail(r, 1) - Mul(t, t), P.make((1,), 2)))
    return t + 1


# -- eager series --------------------------------------------------------------------

class BivariateSeries:
    """Immutable series sum_{n<=order} c_n(y) x^n with exact rational coefficients.

    ``ydeg`` is None for exact polynomials in y; an integer means the
    coefficients are only known modulo y^(ydeg+1) (jet mode).
    """

    __slots__ = ("order", "ydeg", "_c")

    def __init__(self, coeffs: Iterable = (), order: int | None = None, ydeg: int | None = None):
        coeffs = [_ypair(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        if len(coeffs) > order + 1:
            coeffs = coeffs[: order + 1]
        coeffs += [ZERO] * (order + 1 - len(coeffs))
        fact = Z(1)
        out = []
        for n, c in enumerate(coeffs):
            if n:
                fact *= n
            out.append(P.truncate(P.scale(c, fact), ydeg))
        self.order = order
        self.ydeg = ydeg
        self._c = tuple(out)

    @classmethod
    def _raw(cls, egf, ydeg=None) -> "BivariateSeries":
        obj = cls.__new__(cls)
        obj.order = len(egf) - 1
        obj.ydeg = ydeg
        obj._c = tuple(egf)
        return obj

    # constructors
    @classmethod
    def zero(cls, order, ydeg=None):
        return cls([], order, ydeg)

    @classmethod
    def one(cls, order, ydeg=None):
        return cls([1], order, ydeg)

    @classmethod
    def x(cls, order, ydeg=None):
        return cls([0, 1], order, ydeg)

    @classmethod
    def y(cls, order, ydeg=None):
        return cls([YPolynomial([0, 1])], order, ydeg)

    @classmethod
    def from_egf(cls, coeffs, ydeg=None):
        """Build from exponentially normalised coefficients n! [x^n]."""
        return cls._raw([P.truncate(_ypair(c), ydeg) for c in coeffs], ydeg)

    # access
    def __getitem__(self, n: int) -> YPolynomial:
        if not 0 <= n <= self.order:
            raise IndexError(n)
        return YPolynomial._raw(P.scale(self._c[n], 1, math.factorial(n)))

    def egf(self, n: int) -> YPolynomial:
        """n! times the x^n coefficient."""
        return YPolynomial._raw(self._c[n])

    def count(self, n: int, q: int | None = None) -> int:
        """Exact labelled count n! [x^n y^q], or n! [x^n] at y=1 when q is None."""
        c = self._c[n]
        if q is None:
            v = P.evaluate(c, 1)
        else:
            vec, den = c
            v = Fraction(int(vec[q]), int(den)) if q < len(vec) else Fraction(0)
        if v.denominator != 1:
            raise ArithmeticError(f"non-integral count at n={n}, q={q}: {v}")
        return v.numerator

    def coefficients(self) -> list:
        return [self[n] for n in range(self.order + 1)]

    def valuation(self):
        return next((i for i, c in enumerate(self._c) if c[0]), INF)

    def __eq__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return self.order == other.order and self.ydeg == other.ydeg and self._c == other._c

    def __hash__(self):
        return hash((self.order, self.ydeg, self._c))

    def __repr__(self):
        shown = ", ".join(repr(self[n]) for n in range(min(self.order, 5) + 1))
        more = ", ..." if self.order > 5 else ""
        return f"BivariateSeries(order={self.order}, [{shown}{more}])"

    def _node(self, ctx) -> Node:
        return Const(ctx, self._c)

    # operators
    def __add__(self, other):
        return add(self, _coerce(other, self))

    def __radd__(self, other):
        return add(_coerce(other, self), self)

    def __sub__(self, other):
        return sub(self, _coerce(other, self))

    def __rsub__(self, other):
        return sub(_coerce(other, self), self)

    def __mul__(self, other):
        return mul(self, _coerce(other, self))

    def __rmul__(self, other):
        return mul(_coerce(other, self), self)

    def __truediv__(self, other):
        return div(self, _coerce(other, self))

    def __rtruediv__(self, other):
        return div(_coerce(other, self), self)

    def __neg__(self):
        return BivariateSeries._raw([P.neg(c) for c in self._c], self.ydeg)

    def truncate(self, order: int) -> "BivariateSeries":
        if order > self.order:
            raise TruncationError("cannot extend a truncated series")
        return BivariateSeries._raw(self._c[: order + 1], self.ydeg)

    def exp(self):
        return exp(self)

    def log(self):
        return log(self)

    def sqrt(self):
        return sqrt(self)

    def derive_x(self):
        return derive_x(self)

    def integrate_x(self, order=None):
        return integrate_x(self, order)

    def derive_y(self):
        return derive_y(self)

    def compose(self, inner):
        return compose(self, inner)

    def evaluate_y(self, y0):
        return evaluate_y(self, y0)


def _coerce(c, like: BivariateSeries) -> BivariateSeries:
    if isinstance(c, BivariateSeries):
        return c
    return BivariateSeries([c], like.order, like.ydeg)


def materialize(node: Node, order: int, ydeg=None) -> BivariateSeries:
    """Evaluate a lazy node to the given truncation order."""
    return BivariateSeries._raw([node.coeff(n) for n in range(order + 1)], ydeg if ydeg is not None else node.ctx.ydeg)


def _same(a: BivariateSeries, b: BivariateSeries):
    if a.order != b.order:
        raise ValueError(f"mismatched truncation orders {a.order} and {b.order}")
    if a.ydeg != b.ydeg:
        raise ValueError("mismatched y-truncations")
    return Ctx(a.ydeg)


def add(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    _same(a, b)
    return BivariateSeries._raw([P.add(u, v) for u, v in zip(a._c, b._c)], a.ydeg)


def sub(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    _same(a, b)
    return BivariateSeries._raw([P.sub(u, v) for u, v in zip(a._c, b._c)], a.ydeg)


def mul(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    ctx = _same(a, b)
    return materialize(Mul(a._node(ctx), b._node(ctx)), a.order)


def div(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    ctx = _same(a, b)
    return materialize(div_(a._node(ctx), b._node(ctx)), a.order)


def exp(a: BivariateSeries) -> BivariateSeries:
    return materialize(exp_(a._node(Ctx(a.ydeg))), a.order)


def log(a: BivariateSeries) -> BivariateSeries:
    return materialize(log_(a._node(Ctx(a.ydeg))), a.order)


def sqrt(a: BivariateSeries) -> BivariateSeries:
    return materialize(sqrt_(a._node(Ctx(a.ydeg))), a.order)


def derive_x(a: BivariateSeries) -> BivariateSeries:
    if a.order < 1:
        raise TruncationError("derivative of an order-0 series is unknown")
    return BivariateSeries._raw(a._c[1:], a.ydeg)


def integrate_x(a: BivariateSeries, order: int | None = None) -> BivariateSeries:
    """Antiderivative vanishing at x=0; known to order ``a.order + 1``."""
    top = a.order + 1
    if order is None:
        order = top
    if order > top:
        raise TruncationError(f"antiderivative is known only to order {top}")
    return BivariateSeries._raw(((ZERO,) + a._c)[: order + 1], a.ydeg)


def derive_y(a: BivariateSeries) -> BivariateSeries:
    """Partial derivative in y (in jet mode the y-truncation drops by one)."""
    ydeg = None if a.ydeg is None else a.ydeg - 1
    if ydeg is not None and ydeg < 0:
        raise TruncationError("y-derivative of a y-constant jet is unknown")
    return BivariateSeries._raw([P.truncate(P.deriv_y(c), ydeg) for c in a._c], ydeg)


def mul_x(a: BivariateSeries) -> BivariateSeries:
    """x * a, known to one more order."""
    return materialize(XMul(a._node(Ctx(a.ydeg))), a.order + 1)


def compose(outer: BivariateSeries, inner: BivariateSeries) -> BivariateSeries:
    """outer(inner(x, y), y) for inner with zero constant term."""
    if inner._c[0][0]:
        raise ValueError("inner series must have zero constant term")
    if outer.ydeg != inner.ydeg:
        raise ValueError("mismatched y-truncations")
    order = min(outer.order, inner.order)
    inner = inner.truncate(order)
    ctx = Ctx(inner.ydeg)
    acc = [ZERO] * (order + 1)
    power = BivariateSeries.one(order, inner.ydeg)
    fact = Z(1)
    for k in range(order + 1):
        if k:
            power = mul(power, inner)
            fact *= k
        ok = outer._c[k]
        if not ok[0]:
            continue
        w = P.scale(ok, 1, fact)
        for n in range(k, order + 1):
            term = power._c[n]
            if term[0]:
                acc[n] = P.add(acc[n], P.mul(term, w, ctx.ydeg))
    return BivariateSeries._raw(acc, inner.ydeg)


def evaluate_y(a: BivariateSeries, y0) -> BivariateSeries:
    """Specialise y to a rational value; the result has y-free coefficients."""
    if a.ydeg is not None:
        raise ValueError("cannot evaluate a y-truncated series")
    return BivariateSeries._raw([P.from_fractions([P.evaluate(c, y0)]) for c in a._c])


def agreement(a: BivariateSeries, b: BivariateSeries) -> int:
    """First index where a and b differ (order + 1 if they agree throughout)."""
    for n, (u, v) in enumerate(zip(a._c, b._c)):
        if u != v:
            return n
    return min(a.order, b.order) + 1


def solve_fixed_point(update: Callable[[BivariateSeries], BivariateSeries], seed: BivariateSeries, order: int | None = None) -> BivariateSeries:
    """Iterate ``S <- update(S)`` from ``seed`` until two iterates agree to the order.

    The update must gain at least one x-order of agreement per step; if it does
    not, :class:`DivergenceError` is raised.
    """
    if order is None:
        order = seed.order
    s = seed if seed.order == order else BivariateSeries._raw((seed._c + (ZERO,) * (order + 1))[: order + 1], seed.ydeg)
    last = -1
    for _ in range(order + 2):
        nxt = update(s)
        if nxt.order != order:
            raise ValueError("update changed the truncation order")
        d = agreement(s, nxt)
        if d > order:
            return nxt
        if d <= last:
            raise DivergenceError(f"iterates stopped gaining agreement at order {d}")
        last = d
        s = nxt
    raise DivergenceError("no fixed point reached within order + 1 iterations")
