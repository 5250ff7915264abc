"""Truncated Taylor arithmetic over mpmath numbers (forward-mode AD to any order).

A :class:`Jet` ``[c0, c1, ..., ck]`` stands for c0 + c1 e + ... + ck e^k with
e^(k+1) = 0.  The elementary functions below accept plain numbers or jets, so
formulas written once can be evaluated both ways.
"""

from __future__ import annotations

import mpmath


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = [mpmath.mpf(v) if not isinstance(v, mpmath.mpf) else v for v in coeffs]

    @classmethod
    def variable(cls, x0, order: int) -> "Jet":
        return cls([x0, 1] + [0] * (order - 1)) if order >= 1 else cls([x0])

    @classmethod
    def constant(cls, x0, order: int) -> "Jet":
        return cls([x0] + [0] * order)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def value(self):
        return self.c[0]

    def derivative(self, k: int):
        """k-th derivative at the expansion point."""
        return self.c[k] * mpmath.factorial(k)

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError("jets of different orders")
            return other
        return Jet([other] + [0] * self.order)

    def __add__(self, other):
        o = self._lift(other)
        return Jet([a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Jet([a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([a * other for a in self.c])
        o = self._lift(other)
        k = self.order
        return Jet([mpmath.fsum(self.c[i] * o.c[n - i] for i in range(n + 1)) for n in range(k + 1)])

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.c
        r = [1 / a[0]]
        for n in range(1, len(a)):
            r.append(-mpmath.fsum(a[j] * r[n - j] for j in range(1, n + 1)) / a[0])
        return Jet(r)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet([a / other for a in self.c])
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = self._lift(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def exp(self) -> "Jet":
        a = self.c
        e = [mpmath.exp(a[0])]
        for n in range(1, len(a)):
            e.append(mpmath.fsum(j * a[j] * e[n - j] for j in range(1, n + 1)) / n)
        return Jet(e)

    def log(self) -> "Jet":
        a = self.c
        out = [mpmath.log(a[0])]
        for n in range(1, len(a)):
            s = mpmath.fsum(j * out[j] * a[n - j] for j in range(1, n))
            out.append((a[n] - s / n) / a[0])
        return Jet(out)

    def sqrt(self) -> "Jet":
        a = self.c
        s = [mpmath.sqrt(a[0])]
        for n in range(1, len(a)):
            acc = mpmath.fsum(s[j] * s[n - j] for j in range(1, n))
            s.append((a[n] - acc) / (2 * s[0]))
        return Jet(s)

    def __repr__(self):
        return "Jet(" + ", ".join(mpmath.nstr(v, 12) for v in self.c) + ")"


def exp(x):
    return x.exp() if isinstance(x, Jet) else mpmath.exp(x)


def log(x):
    return x.log() if isinstance(x, Jet) else mpmath.log(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, Jet) else mpmath.sqrt(x)


def value(x):
    return x.c[0] if isinstance(x, Jet) else x


def lift(x, order: int) -> Jet:
    return x if isinstance(x, Jet) else Jet.constant(x, order)


def newton_jets(residual, root, order: int, param):
    """Extend a scalar root system to Taylor jets in a parameter.

    ``residual(xs, p)`` returns a list of residuals for unknowns ``xs`` and
    parameter ``p``; ``root`` solves it at ``p = value(param)``.  The Jacobian
    at the root is found with first-order jets, then each Newton sweep with
    that fixed Jacobian gains at least one jet order.
    """
    m = len(root)
    p0 = lift(value(param), 1)
    jac = mpmath.matrix(m, m)
    for j in range(m):
        xs = [Jet.variable(root[i], 1) if i == j else Jet.constant(root[i], 1) for i in range(m)]
        res = residual(xs, p0)
        for i in range(m):
            jac[i, j] = lift(res[i], 1).c[1]
    inv = mpmath.inverse(jac)
    xs = [Jet.constant(r, order) for r in root]
    param = lift(param, order)
    for _ in range(order + 1):
        res = [lift(r, order) for r in residual(xs, param)]
        new = []
        for i in range(m):
            step = [mpmath.fsum(inv[i, j] * res[j].c[k] for j in range(m)) for k in range(order + 1)]
            new.append(Jet([a - b for a, b in zip(xs[i].c, step)]))
        xs = new
    return xs
