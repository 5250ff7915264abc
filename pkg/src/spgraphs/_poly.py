"""Integer y-polynomial primitives used by the series engine.

A coefficient is a pair ``(vec, den)`` where ``vec`` is a tuple of integers
holding the numerators of y^0, y^1, ... and ``den`` is a positive integer.
Trailing zeros are stripped and ``gcd(vec, den) == 1``, so the zero
polynomial is ``((), 1)`` and equal polynomials have equal pairs.

Products of long polynomials go through Kronecker substitution: each vector
is packed into one big integer with fixed-width slots and the product is a
single big-integer multiplication.
"""

from __future__ import annotations

import math
from fractions import Fraction

try:
    import gmpy2

    Z = gmpy2.mpz
    _gcd = gmpy2.gcd
    _from_bytes = gmpy2.mpz.from_bytes
    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Z = int
    _gcd = math.gcd
    _from_bytes = int.from_bytes
    HAVE_GMPY2 = False

ZERO = ((), 1)
ONE = ((Z(1),), 1)

# vectors at most this long are multiplied by schoolbook
SCHOOL_MAX = 8


def make(vec, den=1):
    """Normalise an arbitrary (vec, den) pair."""
    if den < 0:
        vec = [-c for c in vec]
        den = -den
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    i = len(vec)
    while i and not vec[i - 1]:
        i -= 1
    if i == 0:
        return ZERO
    vec = tuple(Z(c) for c in vec[:i])
    den = Z(den)
    if den != 1:
        g = den
        for c in vec:
            g = _gcd(g, c)
            if g == 1:
                break
        if g != 1:
            vec = tuple(c // g for c in vec)
            den //= g
    return (vec, den)


def from_fractions(coeffs):
    """Build a pair from a dense list of rationals (index = y-exponent)."""
    fr = [Fraction(c) for c in coeffs]
    if not fr:
        return ZERO
    den = 1
    for f in fr:
        den = den * f.denominator // math.gcd(den, f.denominator)
    return make([f.numerator * (den // f.denominator) for f in fr], den)


def to_fractions(c):
    vec, den = c
    return [Fraction(int(v), int(den)) for v in vec]


def is_zero(c):
    return not c[0]


def truncate(c, ydeg):
    if ydeg is None or len(c[0]) <= ydeg + 1:
        return c
    return make(c[0][: ydeg + 1], c[1])


def _vadd(u, v):
    if len(u) < len(v):
        u, v = v, u
    return [a + b for a, b in zip(u, v)] + list(u[len(v):])


def _vscale(u, k):
    return [a * k for a in u]


def add(a, b):
    if not a[0]:
        return b
    if not b[0]:
        return a
    (u, da), (v, db) = a, b
    if da == db:
        return make(_vadd(u, v), da)
    g = _gcd(da, db)
    return make(_vadd(_vscale(u, db // g), _vscale(v, da // g)), da // g * db)


def neg(a):
    return (tuple(-c for c in a[0]), a[1])


def sub(a, b):
    return add(a, neg(b))


def scale(a, num, den=1):
    """Multiply by the rational ``num/den``."""
    if not a[0] or num == 0:
        return ZERO
    return make(_vscale(a[0], Z(num)), a[1] * den)


def school(u, v, ydeg=None):
    """Schoolbook product of two integer vectors, optionally truncated."""
    if not u or not v:
        return []
    n = len(u) + len(v) - 1
    if ydeg is not None:
        n = min(n, ydeg + 1)
    out = [Z(0)] * n
    for i, a in enumerate(u):
        if i >= n or not a:
            continue
        lim = min(len(v), n - i)
        for j in range(lim):
            out[i + j] += a * v[j]
    return out


def mul(a, b, ydeg=None):
    u, v = a[0], b[0]
    if not u or not v:
        return ZERO
    if len(u) == 1 and len(v) == 1:
        return make((u[0] * v[0],), a[1] * b[1])
    if min(len(u), len(v)) <= SCHOOL_MAX or ydeg is not None and ydeg <= SCHOOL_MAX:
        return make(school(u, v, ydeg), a[1] * b[1])
    wb = slot_bytes(bitlen(u) + bitlen(v) + min(len(u), len(v)).bit_length() + 1)
    prod = unpack(pack(u, wb) * pack(v, wb), len(u) + len(v) - 1, wb)
    return truncate(make(prod, a[1] * b[1]), ydeg)


def bitlen(u):
    return max((abs(c).bit_length() for c in u), default=0)


def slot_bytes(bits):
    return (bits + 8) // 8 + 1


# -- Kronecker packing --------------------------------------------------------

_BIAS = {}


def _bias(length, wb):
    key = (length, wb)
    b = _BIAS.get(key)
    if b is None:
        off = 1 << (8 * wb - 1)
        b = Z(0)
        for i in range(length):
            b += Z(off) << (8 * wb * i)
        _BIAS[key] = b
    return b


def pack(vec, wb):
    """Pack signed integers into one integer with ``wb``-byte slots."""
    if len(vec) == 1:
        return Z(vec[0])
    off = 1 << (8 * wb - 1)
    data = b"".join(int(c + off).to_bytes(wb, "little") for c in vec)
    return Z(_from_bytes(data, "little")) - _bias(len(vec), wb)


def unpack(z, length, wb):
    """Inverse of :func:`pack`; each slot value must satisfy |c| < 2^(8wb-1)."""
    if length == 1:
        return (Z(z),)
    off = 1 << (8 * wb - 1)
    data = int(z + _bias(length, wb)).to_bytes(length * wb, "little")
    return tuple(
        Z(_from_bytes(data[i * wb:(i + 1) * wb], "little")) - off
        for i in range(length)
    )


def poly_divexact(a, b):
    """Exact quotient a/b of y-polynomials over Q; raises if b does not divide a."""
    fa = to_fractions(a)
    fb = to_fractions(b)
    if not fb:
        raise ZeroDivisionError("division by the zero polynomial")
    if not fa:
        return ZERO
    db = len(fb) - 1
    lead = fb[-1]
    q = [Fraction(0)] * max(len(fa) - db, 0)
    r = list(fa)
    for i in range(len(fa) - 1 - db, -1, -1):
        c = r[i + db] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(fb):
                r[i + j] -= c * bj
    if any(r):
        raise ArithmeticError("polynomial division is not exact")
    return from_fractions(q)


def inverse_trunc(b, ydeg):
    """Inverse of b modulo y^(ydeg+1); b must have nonzero constant term."""
    fb = to_fractions(b)
    if not fb or fb[0] == 0:
        raise ZeroDivisionError("constant term is not invertible")
    inv = [Fraction(0)] * (ydeg + 1)
    inv[0] = 1 / fb[0]
    for k in range(1, ydeg + 1):
        s = sum(fb[j] * inv[k - j] for j in range(1, min(k, len(fb) - 1) + 1))
        inv[k] = -s / fb[0]
    return from_fractions(inv)


def evaluate(c, y0):
    """Exact value of the polynomial at a rational point."""
    y0 = Fraction(y0)
    acc = Fraction(0)
    for v in reversed(c[0]):
        acc = acc * y0 + int(v)
    return acc / int(c[1])


def deriv_y(c):
    vec, den = c
    return make([i * vec[i] for i in range(1, len(vec))], den)
