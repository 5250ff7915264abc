"""Dominant singularities, singular expansions and limit-law constants.

All routines take an explicit precision in bits and work inside
``mpmath.workprec`` with a few guard bits, so no global state leaks out.
Scalar equations are solved with a safeguarded Newton iteration that keeps a
sign-changing bracket.  Derivatives with respect to y come from Taylor jets
(:mod:`spgraphs.jets`) and are double-checked against an explicit
implicit-differentiation route and against central finite differences.

Notation, for a fixed edge weight y:

* networks D(x, y) have the inverse psi(u) = L / (u (u - L)) with
  L = log((1+u)/(1+y)); its critical point upsilon gives the radius R(y)
  of the 2-connected series.  With t in (0, 1) solving Y(t) = y,
  upsilon = t^2/(1-t^2) and R = (1+t)(t-1)^2 / t^3;
* rooted connected graphs F = x exp(B'(F)) have the inverse
  Psi(u) = u exp(-B'(u)); its critical point tau gives rho = Psi(tau);
* near a square-root singularity r every series is expanded in
  X = sqrt(1 - x/r), and a term K X^3 contributes
  3K/(4 sqrt(pi)) n^(-5/2) r^(-n) n! to the n-th coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from .families import ConnectivityLevel, FamilyKind
from .jets import Jet, exp, log, newton_jets, sqrt, value

GUARD = 24
DEFAULT_PREC = 256


class SolverError(ArithmeticError):
    """A root could not be bracketed or a sign/consistency assertion failed."""


def _work(prec: int):
    return mpmath.workprec(int(prec) + GUARD)


def _num(y):
    if isinstance(y, Fraction):
        return mpf(y.numerator) / y.denominator
    return y if isinstance(y, (mpmath.mpf, Jet)) else mpf(y)


def safe_newton(f, df, lo, hi, x0=None, maxiter=4000):
    """Root of f in (lo, hi) where f changes sign, Newton steps clipped to the bracket."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise SolverError(f"no sign change on [{mpmath.nstr(lo, 8)}, {mpmath.nstr(hi, 8)}]")
    rising = fhi > 0
    x = x0 if x0 is not None and lo < x0 < hi else (lo + hi) / 2
    eps = mpf(2) ** (4 - mpmath.mp.prec)
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0:
            return x
        if (fx > 0) == rising:
            hi = x
        else:
            lo = x
        d = df(x)
        xn = x - fx / d if d != 0 else None
        if xn is None or not lo < xn < hi:
            xn = (lo + hi) / 2
        if abs(xn - x) <= eps * abs(xn) or hi - lo <= eps * abs(xn):
            return xn
        x = xn
    raise SolverError("safeguarded Newton did not converge")


def _fd(fun, y0, h):
    """Five-point central differences: (first, second) derivative."""
    fp2, fp1, f0, fm1, fm2 = (fun(y0 + k * h) for k in (2, 1, 0, -1, -2))
    d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
    d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)
    return d1, d2


def _rel(a, b):
    a, b = value(a), value(b)
    return abs(a - b) / max(abs(a), abs(b), mpf(2) ** (-mpmath.mp.prec))


# -- result containers ---------------------------------------------------------------

@dataclass
class SaddleSolution:
    family: FamilyKind
    y: mpf
    t: mpf | None = None
    upsilon: mpf | None = None
    L: mpf | None = None
    R: mpf | None = None
    tau: mpf | None = None
    D_at_tau: mpf | None = None
    rho: mpf | None = None
    residuals: dict = field(default_factory=dict)


@dataclass
class ExpansionConstants:
    family: FamilyKind
    y: mpf
    D0: mpf | None = None
    D1: mpf | None = None
    D2: mpf | None = None
    B0: mpf | None = None
    B2: mpf | None = None
    B3: mpf | None = None
    F0: mpf | None = None
    F1: mpf | None = None
    S: mpf | None = None
    C0: mpf | None = None
    C2: mpf | None = None
    C3: mpf | None = None
    G0: mpf | None = None
    G2: mpf | None = None
    G3: mpf | None = None
    gamma: mpf | None = None
    amplitude: dict = field(default_factory=dict)   # level -> constant in front of n^(-5/2) r^(-n) n!
    radius: dict = field(default_factory=dict)      # level -> r
    cross_checks: dict = field(default_factory=dict)  # name -> relative difference of two routes
    residuals: dict = field(default_factory=dict)

    # named amplitudes
    @property
    def b(self):
        return self.amplitude.get(ConnectivityLevel.BICONNECTED)

    @property
    def c(self):
        return self.amplitude.get(ConnectivityLevel.CONNECTED)

    @property
    def g(self):
        return self.amplitude.get(ConnectivityLevel.ALL)


@dataclass
class LawReport:
    family: FamilyKind
    level: ConnectivityLevel
    kappa: mpf
    lam: mpf
    r: mpf
    d1: mpf
    d2: mpf
    d1_fd: mpf
    d2_fd: mpf
    dtau: mpf | None = None
    routes: dict = field(default_factory=dict)  # name -> relative difference

    @property
    def fd_agreement(self):
        return max(_rel(self.d1, self.d1_fd), _rel(self.d2, self.d2_fd))


# -- networks and 2-connected SP graphs -------------------------------------------------------

def Y(t):
    """y as a function of the auxiliary parameter t (increasing on (0, 1))."""
    return exp(-t * t / (1 + t)) / (1 - t * t) - 1


def dY(t):
    return (t + 3) * t * t / ((t * t - 1) ** 2 * (1 + t)) * exp(-t * t / (1 + t))


def q(t):
    return (1 + t) * (t - 1) ** 2 / t ** 3


def dq(t):
    # derivative of (1+t)(t-1)^2 t^-3
    return ((t - 1) ** 2 + 2 * (1 + t) * (t - 1)) / t ** 3 - 3 * (1 + t) * (t - 1) ** 2 / t ** 4


def psi(u, y):
    L = log((1 + u) / (1 + y))
    return L / (u * (u - L))


def dpsi(u, y):
    L = log((1 + u) / (1 + y))
    return ((1 + u) * L * L - 2 * u * (1 + u) * L + u * u) / ((1 + u) * u * u * (L - u) ** 2)


def psi2_t(t):
    return -(t + 3) * (t - 1) ** 4 * (1 + t) ** 3 / t ** 6


def psi3_t(t):
    return -2 * (t * t + 3 * t + 3) * (t - 1) ** 5 * (1 + t) ** 5 / t ** 8


def solve_t(y, prec: int = DEFAULT_PREC) -> mpf:
    """The unique t in (0, 1) with Y(t) = y."""
    with _work(prec):
        y = _num(y)
        if y <= 0:
            raise ValueError("y must be positive")
        hi = 1 - mpf(2) ** -8
        while Y(hi) <= y:
            hi = (1 + hi) / 2
        return +safe_newton(lambda t: Y(t) - y, dY, mpf(0), hi)


def t_jet(y0, order: int, prec: int = DEFAULT_PREC) -> Jet:
    """t(y0 + e) as a Taylor jet."""
    with _work(prec):
        t0 = solve_t(y0, prec)
        return newton_jets(lambda xs, p: [Y(xs[0]) - p], [t0], order, Jet.variable(_num(y0), order))[0]


def sp_block_kernel(x, d):
    """B'(x) for SP blocks in terms of D = D(x, y)."""
    xd = x * d
    return xd * (2 - xd * d) / (2 * (1 + xd))


def sp_block_series(x, d):
    """B(x) for SP blocks in terms of D = D(x, y)."""
    xd = x * d
    return log(1 + xd) / 2 - xd * (xd * xd + xd + 2 - 2 * x) / (4 * (1 + xd))


def network_residual(u, d, y):
    return log((1 + d) / (1 + y)) - u * d * d / (1 + u * d)


def network_dD_dx(u, d):
    return d * d * (1 + d) / (1 - 2 * u * d * d - u * u * d ** 3)


def network_dD_dy(u, d, y):
    return -(1 + u * d) ** 2 * (1 + d) / ((-1 + 2 * u * d * d + u * u * d ** 3) * (1 + y))


def _partial(fun, x0, k=1):
    """k-th derivative of a jet-aware scalar function."""
    return fun(Jet.variable(x0, k)).derivative(k)


def radius_2conn(y=1, prec: int = DEFAULT_PREC):
    """Radius R(y) of the 2-connected SP series and its singular expansion.

    Returns ``(R, ExpansionConstants)`` with D0..D2, B0, B2, B3 and the
    amplitude b; every quantity with a closed form in t is compared with an
    independent route and the relative gap stored in ``cross_checks``.
    """
    with _work(prec):
        y = _num(y)
        t = solve_t(y, prec)
        ups = t * t / (1 - t * t)
        L = t * t / (1 + t)
        R = q(t)
        p2, p3 = psi2_t(t), psi3_t(t)
        if not p2 < 0:
            raise SolverError("psi'' must be negative at the critical point")
        ex = ExpansionConstants(FamilyKind.SP, y)
        ex.D0 = ups
        ex.D1 = -sqrt(-2 * R / p2)
        ex.D2 = R * p3 / (3 * p2 * p2)
        ex.B0 = (t ** 3 + 2 * log(1 / t) * t ** 3 + 2 * t * t - 5 * t + 2) / (4 * t ** 3)
        ex.B2 = (t - 1) ** 3 * (t + 2) / (2 * t ** 3)
        # the X^3 coefficient of B equals -(2R/3) times the X coefficient of B'
        ex.B3 = -2 * R / 3 * _partial(lambda d: sp_block_kernel(R, d), ups) * ex.D1
        if not ex.B3 > 0:
            raise SolverError("B3 must be positive")
        ex.amplitude[ConnectivityLevel.BICONNECTED] = 3 * ex.B3 / (4 * mpmath.sqrt(mpmath.pi))
        ex.radius[ConnectivityLevel.BICONNECTED] = R
        cc = ex.cross_checks
        cc["L(upsilon)"] = _rel(L, log((1 + ups) / (1 + y)))
        cc["R=psi(upsilon)"] = _rel(R, psi(ups, y))
        cc["D1 t-form"] = _rel(ex.D1, mpmath.sqrt(2 * t ** 3) / (mpmath.sqrt(t + 3) * (t * t - 1)))
        cc["D2 t-form"] = _rel(ex.D2, 2 * t * (t * t + 3 * t + 3) / (3 * (1 - t) * (3 + t) ** 2))
        cc["B0 closed form"] = _rel(ex.B0, sp_block_series(R, ups))
        cc["B2 closed form"] = _rel(ex.B2, -R * sp_block_kernel(R, ups))
        cc["B3 t-form"] = _rel(ex.B3, (1 - t) ** 3 * mpmath.sqrt(2) / (3 * mpmath.sqrt((t + 3) * t ** 3)))
        # psi'' and psi''' in t against direct differentiation of psi(u)
        jet = psi(Jet.variable(ups, 3), y)
        cc["psi'' t-form"] = _rel(p2, jet.derivative(2))
        cc["psi''' t-form"] = _rel(p3, jet.derivative(3))
        ex.residuals["Y(t)-y"] = abs(Y(t) - y)
        ex.residuals["psi'(upsilon)"] = abs(dpsi(ups, y))
        return +R, ex


def saddle_2conn(y=1, prec: int = DEFAULT_PREC) -> SaddleSolution:
    with _work(prec):
        y = _num(y)
        t = solve_t(y, prec)
        ups = t * t / (1 - t * t)
        sol = SaddleSolution(FamilyKind.SP, y, t=t, upsilon=ups, L=t * t / (1 + t), R=q(t))
        sol.residuals["Y(t)-y"] = abs(Y(t) - y)
        sol.residuals["psi'(upsilon)"] = abs(dpsi(ups, y))
        return sol


# -- connected SP graphs ----------------------------------------------------------------

def tau_poly(u, d):
    return d ** 6 * u ** 4 + d ** 5 * u ** 3 + 2 * d ** 3 * u * u + 4 * d * d * u - 2


def tau_poly_du(u, d):
    return 4 * d ** 6 * u ** 3 + 3 * d ** 5 * u * u + 4 * d ** 3 * u + 4 * d * d


def tau_poly_dd(u, d):
    return 6 * d ** 5 * u ** 4 + 5 * d ** 4 * u ** 3 + 6 * d * d * u * u + 8 * d * u


_SEED_CACHE: dict = {}


def _network_seed(u, y):
    """Value of the truncated network series at (u, y'), y' a nearby simple rational."""
    from .families import YRing, network_series

    y0 = Fraction(float(y)).limit_denominator(16)
    if y0 <= 0:
        return None
    ser = _SEED_CACHE.get(y0)
    if ser is None:
        s = network_series(40, YRing.at(y0), check=False)
        ser = _SEED_CACHE[y0] = [mpf(s[n](0).numerator) / s[n](0).denominator for n in range(41)]
    return mpmath.polyval(ser[::-1], u)


def solve_network(u, y, prec: int = DEFAULT_PREC):
    """D(u, y) for 0 <= u < R(y), on the branch with D(0, y) = y."""
    with _work(prec):
        u, y = _num(u), _num(y)
        if u == 0:
            return +y
        t = solve_t(y, prec)
        ups = t * t / (1 - t * t)
        f = lambda d: network_residual(u, d, y)
        df = lambda d: 1 / (1 + d) - (2 * u * d + u * u * d * d) / (1 + u * d) ** 2
        return +safe_newton(f, df, y, ups, _network_seed(u, y))


def solve_tau_sp(y=1, prec: int = DEFAULT_PREC):
    """(tau, D(tau, y)): the critical point of Psi for SP graphs.

    A bracketed solve of T(u, D(u, y)) = 0 over u in (0, R(y)) seeds a joint
    Newton polish of the 2x2 system {T = 0, network equation}.
    """
    with _work(prec):
        y = _num(y)
        t = solve_t(y, prec)
        R = q(t)
        if not (1 - t) / (1 + t) ** 2 > 0:
            raise SolverError("side condition on t fails")

        def g(u):
            return tau_poly(u, solve_network(u, y, prec))

        def dg(u):
            d = solve_network(u, y, prec)
            return tau_poly_du(u, d) + tau_poly_dd(u, d) * network_dD_dx(u, d)

        tau = safe_newton(g, dg, R / 64, R * (1 - mpf(2) ** -20))
        d = solve_network(tau, y, prec)
        for _ in range(3):
            F = mpmath.matrix([tau_poly(tau, d), network_residual(tau, d, y)])
            du = 1 / (1 + d) - (2 * tau * d + tau * tau * d * d) / (1 + tau * d) ** 2
            J = mpmath.matrix([[tau_poly_du(tau, d), tau_poly_dd(tau, d)],
                               [-d * d / (1 + tau * d) ** 2, du]])
            step = mpmath.lu_solve(J, F)
            tau, d = tau - step[0], d - step[1]
        if not 0 < tau < R:
            raise SolverError("tau outside (0, R)")
        return +tau, +d


def sp_Psi(u, d):
    return u * exp(-sp_block_kernel(u, d))


def _d_jet_in_u(u0, d0, y, order):
    return newton_jets(lambda xs, p: [network_residual(p, xs[0], y)], [d0], order, Jet.variable(u0, order))[0]


def _d_jet_in_y(u, d0, y0, order):
    return newton_jets(lambda xs, p: [network_residual(u, xs[0], p)], [d0], order, Jet.variable(y0, order))[0]


def sp_S_poly(tau, d):
    return (-4 * tau ** 5 * d ** 7 - 5 * tau ** 4 * d ** 6 + (6 * tau ** 4 - tau ** 3) * d ** 5
            + 5 * tau ** 3 * d ** 4 - 3 * tau * tau * d ** 3 + 6 * tau * tau * d * d + 12 * tau * d + 4)


def saddle_sp(y=1, prec: int = DEFAULT_PREC) -> SaddleSolution:
    with _work(prec):
        sol = saddle_2conn(y, prec)
        tau, d = solve_tau_sp(sol.y, prec)
        sol.tau, sol.D_at_tau = tau, d
        sol.rho = sp_Psi(tau, d)
        sol.residuals["T(tau,D)"] = abs(tau_poly(tau, d))
        sol.residuals["network(tau,D)"] = abs(network_residual(tau, d, sol.y))
        return sol


def rho_and_expansion_sp(y=1, prec: int = DEFAULT_PREC) -> ExpansionConstants:
    """rho(y), the expansions of F, C, G at rho and the amplitudes c, g (and b)."""
    with _work(prec):
        y = _num(y)
        R, ex = radius_2conn(y, prec)
        tau, d = solve_tau_sp(y, prec)
        rho = sp_Psi(tau, d)
        dd = network_dD_dx(tau, d)
        top = tau_poly_du(tau, d) + tau_poly_dd(tau, d) * dd
        bottom = (2 * tau * tau * d ** 3 + 4 * tau * d * d - 2) * (1 + tau * d)
        P2 = top / bottom * exp(tau * d * (tau * d * d - 2) / (2 * (1 + tau * d)))
        if not P2 < 0:
            raise SolverError("Psi'' must be negative at tau")
        # Psi as an explicit function of u through a jet of D(u, y)
        pj = sp_Psi(Jet.variable(tau, 2), _d_jet_in_u(tau, d, y, 2))
        ex.cross_checks["Psi'' closed form"] = _rel(P2, pj.derivative(2))
        ex.residuals["Psi'(tau)"] = abs(pj.derivative(1))
        ex.residuals["T(tau,D)"] = abs(tau_poly(tau, d))
        ex.residuals["network(tau,D)"] = abs(network_residual(tau, d, y))
        ex.F0 = tau
        ex.F1 = -sqrt(-2 * rho / P2)
        ex.S = sp_S_poly(tau, d)
        f1s = 2 * (1 - 2 * tau * d * d - tau * tau * d ** 3) / d * mpmath.sqrt(tau * (1 + tau * d) / ex.S)
        ex.cross_checks["|F1| S-form"] = _rel(abs(ex.F1), abs(f1s))
        _finish_connected(ex, tau, rho, sp_block_series(tau, d))
        ex.radius[ConnectivityLevel.BICONNECTED] = R
        return ex


def _finish_connected(ex: ExpansionConstants, tau, rho, b_at_tau):
    """C, G expansions and amplitudes from tau, rho, F1 and B(tau)."""
    ex.C0 = tau * (log(rho) - log(tau) + 1) + b_at_tau
    ex.C2 = -ex.F0
    # C' = F/x, so the X^3 coefficient of C is -(2 rho/3) F1/rho
    ex.C3 = -2 * ex.F1 / 3
    if not ex.C3 > 0:
        raise SolverError("C3 must be positive")
    ex.G0 = exp(ex.C0)
    ex.G2 = ex.G0 * ex.C2
    ex.G3 = ex.G0 * ex.C3
    amp = 3 * ex.C3 / (4 * mpmath.sqrt(mpmath.pi))
    ex.amplitude[ConnectivityLevel.CONNECTED] = amp
    ex.amplitude[ConnectivityLevel.ALL] = ex.G0 * amp
    ex.radius[ConnectivityLevel.CONNECTED] = rho
    ex.radius[ConnectivityLevel.ALL] = rho
    ex.gamma = 1 / rho


# -- outerplanar and K23-minor-free graphs -------------------------------------------------

def _k4_weight(family):
    return 1 if FamilyKind.parse(family) is FamilyKind.K23FREE else 0


def dissection_radius(y):
    """Smallest root of the radicand 1 - 2xy - 4y^2x + x^2y^2."""
    return (1 + 2 * y - 2 * sqrt(y * y + y)) / y


def dissection_radius_far(y):
    return (1 + 2 * y + 2 * sqrt(y * y + y)) / y


def _radicand(u, y):
    return 1 - 2 * u * y - 4 * y * y * u + u * u * y * y


def op_kernel(u, y, k4=0):
    """B'(u, y) for outerplanar blocks, plus K4 when k4 = 1."""
    out = (1 + u * y * (3 + 2 * y) - sqrt(_radicand(u, y))) / (4 * (1 + y))
    if k4:
        out = out + y ** 6 * u ** 3 / 6
    return out


def op_kernel_d1(u, y, k4=0):
    qu = -2 * y - 4 * y * y + 2 * u * y * y
    out = (y * (3 + 2 * y) - qu / (2 * sqrt(_radicand(u, y)))) / (4 * (1 + y))
    if k4:
        out = out + y ** 6 * u * u / 2
    return out


def op_kernel_d2(u, y, k4=0):
    Q = _radicand(u, y)
    qu = -2 * y - 4 * y * y + 2 * u * y * y
    out = -(2 * y * y / (2 * sqrt(Q)) - qu * qu / (4 * Q * sqrt(Q))) / (4 * (1 + y))
    if k4:
        out = out + y ** 6 * u
    return out


def op_blocks(u, y, k4=0):
    """B(u, y) = integral of B' from 0 to u, through the antiderivative of sqrt(Q)."""
    a, b, c = y * y, -2 * y - 4 * y * y, 1

    def prim(s):
        Q = a * s * s + b * s + c
        rq = sqrt(Q)
        return (2 * a * s + b) * rq / (4 * a) + (4 * a * c - b * b) / (8 * a * sqrt(a)) * log(-(2 * sqrt(a) * rq + 2 * a * s + b))

    integral = prim(u) - prim(0 * u)
    out = (u + u * u * y * (3 + 2 * y) / 2 - integral) / (4 * (1 + y))
    if k4:
        out = out + y ** 6 * u ** 4 / 24
    return out


def solve_tau_dissection(y, k4=0, prec: int = DEFAULT_PREC) -> mpf:
    """Root of 1 - u B''(u, y) in (0, R(y))."""
    with _work(prec):
        y = _num(y)
        R = dissection_radius(y)
        f = lambda u: 1 - u * op_kernel_d1(u, y, k4)
        df = lambda u: -(op_kernel_d1(u, y, k4) + u * op_kernel_d2(u, y, k4))
        return +safe_newton(f, df, mpf(0), R * (1 - mpf(2) ** -40))


def _solve_dissection_family(family, y, prec):
    family = FamilyKind.parse(family)
    k4 = _k4_weight(family)
    with _work(prec):
        y = _num(y)
        R = dissection_radius(y)
        R2 = dissection_radius_far(y)
        tau = solve_tau_dissection(y, k4, prec)
        if not 0 < tau < R:
            raise SolverError("tau outside (0, R)")
        bp = op_kernel(tau, y, k4)
        rho = tau * exp(-bp)
        P2 = -exp(-bp) * (op_kernel_d1(tau, y, k4) + tau * op_kernel_d2(tau, y, k4))
        if not P2 < 0:
            raise SolverError("Psi'' must be negative at tau")
        sol = SaddleSolution(family, y, R=R, tau=tau, rho=rho)
        sol.residuals["Psi'(tau)"] = abs(1 - tau * op_kernel_d1(tau, y, k4))
        ex = ExpansionConstants(family, y)
        ex.residuals.update(sol.residuals)
        ex.F0 = tau
        ex.F1 = -sqrt(-2 * rho / P2)
        b_tau = op_blocks(tau, y, k4)
        ex.cross_checks["B(tau) quadrature"] = _rel(b_tau, mpmath.quad(lambda s: op_kernel(s, y, k4), [0, tau]))
        pj = Jet.variable(tau, 2)
        ex.cross_checks["Psi'' jets"] = _rel(P2, (pj * exp(-op_kernel(pj, y, k4))).derivative(2))
        _finish_connected(ex, tau, rho, b_tau)
        # blocks: sqrt(Q) = y sqrt((R-x)(R2-x)) gives the X coefficient of B'
        bp1 = -y * sqrt(R * (R2 - R)) / (4 * (1 + y))
        ex.B3 = -2 * R / 3 * bp1
        ex.B0 = op_blocks(R, y, k4)
        ex.B2 = -R * op_kernel(R, y, k4)
        ex.amplitude[ConnectivityLevel.BICONNECTED] = 3 * ex.B3 / (4 * mpmath.sqrt(mpmath.pi))
        ex.radius[ConnectivityLevel.BICONNECTED] = R
        if y == 1 and not k4:
            roots = mpmath.polyroots([3, -28, 70, -58, 8], maxsteps=200, extraprec=2 * mpmath.mp.prec)
            quartic = min(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpf(10) ** -20 and mpmath.re(r) > 0)
            ex.cross_checks["quartic root"] = _rel(tau, quartic)
            ex.cross_checks["R = 3 - 2 sqrt 2"] = _rel(R, 3 - 2 * mpmath.sqrt(2))
        return sol, ex


def solve_outerplanar(y=1, prec: int = DEFAULT_PREC):
    """(SaddleSolution, ExpansionConstants) for outerplanar graphs."""
    return _solve_dissection_family(FamilyKind.OUTERPLANAR, y, prec)


def solve_k23(y=1, prec: int = DEFAULT_PREC):
    """(SaddleSolution, ExpansionConstants) for K23-minor-free graphs."""
    return _solve_dissection_family(FamilyKind.K23FREE, y, prec)


def expansion(family, y=1, prec: int = DEFAULT_PREC) -> ExpansionConstants:
    family = FamilyKind.parse(family)
    if family is FamilyKind.SP:
        return rho_and_expansion_sp(y, prec)
    return _solve_dissection_family(family, y, prec)[1]


# -- edge laws ------------------------------------------------------------------------

def radius_function(family, level):
    """Scalar map y -> dominant singularity for a family and level."""
    family = FamilyKind.parse(family)
    level = ConnectivityLevel.parse(level)
    if level is ConnectivityLevel.BICONNECTED:
        if family is FamilyKind.SP:
            return lambda y, prec: q(solve_t(y, prec))
        return lambda y, prec: dissection_radius(_num(y))
    if family is FamilyKind.SP:
        return lambda y, prec: sp_Psi(*solve_tau_sp(y, prec))
    k4 = _k4_weight(family)
    return lambda y, prec: _rho_dissection(y, k4, prec)


def _rho_dissection(y, k4, prec):
    with _work(prec):
        y = _num(y)
        tau = solve_tau_dissection(y, k4, prec)
        return tau * exp(-op_kernel(tau, y, k4))


def radius_jet(family, level, y0=1, order=2, prec: int = DEFAULT_PREC) -> Jet:
    """Taylor jet of the dominant singularity in y around y0."""
    family = FamilyKind.parse(family)
    level = ConnectivityLevel.parse(level)
    with _work(prec):
        y0 = _num(y0)
        yj = Jet.variable(y0, order)
        if level is ConnectivityLevel.BICONNECTED:
            if family is FamilyKind.SP:
                return q(t_jet(y0, order, prec))
            return dissection_radius(yj)
        if family is FamilyKind.SP:
            tau, d = solve_tau_sp(y0, prec)
            tj, dj = newton_jets(lambda xs, p: [tau_poly(xs[0], xs[1]), network_residual(xs[0], xs[1], p)],
                                 [tau, d], order, yj)
            return sp_Psi(tj, dj)
        k4 = _k4_weight(family)
        tau = solve_tau_dissection(y0, k4, prec)
        tj = newton_jets(lambda xs, p: [1 - xs[0] * op_kernel_d1(xs[0], p, k4)], [tau], order, yj)[0]
        return tj * exp(-op_kernel(tj, yj, k4))


def _sp_rho_derivatives_implicit(y0, prec):
    """rho'(y0), tau'(y0), rho''(y0) by implicit differentiation (no jets in y of tau)."""
    y0 = _num(y0)
    tau, d = solve_tau_sp(y0, prec)
    rho = sp_Psi(tau, d)

    def psi_y(u, dval, y):
        # dPsi/dy at fixed u, with D = D(u, y)
        return -sp_Psi(u, dval) * _kernel_dD(u, dval) * network_dD_dy(u, dval, y)

    d1 = psi_y(tau, d, y0)
    # tau' from d/dy T(tau(y), D(tau(y), y)) = 0
    du, dy = network_dD_dx(tau, d), network_dD_dy(tau, d, y0)
    dtau = -tau_poly_dd(tau, d) * dy / (tau_poly_du(tau, d) + tau_poly_dd(tau, d) * du)
    # mixed and pure second partials of Psi
    dj_u = _d_jet_in_u(tau, d, y0, 1)
    psi_xy = psi_y(Jet.variable(tau, 1), dj_u, y0).c[1]
    dj_y = _d_jet_in_y(tau, d, y0, 1)
    psi_yy = psi_y(tau, dj_y, Jet.variable(y0, 1)).c[1]
    d2 = psi_xy * dtau + psi_yy
    return rho, d1, dtau, d2


def _kernel_dD(u, d):
    """dB'/dD at (u, D) for jets (product rule written out)."""
    ud = u * d
    # B' = ud(2 - u d^2) / (2(1+ud)) = (2ud - u^2 d^3) / (2 + 2ud)
    num = 2 * ud - u * u * d ** 3
    den = 2 + 2 * ud
    dnum = 2 * u - 3 * u * u * d * d
    dden = 2 * u
    return (dnum * den - num * dden) / (den * den)


def edge_law(family, level, prec: int = DEFAULT_PREC, y0=1) -> LawReport:
    """Mean and variance constants of the edge count from r(y), r = R or rho.

    kappa = -r'/r and lambda = -r''/r - r'/r + (r'/r)^2 at y0.
    """
    family = FamilyKind.parse(family)
    level = ConnectivityLevel.parse(level)
    with _work(prec):
        y0 = _num(y0)
        rj = radius_jet(family, level, y0, 2, prec)
        r, d1, d2 = rj.c[0], rj.derivative(1), rj.derivative(2)
        h = mpf(2) ** -40
        fun = radius_function(family, level)
        d1_fd, d2_fd = _fd(lambda yy: fun(yy, prec), y0, h)
        kappa = -d1 / r
        lam = -d2 / r - d1 / r + (d1 / r) ** 2
        if not lam > 0:
            raise SolverError("variance constant must be positive")
        rep = LawReport(family, level, kappa, lam, r, d1, d2, d1_fd, d2_fd)
        if level is ConnectivityLevel.BICONNECTED and family is FamilyKind.SP:
            t = solve_t(y0, prec)
            rep.routes["R' = q'(t)/Y'(t)"] = _rel(d1, dq(t) / dY(t))
        if level is not ConnectivityLevel.BICONNECTED and family is FamilyKind.SP:
            rho, p1, dtau, p2 = _sp_rho_derivatives_implicit(y0, prec)
            rep.dtau = dtau
            rep.routes["rho' implicit"] = _rel(d1, p1)
            rep.routes["rho'' implicit"] = _rel(d2, p2)
            tau_j = newton_jets(lambda xs, p: [tau_poly(xs[0], xs[1]), network_residual(xs[0], xs[1], p)],
                                list(solve_tau_sp(y0, prec)), 1, Jet.variable(y0, 1))[0]
            rep.routes["tau' jets"] = _rel(dtau, tau_j.c[1])
        if level is not ConnectivityLevel.BICONNECTED and family is not FamilyKind.SP:
            k4 = _k4_weight(family)
            tau = solve_tau_dissection(y0, k4, prec)
            tj = newton_jets(lambda xs, p: [1 - xs[0] * op_kernel_d1(xs[0], p, k4)], [tau], 1, Jet.variable(y0, 1))[0]
            rep.dtau = tj.c[1]
            # rho' = dPsi/dy at fixed u = tau
            rep.routes["rho' = Psi_y"] = _rel(d1, -tau * exp(-op_kernel(tau, y0, k4)) * _partial(lambda yy: op_kernel(tau, yy, k4), y0))
        return rep


def component_law(family, prec: int = DEFAULT_PREC):
    """(C0, exp(-C0)): parameter of the shifted Poisson law and connectivity probability."""
    ex = expansion(family, 1, prec)
    with _work(prec):
        return +ex.C0, +exp(-ex.C0)


PLANAR_REFERENCE = ("27.2268", "2.2132")


def summary_table(prec: int = DEFAULT_PREC) -> list:
    """Rows (family, growth constant, expected edges per vertex, status)."""
    rows = []
    for fam in (FamilyKind.SP, FamilyKind.OUTERPLANAR, FamilyKind.K23FREE):
        ex = expansion(fam, 1, prec)
        law = edge_law(fam, ConnectivityLevel.ALL, prec)
        rows.append((fam.value, ex.gamma, law.kappa, "computed"))
    rows.append(("planar", mpf(PLANAR_REFERENCE[0]), mpf(PLANAR_REFERENCE[1]), "reference-only"))
    return rows
