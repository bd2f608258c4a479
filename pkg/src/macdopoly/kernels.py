"""Scaled Macdonald kernel rho_nu, Tricomi function, weight and its laws.

rho_nu(x) = 2 x^(nu/2) K_nu(2 sqrt x) = int_0^inf y^(nu-1) e^(-y - x/y) dy.

Three evaluation routes are kept side by side (Laplace-type quadrature,
Bessel-K, and the three-term index recurrence) so that each can serve as an
independent oracle for the others.  The weight omega(x) = x^alpha e^(-lam x)
rho_nu(x t) carries closed-form first and second derivatives through
D rho_nu(x) = -rho_(nu-1)(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .precision import PrecisionContext, Params, DomainError, working_precision
from .numerics import gamma_fn

__all__ = [
    "KernelPoint",
    "WeightPoint",
    "rho_eval",
    "rho_recurrence_residual",
    "rho_derivative_check",
    "tricomi_psi",
    "weight_eval",
    "weight_ode_residual",
    "ismail_quotient_check",
    "laguerre_product_check",
    "fractional_integral_check",
    "laguerre_coefficients",
]

_RHO_ROUTES = ("laplace-integral", "bessel-k", "recurrence")

_rho_cache: dict = {}


@dataclass(frozen=True)
class KernelPoint:
    nu: mp.mpf
    x: mp.mpf
    value: mp.mpf
    route: str


@dataclass(frozen=True)
class WeightPoint:
    params: Params
    x: mp.mpf
    omega: mp.mpf
    omega_d1: mp.mpf
    omega_d2: mp.mpf


def _exp_budget(dps: int) -> float:
    return dps * math.log(10) + 60.0


def _rho_laplace(nu: mp.mpf, x: mp.mpf, dps: int) -> mp.mpf:
    """Laplace-type integral for rho_nu after u = e^s; tanh-sinh on the line.

    The float proxy of the exponent gates each node: once the exponent is
    below the precision budget the node contributes exact zero, which also
    keeps gmp exponents bounded.
    """
    budget = _exp_budget(dps)
    nu_f = float(nu)
    x_f = float(x)

    def g(s):
        sf = float(s)
        if not math.isfinite(sf) or abs(sf) > 700.0:
            return mp.mpf(0)
        w = nu_f * sf - math.exp(min(sf, 700.0)) - x_f * math.exp(min(-sf, 700.0))
        if w < -budget:
            return mp.mpf(0)
        return mp.exp(nu * s - mp.exp(s) - x * mp.exp(-s))

    # small x stretches the integrand plateau over ~log(1/x) octaves; let the
    # quadrature's own error estimate decide whether more depth is needed
    val = None
    for maxdeg in (8, 11):
        val, err = mp.quad(g, [mp.mpf("-inf"), mp.mpf("+inf")], error=True,
                           maxdegree=maxdeg)
        if err <= abs(val) * mp.mpf(10) ** (-dps + 5):
            break
    else:
        raise ArithmeticError(
            f"rho quadrature stalled at relative error "
            f"{mp.nstr(err / max(abs(val), mp.mpf(1)), 5)}"
        )
    return val


def rho_eval(nu, x, ctx: PrecisionContext, route: str = "laplace-integral") -> mp.mpf:
    """rho_nu(x) for x > 0; any real nu (the integral converges for x > 0).

    route selects the evaluation path: 'laplace-integral' (default),
    'bessel-k' (2 x^(nu/2) K_nu(2 sqrt x)), or 'recurrence' (index
    recurrence applied to two Laplace evaluations of lower order).
    """
    if route not in _RHO_ROUTES:
        raise DomainError(f"unknown rho route {route!r}")
    with working_precision(ctx):
        nu = mp.mpf(nu)
        x = mp.mpf(x)
        if x <= 0:
            raise DomainError(f"rho_nu requires x > 0, got x={x}")
        key = (nu._mpf_, x._mpf_, ctx.digits, route)
        if key in _rho_cache:
            return +_rho_cache[key]
        if route == "laplace-integral":
            val = _rho_laplace(nu, x, ctx.digits)
        elif route == "bessel-k":
            val = 2 * x ** (nu / 2) * mp.besselk(nu, 2 * mp.sqrt(x))
        else:
            # rho_nu = (nu-1) rho_(nu-1) + x rho_(nu-2)
            val = (nu - 1) * _rho_laplace(nu - 1, x, ctx.digits) + x * _rho_laplace(
                nu - 2, x, ctx.digits
            )
        val = +val
        _rho_cache[key] = val
        return val


def kernel_point(nu, x, ctx: PrecisionContext, route: str = "laplace-integral") -> KernelPoint:
    with working_precision(ctx):
        return KernelPoint(mp.mpf(nu), mp.mpf(x), rho_eval(nu, x, ctx, route), route)


def rho_recurrence_residual(nu, x, ctx: PrecisionContext) -> mp.mpf:
    """Residual of rho_(nu+1) - nu rho_nu - x rho_(nu-1) (should vanish)."""
    with working_precision(ctx):
        nu = mp.mpf(nu)
        x = mp.mpf(x)
        return (
            rho_eval(nu + 1, x, ctx)
            - nu * rho_eval(nu, x, ctx)
            - x * rho_eval(nu - 1, x, ctx)
        )


def rho_derivative_check(nu, n: int, x, ctx: PrecisionContext) -> mp.mpf:
    """Residual of the n-th finite-difference derivative of rho_nu against
    (-1)^n rho_(nu-n).  n in {1, 2, 3}."""
    if n not in (1, 2, 3):
        raise DomainError("derivative order must be 1, 2 or 3")
    with working_precision(ctx):
        nu = mp.mpf(nu)
        x = mp.mpf(x)
        # step balancing truncation O(h^2) vs cancellation O(10^-d / h^n)
        h = mp.mpf(10) ** (-mp.mpf(ctx.digits) / (n + 2))

        def f(u):
            return rho_eval(nu, u, ctx)

        if n == 1:
            fd = (f(x + h) - f(x - h)) / (2 * h)
        elif n == 2:
            fd = (f(x + h) - 2 * f(x) + f(x - h)) / h**2
        else:
            fd = (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (
                2 * h**3
            )
        return fd - (-1) ** n * rho_eval(nu - n, x, ctx)


_psi_cache: dict = {}


def tricomi_psi(a, b, z, ctx: PrecisionContext) -> mp.mpf:
    """Tricomi confluent function Psi(a, b; z) for a > 0, z > 0.

    Integral representation Psi(a,b;z) = (1/Gamma(a)) int_0^inf e^(-z u)
    u^(a-1) (1+u)^(b-a-1) du; valid for all real b, including the integer b
    where the two-Kummer-series formula degenerates.
    """
    with working_precision(ctx):
        a = mp.mpf(a)
        b = mp.mpf(b)
        z = mp.mpf(z)
        if a <= 0:
            raise DomainError(f"tricomi_psi requires a > 0, got a={a}")
        if z <= 0:
            raise DomainError(f"tricomi_psi requires z > 0, got z={z}")
        key = (a._mpf_, b._mpf_, z._mpf_, ctx.digits)
        if key in _psi_cache:
            return +_psi_cache[key]
        if z < mp.mpf("0.5") and abs(b - mp.nint(b)) > mp.mpf("1e-6"):
            # small z: the integrand's (1+v/z)^(b-a-1) shoulder spreads over
            # log(1/z) octaves and starves the quadrature, while the
            # two-Kummer form has no cancellation in this regime
            # reciprocal gammas absorb the degenerate cases where a + 1 - b
            # is a non-positive integer (the corresponding term vanishes)
            val = (
                mp.gamma(1 - b) * mp.rgamma(a + 1 - b) * mp.hyp1f1(a, b, z)
                + mp.gamma(b - 1) * mp.rgamma(a) * z ** (1 - b)
                * mp.hyp1f1(1 + a - b, 2 - b, z)
            )
            val = +val
            _psi_cache[key] = val
            return val
        budget = _exp_budget(ctx.digits)
        a_f, c_f = float(a), float(b - a - 1)
        log_z = float(mp.log(z))
        c = b - a - 1

        def log_proxy(sf: float) -> float:
            es = math.exp(min(sf, 700.0))
            r = sf - log_z
            log1p = c_f * (r if r > 700.0 else math.log1p(math.exp(min(r, 700.0))))
            return a_f * sf - es + log1p

        # the guard threshold is relative to the integrand peak, which can
        # sit far below unit scale (e.g. small z with b < a + 1)
        w_peak = max(log_proxy(0.25 * k) for k in range(-2800, 2801))
        cut = w_peak - budget

        # scaled form: Psi = z^(-a)/Gamma(a) int e^(-v) v^(a-1) (1+v/z)^c dv
        # with v = e^s; the peak stays at s = O(log a) uniformly in z
        def g(s):
            sf = float(s)
            if not math.isfinite(sf) or abs(sf) > 700.0:
                return mp.mpf(0)
            if log_proxy(sf) < cut:
                return mp.mpf(0)
            v = mp.exp(s)
            return mp.exp(a * s - v) * (1 + v / z) ** c

        # extreme z stretches the (1+v/z)^c shoulder over ~log(1/z) octaves,
        # so the tanh-sinh depth may need to grow; the quadrature's own
        # error estimate decides
        val = None
        for maxdeg in (10, 13):
            val, qerr = mp.quad(g, [mp.mpf("-inf"), mp.mpf("+inf")],
                                error=True, maxdegree=maxdeg)
            if qerr <= abs(val) * mp.mpf(10) ** (-ctx.digits + 5):
                break
        else:
            raise ArithmeticError(
                f"Tricomi quadrature stalled at relative error "
                f"{mp.nstr(qerr / max(abs(val), mp.mpf(1)), 5)}"
            )
        val = val * z ** (-a) / mp.gamma(a)
        val = +val
        _psi_cache[key] = val
        return val


def weight_eval(params: Params, x, ctx: PrecisionContext) -> WeightPoint:
    """Weight omega(x) = x^alpha e^(-lam x) rho_nu(x t) with closed-form
    first and second derivatives (no finite differences)."""
    with working_precision(ctx):
        x = mp.mpf(x)
        if x <= 0:
            raise DomainError(f"weight requires x > 0, got x={x}")
        al, nu, lam, t = params.alpha, params.nu, params.lam, params.t
        E = mp.exp(-lam * x)
        if t == 0:
            g = gamma_fn(nu, ctx)
            omega = g * x**al * E
            d1 = g * E * (al * x ** (al - 1) - lam * x**al)
            d2 = g * E * (
                al * (al - 1) * x ** (al - 2)
                - 2 * al * lam * x ** (al - 1)
                + lam**2 * x**al
            )
            return WeightPoint(params, x, +omega, +d1, +d2)
        r0 = rho_eval(nu, x * t, ctx)
        r1 = rho_eval(nu - 1, x * t, ctx)
        r2 = rho_eval(nu - 2, x * t, ctx)
        omega = x**al * E * r0
        d1 = E * (al * x ** (al - 1) * r0 - lam * x**al * r0 - t * x**al * r1)
        d2 = E * (
            al * (al - 1) * x ** (al - 2) * r0
            - 2 * al * lam * x ** (al - 1) * r0
            + lam**2 * x**al * r0
            - 2 * al * t * x ** (al - 1) * r1
            + 2 * lam * t * x**al * r1
            + t**2 * x**al * r2
        )
        return WeightPoint(params, x, +omega, +d1, +d2)


def weight_ode_residual(params: Params, x, ctx: PrecisionContext) -> mp.mpf:
    """Residual of the second-order ODE satisfied by the weight:

    x^2 w'' - (2(alpha - lam x) + nu - 1) x w'
            + ((alpha - lam x)^2 + x(lam(1 - nu) - t) + alpha nu) w = 0.
    """
    if params.t == 0:
        raise DomainError("the weight ODE check requires t > 0")
    with working_precision(ctx):
        x = mp.mpf(x)
        al, nu, lam, t = params.alpha, params.nu, params.lam, params.t
        wp = weight_eval(params, x, ctx)
        term2 = (2 * (al - lam * x) + nu - 1) * x * wp.omega_d1
        term1 = x**2 * wp.omega_d2
        term3 = ((al - lam * x) ** 2 + x * (lam * (1 - nu) - t) + al * nu) * wp.omega
        return term1 - term2 + term3


def weight_ode_scale(params: Params, x, ctx: PrecisionContext) -> mp.mpf:
    """max |term| of the ODE at (params, x) -- the natural residual scale."""
    with working_precision(ctx):
        x = mp.mpf(x)
        al, nu, lam, t = params.alpha, params.nu, params.lam, params.t
        wp = weight_eval(params, x, ctx)
        terms = (
            x**2 * wp.omega_d2,
            (2 * (al - lam * x) + nu - 1) * x * wp.omega_d1,
            ((al - lam * x) ** 2 + x * (lam * (1 - nu) - t) + al * nu) * wp.omega,
        )
        return max(abs(v) for v in terms)


def ismail_quotient_check(nu, x, ctx: PrecisionContext | None = None):
    """Quotient rho_nu(x)/rho_(nu+1)(x) against its positive-measure integral
    over the Bessel modulus J^2 + Y^2 of order nu+1.

    The Bessel route runs at double precision (scipy); agreement is expected
    at the 1e-6 relative level only.  Returns (lhs, rhs).
    """
    import scipy.integrate
    import scipy.special

    ctx = ctx or PrecisionContext(digits=30, tol=1e-6, max_digits=60)
    with working_precision(ctx):
        nu = mp.mpf(nu)
        x = mp.mpf(x)
        if x <= 0:
            raise DomainError("ismail quotient requires x > 0")
        lhs = rho_eval(nu, x, ctx) / rho_eval(nu + 1, x, ctx)

    nu_f = float(nu)
    x_f = float(x)

    def integrand(s):
        # y = e^s; d y / y = ds removes the 1/y factor
        y = math.exp(s)
        z = 2.0 * math.sqrt(y)
        mod2 = scipy.special.jv(nu_f + 1, z) ** 2 + scipy.special.yv(nu_f + 1, z) ** 2
        return 1.0 / ((x_f + y) * mod2)

    total = 0.0
    abserr = 0.0
    for lo, hi in ((-60.0, -10.0), (-10.0, 0.0), (0.0, 10.0), (10.0, 60.0)):
        v, e = scipy.integrate.quad(integrand, lo, hi, limit=400)
        total += v
        abserr += e
    rhs = total / math.pi**2
    if abserr > 3e-7 * abs(rhs):
        raise ArithmeticError(
            f"ismail quadrature did not converge (err {abserr:.2e} on {rhs:.6e})"
        )
    return lhs, mp.mpf(rhs)


def laguerre_coefficients(n: int, nu, ctx: PrecisionContext) -> list:
    """Coefficients [c_0..c_n] of the associated Laguerre polynomial L_n^nu:
    c_k = (-1)^k binom(n+nu, n-k) / k!."""
    with working_precision(ctx):
        nu = mp.mpf(nu)
        out = []
        for k in range(n + 1):
            c = (-1) ** k * mp.binomial(n + nu, n - k) / mp.factorial(k)
            out.append(+c)
        return out


def laguerre_product_check(nu, n: int, x, ctx: PrecisionContext) -> mp.mpf:
    """Residual of ((-1)^n x^n / n!) rho_nu(x) - int_0^inf y^(nu+n-1)
    e^(-y - x/y) L_n^nu(y) dy."""
    if n < 0 or n > 8:
        raise DomainError("laguerre product check supports 0 <= n <= 8")
    with working_precision(ctx):
        nu = mp.mpf(nu)
        x = mp.mpf(x)
        coeffs = laguerre_coefficients(n, nu, ctx)
        budget = _exp_budget(ctx.digits)
        nu_f, x_f = float(nu), float(x)

        def g(s):
            sf = float(s)
            if not math.isfinite(sf) or abs(sf) > 700.0:
                return mp.mpf(0)
            w = (
                (nu_f + n) * sf
                - math.exp(min(sf, 700.0))
                - x_f * math.exp(min(-sf, 700.0))
            )
            if w < -budget:
                return mp.mpf(0)
            y = mp.exp(s)
            lag = mp.mpf(0)
            yk = mp.mpf(1)
            for c in coeffs:
                lag += c * yk
                yk *= y
            return mp.exp((nu + n) * s - mp.exp(s) - x * mp.exp(-s)) * lag

        integral, _ = mp.quad(g, [mp.mpf("-inf"), mp.mpf("+inf")], error=True)
        lhs = (-1) ** n * x**n / mp.factorial(n) * rho_eval(nu, x, ctx)
        return lhs - integral


def fractional_integral_check(nu, mu, x, ctx: PrecisionContext) -> mp.mpf:
    """Residual of the index law (I_-^nu rho_mu)(x) = rho_(nu+mu)(x) with
    (I_-^nu f)(x) = (1/Gamma(nu)) int_x^inf (s - x)^(nu-1) f(s) ds."""
    with working_precision(ctx):
        nu = mp.mpf(nu)
        mu = mp.mpf(mu)
        x = mp.mpf(x)
        if not (0 < nu <= 3 and 0 < mu <= 3):
            raise DomainError("fractional check supports nu, mu in (0, 3]")
        budget = _exp_budget(ctx.digits)
        nu_f, x_f = float(nu), float(x)

        # substitute s = x + u, u = e^r; evaluate rho_mu by the fast
        # Bessel-K route so both sides stay independent of the Laplace route
        def g(r):
            rf = float(r)
            if not math.isfinite(rf) or abs(rf) > 700.0:
                return mp.mpf(0)
            u_f = math.exp(rf)
            w = nu_f * rf - 2.0 * math.sqrt(x_f + u_f)
            if w < -budget:
                return mp.mpf(0)
            u = mp.exp(r)
            return u**nu * rho_eval(mu, x + u, ctx, route="bessel-k")

        integral, _ = mp.quad(g, [mp.mpf("-inf"), mp.mpf("+inf")], error=True)
        lhs = integral / mp.gamma(nu)
        return lhs - rho_eval(nu + mu, x, ctx)
