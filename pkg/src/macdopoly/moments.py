"""Moment sequence of the weight x^alpha e^(-lam x) rho_nu(x t).

Closed form (primary source):
    mu_n = lam^(-nu-alpha-n-1) t^nu Gamma(n+nu+alpha+1) Gamma(n+alpha+1)
           * Psi(1+n+alpha+nu, 1+nu; t/lam)                 (lam, t > 0)
    mu_n = Gamma(nu) Gamma(n+alpha+1) lam^(-(n+alpha+1))    (t = 0)
    mu_n = t^(-(n+alpha+1)) Gamma(n+alpha+1) Gamma(n+alpha+nu+1)   (lam = 0)

Quadrature of the defining integral is the verification oracle, evaluated
through the Bessel-K route of rho so the two paths share no code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp

from .precision import (
    PrecisionContext,
    Params,
    DomainError,
    EscalationError,
    working_precision,
)
from .kernels import rho_eval, tricomi_psi, _exp_budget

__all__ = [
    "MomentTable",
    "moment_closed_form",
    "moment_quadrature",
    "build_moment_table",
    "weighted_power_integral",
    "hankel_matrix",
]


@dataclass(frozen=True)
class MomentTable:
    params: Params
    N: int
    mu: tuple  # mu_0 .. mu_(2N)
    source: str  # closed-form | quadrature | mellin-lam0 | gamma-t0

    def hankel(self, shift: int = 0) -> mp.matrix:
        """Hankel matrix [mu_(i+j+shift)]; size N+1 unshifted, N for the
        shifted variant (so indices stay within mu_0..mu_2N)."""
        n = self.N + 1 - shift
        H = mp.matrix(n)
        for i in range(n):
            for j in range(n):
                H[i, j] = self.mu[i + j + shift]
        return H


def weighted_power_integral(c, d, lam, t, ctx: PrecisionContext) -> mp.mpf:
    """int_0^inf u^(c-1) e^(-u) (lam u + t)^(-d) du for c > 0.

    Equals lam^(-d) (t/lam)^(c-d) Gamma(c) Psi(c, c+1-d; t/lam) for lam > 0
    and t^(-d) Gamma(c) at lam = 0.  This is the closed form behind both the
    moment formula and the composition-side term integrals.
    """
    with working_precision(ctx):
        c = mp.mpf(c)
        d = mp.mpf(d)
        lam = mp.mpf(lam)
        t = mp.mpf(t)
        if c <= 0:
            raise DomainError(f"weighted_power_integral requires c > 0, got {c}")
        if lam == 0:
            if t <= 0:
                raise DomainError("lam = 0 requires t > 0")
            return +(t ** (-d) * mp.gamma(c))
        if t == 0:
            # (lam u)^(-d): plain gamma integral, needs c > d for convergence
            if not c > d:
                raise DomainError("t = 0 requires c > d")
            return +(lam ** (-d) * mp.gamma(c - d))
        z = t / lam
        return +(lam ** (-d) * z ** (c - d) * mp.gamma(c) * tricomi_psi(c, c + 1 - d, z, ctx))


def moment_closed_form(n: int, params: Params, ctx: PrecisionContext) -> mp.mpf:
    """mu_n by the Tricomi-function closed form (lam > 0, t > 0)."""
    if params.lam <= 0 or params.t <= 0:
        raise DomainError("closed form requires lam > 0 and t > 0")
    with working_precision(ctx):
        al, nu, lam, t = params.alpha, params.nu, params.lam, params.t
        n = mp.mpf(int(n))
        # log space for the Gamma product; exponentiated once
        logpre = (
            -(nu + al + n + 1) * mp.log(lam)
            + nu * mp.log(t)
            + mp.loggamma(n + nu + al + 1)
            + mp.loggamma(n + al + 1)
        )
        psi = tricomi_psi(1 + n + al + nu, 1 + nu, t / lam, ctx)
        return +(mp.exp(logpre) * psi)


def _moment_limit_formula(n: int, params: Params, ctx: PrecisionContext) -> mp.mpf:
    with working_precision(ctx):
        al, nu, lam, t = params.alpha, params.nu, params.lam, params.t
        n = mp.mpf(int(n))
        if t == 0:
            return +(mp.gamma(nu) * mp.gamma(n + al + 1) * lam ** (-(n + al + 1)))
        if lam == 0:
            return +(
                t ** (-(n + al + 1)) * mp.gamma(n + al + 1) * mp.gamma(n + al + nu + 1)
            )
        raise DomainError("limit formula applies only at t = 0 or lam = 0")


def moment_quadrature(n: int, params: Params, ctx: PrecisionContext) -> mp.mpf:
    """mu_n = int_0^inf e^(-lam x) rho_nu(x t) x^(n+alpha) dx by direct
    quadrature (rho through the Bessel-K route)."""
    with working_precision(ctx):
        al, nu, lam, t = params.alpha, params.nu, params.lam, params.t
        p = mp.mpf(int(n)) + al
        budget = _exp_budget(ctx.digits)
        p_f, lam_f, t_f, nu_f = float(p), float(lam), float(t), float(nu)
        gamma_nu = mp.gamma(nu) if t == 0 else None

        def g(s):
            sf = float(s)
            if not math.isfinite(sf) or abs(sf) > 700.0:
                return mp.mpf(0)
            x_f = math.exp(sf)
            w = (p_f + 1) * sf - lam_f * x_f - 2.0 * math.sqrt(t_f * x_f)
            if w < -budget:
                return mp.mpf(0)
            x = mp.exp(s)
            val = mp.exp((p + 1) * s - lam * x)
            if t == 0:
                return val * gamma_nu
            return val * rho_eval(nu, x * t, ctx, route="bessel-k")

        val, err = mp.quad(g, [mp.mpf("-inf"), mp.mpf("+inf")], error=True, maxdegree=10)
        if err > ctx.tol_mp() * max(abs(val), mp.mpf(1)):
            if ctx.can_escalate:
                return moment_quadrature(n, params, ctx.escalated())
            raise EscalationError(
                f"moment quadrature stalled (err {mp.nstr(err, 5)})", last_value=val
            )
        return +val


_table_cache: dict = {}


def build_moment_table(params: Params, N: int, ctx: PrecisionContext) -> MomentTable:
    """Moments mu_0..mu_(2N) with Hankel positive-definiteness asserted.

    Uses the closed form when lam, t > 0 and the applicable limit formula on
    the axes; escalates precision if the Hankel Cholesky fails.
    """
    if N < 0 or N > 24:
        raise DomainError("moment table supports 0 <= N <= 24")
    key = (params.key(), N, ctx.digits)
    if key in _table_cache:
        return _table_cache[key]
    while True:
        if params.lam > 0 and params.t > 0:
            source = "closed-form"
            mu = [moment_closed_form(n, params, ctx) for n in range(2 * N + 1)]
        elif params.t == 0:
            source = "gamma-t0"
            mu = [_moment_limit_formula(n, params, ctx) for n in range(2 * N + 1)]
        else:
            source = "mellin-lam0"
            mu = [_moment_limit_formula(n, params, ctx) for n in range(2 * N + 1)]
        with working_precision(ctx):
            if any(m <= 0 for m in mu):
                raise ArithmeticError("moment sequence is not positive")
        table = MomentTable(params, N, tuple(mu), source)
        if _hankel_is_pd(table, ctx):
            _table_cache[key] = table
            return table
        if not ctx.can_escalate:
            raise ArithmeticError(
                f"Hankel matrix not positive definite at {ctx.digits} digits: "
                "moments are inaccurate or N too large"
            )
        ctx = ctx.escalated()


def hankel_matrix(table: MomentTable, shift: int = 0) -> mp.matrix:
    return table.hankel(shift)


def _hankel_is_pd(table: MomentTable, ctx: PrecisionContext) -> bool:
    with working_precision(ctx):
        for shift in (0, 1):
            try:
                mp.cholesky(table.hankel(shift))
            except ValueError:
                return False
    return True
