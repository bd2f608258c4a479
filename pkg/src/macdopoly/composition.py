"""Composition orthogonality under the operator theta = y D y.

The base function phi(y) = Gamma(1+alpha) y^alpha (lam y + t)^(-(alpha+1))
and all its theta-images live in the linear span of the terms

    T(j, k) = y^(alpha+j) (lam y + t)^(-(alpha+1+k)),   j, k >= 0,

on which theta acts by

    theta T(j, k) = (alpha+j+1) T(j+1, k) - (alpha+1+k) lam T(j+2, k+1).

A finite sum of such terms is held as a dict {(j, k): coefficient}, so the
operator polynomial P_n(theta/t) applied to theta^m{phi} is exact symbolic
algebra, and each term integrates against y^nu e^(-y) in closed form.
"""

from __future__ import annotations

import mpmath as mp

from .precision import PrecisionContext, Params, DomainError, working_precision
from .moments import weighted_power_integral
from .kernels import laguerre_coefficients
from .numerics import pochhammer
from .opoly import RecurrenceTable

__all__ = [
    "theta_monomial_check",
    "rodrigues_check",
    "base_function_check",
    "theta_apply",
    "term_sum_eval",
    "term_sum_integral",
    "composition_integral",
    "composition_orthogonality_check",
]


# ---------------------------------------------------------------------------
# term-sum algebra


def theta_apply(terms: dict, alpha, lam) -> dict:
    """Apply theta = y D y to a term sum {(j, k): c}."""
    out: dict = {}
    for (j, k), c in terms.items():
        key1 = (j + 1, k)
        out[key1] = out.get(key1, mp.mpf(0)) + c * (alpha + j + 1)
        key2 = (j + 2, k + 1)
        out[key2] = out.get(key2, mp.mpf(0)) - c * (alpha + 1 + k) * lam
    return out


def term_sum_eval(terms: dict, y, params: Params, ctx: PrecisionContext) -> mp.mpf:
    """Evaluate a term sum pointwise (cross-check route)."""
    with working_precision(ctx):
        y = mp.mpf(y)
        al, lam, t = params.alpha, params.lam, params.t
        total = mp.mpf(0)
        for (j, k), c in terms.items():
            total += c * y ** (al + j) * (lam * y + t) ** (-(al + 1 + k))
        return +total


def term_sum_integral(terms: dict, params: Params, ctx: PrecisionContext) -> mp.mpf:
    """int_0^inf y^nu e^(-y) * (term sum)(y) dy in closed form."""
    with working_precision(ctx):
        al, nu, lam, t = params.alpha, params.nu, params.lam, params.t
        total = mp.mpf(0)
        for (j, k), c in terms.items():
            total += c * weighted_power_integral(
                nu + al + j + 1, al + 1 + k, lam, t, ctx
            )
        return +total


def base_terms(params: Params, ctx: PrecisionContext) -> dict:
    """Gamma(1+alpha) T(0, 0), i.e. the base function phi."""
    with working_precision(ctx):
        return {(0, 0): mp.gamma(params.alpha + 1)}


# ---------------------------------------------------------------------------
# operator identities feeding the composition orthogonality


def theta_monomial_check(m: int, s, ctx: PrecisionContext) -> mp.mpf:
    """theta^m{y^s} = (s+1)_m y^(s+m) = y^m D^m {y^(s+m)} * y^... :
    compare the iterated-theta coefficient against the Pochhammer value and
    against the m-fold derivative route; returns the max relative residual."""
    with working_precision(ctx):
        s = mp.mpf(s)
        # iterated theta on a monomial tracked as (power, coeff)
        power, coeff = s, mp.mpf(1)
        for _ in range(m):
            coeff *= power + 1
            power += 1
        target = pochhammer(s + 1, m, ctx)
        r1 = abs(coeff - target) / abs(target)
        # y^m D^m y^m route evaluated at a generic point
        y0 = mp.mpf("1.37")
        dm = mp.diff(lambda y: y ** (s + m), y0, m)
        r2 = abs(y0**m * dm - target * y0 ** (s + m)) / abs(target * y0 ** (s + m))
        return +max(r1, r2)


def rodrigues_check(m: int, nu, y_points, ctx: PrecisionContext) -> mp.mpf:
    """m! y^(nu+m) e^(-y) L_m^nu(y) = theta^m { y^nu e^(-y) }.

    The left side uses explicit Laguerre coefficients; the right side tracks
    theta symbolically on sums c y^(nu+p) e^(-y), where
    theta{y^s e^(-y)} = (s+1) y^(s+1) e^(-y) - y^(s+2) e^(-y).
    Returns the maximal relative residual over y_points.
    """
    with working_precision(ctx):
        nu = mp.mpf(nu)
        terms = {0: mp.mpf(1)}  # {p: c} for c y^(nu+p) e^(-y)
        for _ in range(m):
            out: dict = {}
            for p, c in terms.items():
                out[p + 1] = out.get(p + 1, mp.mpf(0)) + c * (nu + p + 1)
                out[p + 2] = out.get(p + 2, mp.mpf(0)) - c
            terms = out
        lag = laguerre_coefficients(m, nu, ctx)
        worst = mp.mpf(0)
        for y in y_points:
            y = mp.mpf(y)
            rhs = sum(c * y ** (nu + p) for p, c in terms.items()) * mp.exp(-y)
            lval = sum(c * y**k for k, c in enumerate(lag))
            lhs = mp.factorial(m) * y ** (nu + m) * mp.exp(-y) * lval
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), mp.mpf(1)))
        return +worst


def base_function_check(params: Params, y_points, ctx: PrecisionContext) -> mp.mpf:
    """phi(y) = (1/y) int_0^inf e^(-x(lam + t/y)) x^alpha dx against the
    closed form; max relative residual over y_points."""
    if params.t <= 0:
        raise DomainError("t > 0 required")
    with working_precision(ctx):
        al, lam, t = params.alpha, params.lam, params.t
        worst = mp.mpf(0)
        for y in y_points:
            y = mp.mpf(y)
            # gamma integral: int e^(-c x) x^al dx = Gamma(al+1) c^(-al-1)
            c = lam + t / y
            lhs = mp.gamma(al + 1) * c ** (-(al + 1)) / y
            rhs = term_sum_eval(base_terms(params, ctx), y, params, ctx)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        return +worst


# ---------------------------------------------------------------------------
# the composition integral and its orthogonality


def composition_integral(rec: RecurrenceTable, n: int, m: int,
                         ctx: PrecisionContext) -> mp.mpf:
    """int_0^inf y^nu e^(-y) P_n(theta/t) theta^m { phi(y) } dy.

    theta^m{phi} is built first, then the operator polynomial P_n(theta/t)
    is applied term-sum-wise, and the result integrates in closed form.
    """
    p = rec.params
    if p.t <= 0:
        raise DomainError("composition orthogonality requires t > 0")
    with working_precision(ctx):
        al, lam, t = p.alpha, p.lam, p.t
        terms = base_terms(p, ctx)
        for _ in range(m):
            terms = theta_apply(terms, al, lam)
        coeffs = rec.coeffs[n]
        # accumulate sum_i c_i t^(-i) theta^i {terms}
        acc: dict = {}
        current = terms
        tpow = mp.mpf(1)
        for i, ci in enumerate(coeffs):
            w = ci / tpow
            for key, c in current.items():
                acc[key] = acc.get(key, mp.mpf(0)) + w * c
            if i + 1 < len(coeffs):
                current = theta_apply(current, al, lam)
                tpow *= t
        return term_sum_integral(acc, p, ctx)


def composition_orthogonality_check(rec: RecurrenceTable, n: int,
                                    ctx: PrecisionContext) -> dict:
    """Orthogonality ladder for degree n: the composition integral vanishes
    for m < n, equals 1/a_n at m = n, and for every m agrees with the
    x-side integral int P_n(x) e^(-lam x) rho_nu(x t) x^(alpha+m) dx
    evaluated through the moment table.

    Returns {'zero': max |integral| for m < n (relative to scale),
             'scale': normalization scale,
             'diag': |integral(m=n) - 1/a_n| / (1/a_n),
             'cross': max relative mismatch against the moment route}.
    """
    with working_precision(ctx):
        mu = rec.moments.mu
        scale = max(abs(rec.a[n]), 1 / abs(rec.a[n])) * max(
            abs(m) for m in mu[: 2 * n + 1]
        )
        zero = mp.mpf(0)
        cross = mp.mpf(0)
        for m in range(n + 1):
            val = composition_integral(rec, n, m, ctx)
            moment_side = sum(
                c * mu[k + m] for k, c in enumerate(rec.coeffs[n])
            )
            cross = max(cross, abs(val - moment_side) / max(abs(val), mp.mpf(1)))
            if m < n:
                zero = max(zero, abs(val))
        diag = composition_integral(rec, n, n, ctx)
        inv_an = 1 / rec.a[n]
        return {
            "zero": +(zero / scale),
            "scale": +scale,
            "diag": +(abs(diag - inv_an) / abs(inv_an)),
            "cross": +cross,
        }
