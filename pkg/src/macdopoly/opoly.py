"""Orthonormal polynomial construction from the moment table.

The coefficient matrix is the inverse transpose of the Hankel Cholesky
factor: with H = L L^T, the rows of L^(-1) are the coefficient vectors of
the orthonormal polynomials, and the leading coefficients 1/L_nn are
positive by construction (the a_n > 0 sign convention used throughout).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import mpmath as mp

from .precision import (
    PrecisionContext,
    Params,
    DomainError,
    EscalationError,
    working_precision,
)
from .moments import MomentTable, build_moment_table

__all__ = [
    "RecurrenceTable",
    "GaussRule",
    "build_recurrence",
    "eval_poly",
    "christoffel_darboux",
    "gauss_rule",
    "normalization_integrals",
    "orthonormality_residual",
    "table_to_dict",
    "rule_to_dict",
]


@dataclass(frozen=True)
class RecurrenceTable:
    """Orthonormal polynomials P_0..P_N for a Params point.

    coeffs[n][k] is the coefficient of x^k in P_n.  a[n], b[n], d[n] are the
    coefficients of x^n, x^(n-1), x^(n-2) (b[0] = d[0] = d[1] = 0 by
    convention).  A[n] = a_(n-1)/a_n for 1 <= n <= N, B[n] = b_n/a_n -
    b_(n+1)/a_(n+1) for 0 <= n <= N-1.
    """

    params: Params
    N: int
    moments: MomentTable
    coeffs: tuple  # tuple of tuples
    a: tuple
    b: tuple
    d: tuple
    a0const: tuple  # constant terms a_(n,0)
    A: tuple  # index 0 unused (None); A[n] for n >= 1
    B: tuple
    digits: int

    def coeff_vec(self, n: int) -> list:
        return list(self.coeffs[n])


@dataclass(frozen=True)
class GaussRule:
    params: Params
    N: int
    nodes: tuple
    weights: tuple
    digits: int


_rec_cache: dict = {}


def cached_recurrence(params: Params, N: int, ctx: PrecisionContext) -> RecurrenceTable:
    """build_recurrence with memoization on (params, N, digits).

    Parameter-derivative grids hit the same point many times; tables are
    immutable, so sharing is safe.
    """
    key = (params.key(), N, ctx.digits)
    rec = _rec_cache.get(key)
    if rec is None:
        rec = build_recurrence(params, N, ctx)
        _rec_cache[key] = rec
    return rec


def build_recurrence(
    params: Params, N: int, ctx: PrecisionContext, moments: MomentTable | None = None
) -> RecurrenceTable:
    """Construct P_0..P_N orthonormal for the weight; escalates precision
    until the moment-space orthonormality residual meets ctx.tol."""
    if N < 0:
        raise DomainError("N must be >= 0")
    base_ctx = ctx
    while True:
        table = moments if moments is not None and moments.N >= N else build_moment_table(
            params, N, ctx
        )
        rec = _build_from_moments(params, N, table, ctx)
        resid = orthonormality_residual(rec, ctx)
        if resid <= ctx.tol_mp():
            return rec
        if not ctx.can_escalate:
            raise EscalationError(
                f"orthonormality residual {mp.nstr(resid, 5)} above tol at "
                f"{ctx.digits} digits",
                last_value=resid,
            )
        ctx = ctx.escalated()
        moments = None  # rebuild at higher precision


def _build_from_moments(
    params: Params, N: int, table: MomentTable, ctx: PrecisionContext
) -> RecurrenceTable:
    with working_precision(ctx, extra=10 + 2 * N):
        n1 = N + 1
        H = mp.matrix(n1)
        for i in range(n1):
            for j in range(n1):
                H[i, j] = table.mu[i + j]
        L = mp.cholesky(H)
        # forward substitution for C = L^(-1) (lower triangular)
        C = mp.matrix(n1)
        for i in range(n1):
            C[i, i] = 1 / L[i, i]
            for j in range(i - 1, -1, -1):
                s = mp.mpf(0)
                for k in range(j, i):
                    s += L[i, k] * C[k, j]
                C[i, j] = -s / L[i, i]
        coeffs = tuple(tuple(+C[n, k] for k in range(n + 1)) for n in range(n1))
        a = tuple(coeffs[n][n] for n in range(n1))
        b = tuple(coeffs[n][n - 1] if n >= 1 else mp.mpf(0) for n in range(n1))
        d = tuple(coeffs[n][n - 2] if n >= 2 else mp.mpf(0) for n in range(n1))
        a0c = tuple(coeffs[n][0] for n in range(n1))
        A = (None,) + tuple(+(a[n - 1] / a[n]) for n in range(1, n1))
        B = tuple(+(b[n] / a[n] - b[n + 1] / a[n + 1]) for n in range(N))
        return RecurrenceTable(
            params, N, table, coeffs, a, b, d, a0c, A, B, ctx.digits
        )


def orthonormality_residual(rec: RecurrenceTable, ctx: PrecisionContext) -> mp.mpf:
    """max_(m,n) |int P_m P_n w dx - delta_mn| via exact moment combinations."""
    with working_precision(ctx):
        worst = mp.mpf(0)
        for m in range(rec.N + 1):
            for n in range(m, rec.N + 1):
                s = mp.mpf(0)
                for i, ci in enumerate(rec.coeffs[m]):
                    for j, cj in enumerate(rec.coeffs[n]):
                        s += ci * cj * rec.moments.mu[i + j]
                target = 1 if m == n else 0
                worst = max(worst, abs(s - target))
        return +worst


def eval_poly(
    rec: RecurrenceTable, n: int, x, ctx: PrecisionContext, route: str = "recurrence"
) -> mp.mpf:
    """P_n(x) by forward three-term recurrence (default) or direct Horner
    evaluation of the coefficient vector."""
    if n > rec.N:
        raise DomainError(f"n={n} exceeds table depth N={rec.N}")
    with working_precision(ctx):
        x = mp.mpf(x)
        if route == "coefficients":
            acc = mp.mpf(0)
            for c in reversed(rec.coeffs[n]):
                acc = acc * x + c
            return +acc
        if route != "recurrence":
            raise DomainError(f"unknown eval route {route!r}")
        p_prev = mp.mpf(0)
        p = mp.mpf(rec.a[0])  # P_0 = 1/sqrt(mu_0)
        if n == 0:
            return +p
        for k in range(n):
            # x P_k = A_(k+1) P_(k+1) + B_k P_k + A_k P_(k-1)
            A_next = rec.A[k + 1]
            p_next = ((x - rec.B[k]) * p - (rec.A[k] * p_prev if k >= 1 else 0)) / A_next
            p_prev, p = p, p_next
        return +p


def poly_weighted_moment(rec: RecurrenceTable, n: int, m: int, ctx: PrecisionContext) -> mp.mpf:
    """int P_n x^(alpha+m) w dx as the exact moment combination
    sum_k coeffs[n][k] mu_(k+m)."""
    if n > rec.N or m + n > 2 * rec.moments.N:
        raise DomainError("moment table too shallow for requested integral")
    with working_precision(ctx):
        s = mp.mpf(0)
        for k, c in enumerate(rec.coeffs[n]):
            s += c * rec.moments.mu[k + m]
        return +s


def poly_pair_weighted_moment(
    rec: RecurrenceTable, n1: int, n2: int, m: int, ctx: PrecisionContext
) -> mp.mpf:
    """int P_n1 P_n2 x^(alpha+m) w dx as an exact moment combination."""
    if n1 + n2 + m > 2 * rec.moments.N:
        raise DomainError("moment table too shallow for requested integral")
    with working_precision(ctx):
        s = mp.mpf(0)
        for i, ci in enumerate(rec.coeffs[n1]):
            for j, cj in enumerate(rec.coeffs[n2]):
                s += ci * cj * rec.moments.mu[i + j + m]
        return +s


def christoffel_darboux(
    rec: RecurrenceTable, n: int, x, y, ctx: PrecisionContext
) -> tuple[mp.mpf, mp.mpf]:
    """(sum form, quotient form) of the Christoffel-Darboux kernel at (x, y).

    Below |x - y| = 10^(-digits/2) the quotient form switches to the
    confluent (derivative) limit.
    """
    if n > rec.N - 1:
        raise DomainError("christoffel_darboux needs table depth n+1")
    with working_precision(ctx):
        x = mp.mpf(x)
        y = mp.mpf(y)
        sum_form = mp.mpf(0)
        for k in range(n + 1):
            sum_form += eval_poly(rec, k, x, ctx) * eval_poly(rec, k, y, ctx)
        A = rec.A[n + 1]
        if abs(x - y) < mp.mpf(10) ** (-ctx.digits // 2):
            # confluent: A_(n+1) (P'_(n+1)(x) P_n(x) - P'_n(x) P_(n+1)(x))
            dp1 = _eval_poly_derivative(rec, n + 1, x, ctx)
            dp0 = _eval_poly_derivative(rec, n, x, ctx)
            quotient = A * (
                dp1 * eval_poly(rec, n, x, ctx) - dp0 * eval_poly(rec, n + 1, x, ctx)
            )
        else:
            quotient = (
                A
                * (
                    eval_poly(rec, n + 1, x, ctx) * eval_poly(rec, n, y, ctx)
                    - eval_poly(rec, n, x, ctx) * eval_poly(rec, n + 1, y, ctx)
                )
                / (x - y)
            )
        return +sum_form, +quotient


def _eval_poly_derivative(rec: RecurrenceTable, n: int, x, ctx: PrecisionContext) -> mp.mpf:
    with working_precision(ctx):
        x = mp.mpf(x)
        acc = mp.mpf(0)
        for k in range(n, 0, -1):
            acc = acc * x + k * rec.coeffs[n][k]
        return +acc


def gauss_rule(rec: RecurrenceTable, N: int, ctx: PrecisionContext) -> GaussRule:
    """N-point Gauss rule from the symmetric tridiagonal (Jacobi) matrix;
    nodes are its eigenvalues, weights mu_0 times squared first eigenvector
    components."""
    if N < 1 or N > rec.N:
        raise DomainError(f"gauss_rule needs 1 <= N <= {rec.N}")
    with working_precision(ctx, extra=20):
        J = mp.matrix(N)
        for i in range(N):
            J[i, i] = rec.B[i]
            if i + 1 < N:
                J[i, i + 1] = rec.A[i + 1]
                J[i + 1, i] = rec.A[i + 1]
        E, Q = mp.eigsy(J)
        order = sorted(range(N), key=lambda i: E[i])
        nodes = []
        weights = []
        mu0 = rec.moments.mu[0]
        for i in order:
            node = +E[i]
            if node <= 0:
                raise ArithmeticError(f"Gauss node {mp.nstr(node, 8)} not positive")
            nodes.append(node)
            weights.append(+(mu0 * Q[0, i] ** 2))
        return GaussRule(rec.params, N, tuple(nodes), tuple(weights), ctx.digits)


def normalization_integrals(rec: RecurrenceTable, n: int, ctx: PrecisionContext) -> dict:
    """int P_n x^(alpha+n+i) w dx for i = 0, 1, 2 as exact moment
    combinations, paired with their coefficient-identity predictions
    1/a_n, -b_(n+1)/(a_(n+1) a_n) and
    b_(n+2) b_(n+1)/(a_(n+2) a_(n+1) a_n) - d_(n+2)/(a_(n+2) a_n)."""
    if n + 2 > rec.N:
        raise DomainError("normalization_integrals needs table depth n+2")
    with working_precision(ctx):
        a, b, d = rec.a, rec.b, rec.d
        out = {
            "i0": poly_weighted_moment(rec, n, n, ctx),
            "i0_pred": +(1 / a[n]),
            "i1": poly_weighted_moment(rec, n, n + 1, ctx),
            "i1_pred": +(-b[n + 1] / (a[n + 1] * a[n])),
            "i2": poly_weighted_moment(rec, n, n + 2, ctx),
            "i2_pred": +(
                b[n + 2] * b[n + 1] / (a[n + 2] * a[n + 1] * a[n])
                - d[n + 2] / (a[n + 2] * a[n])
            ),
        }
        return out


def _dec(v, digits: int) -> str:
    return mp.nstr(v, digits)


def table_to_dict(rec: RecurrenceTable) -> dict:
    """JSON-ready dict with decimal strings (floats never used)."""
    dg = rec.digits
    return {
        "params": {
            "alpha": _dec(rec.params.alpha, dg),
            "nu": _dec(rec.params.nu, dg),
            "lambda": _dec(rec.params.lam, dg),
            "t": _dec(rec.params.t, dg),
        },
        "N": rec.N,
        "digits": dg,
        "moments": [_dec(m, dg) for m in rec.moments.mu],
        "moment_source": rec.moments.source,
        "a": [_dec(v, dg) for v in rec.a],
        "b": [_dec(v, dg) for v in rec.b],
        "d": [_dec(v, dg) for v in rec.d],
        "a_const": [_dec(v, dg) for v in rec.a0const],
        "A": [None] + [_dec(v, dg) for v in rec.A[1:]],
        "B": [_dec(v, dg) for v in rec.B],
        "coefficients": [[_dec(c, dg) for c in row] for row in rec.coeffs],
    }


def rule_to_dict(rule: GaussRule) -> dict:
    dg = rule.digits
    return {
        "params": {
            "alpha": _dec(rule.params.alpha, dg),
            "nu": _dec(rule.params.nu, dg),
            "lambda": _dec(rule.params.lam, dg),
            "t": _dec(rule.params.t, dg),
        },
        "N": rule.N,
        "digits": dg,
        "nodes": [_dec(v, dg) for v in rule.nodes],
        "weights": [_dec(v, dg) for v in rule.weights],
    }
