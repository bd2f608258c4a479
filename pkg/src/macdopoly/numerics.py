"""Precision-managed elementary numerics.

Gamma/Pochhammer, quadrature over (0, inf), and high-order finite-difference
parameter derivatives.  The semi-infinite quadrature maps u = e^s and applies
tanh-sinh on the line; integrands are evaluated only at interior nodes and a
truncation guard keeps magnitudes out of the range where gmp exponent
arithmetic overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import mpmath as mp

from .precision import (
    PrecisionContext,
    DomainError,
    EscalationError,
    working_precision,
)

__all__ = [
    "QuadratureSpec",
    "gamma_fn",
    "log_gamma",
    "pochhammer",
    "integrate_semiline",
    "integrate_interval",
    "param_derivative",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature scheme selection for semi-infinite integrals.

    scheme: 'tanh-sinh' (default; u = e^s transform, tanh-sinh on the line)
    or 'truncated-composite-gauss' (composite Gauss-Legendre over the split
    points, with the last split point as truncation).

    sigma_hint: lower bound on the endpoint exponent sigma of the integrand
    (f ~ u^sigma as u -> 0+, sigma > -1); controls how far the e^s transform
    reaches toward u = 0.
    """

    scheme: str = "tanh-sinh"
    level: int = 6
    panels: int = 32
    split_points: tuple = ()
    sigma_hint: float = -0.9

    def __post_init__(self):
        if self.scheme not in ("tanh-sinh", "truncated-composite-gauss"):
            raise DomainError(f"unknown quadrature scheme {self.scheme!r}")


def gamma_fn(z, ctx: PrecisionContext) -> mp.mpf:
    """Gamma(z) to ctx.tol relative accuracy."""
    with working_precision(ctx):
        z = mp.mpf(z)
        if z <= 0 and z == mp.floor(z):
            raise DomainError(f"gamma pole at non-positive integer z={z}")
        return +mp.gamma(z)


def log_gamma(z, ctx: PrecisionContext) -> mp.mpf:
    """log Gamma(z) for z > 0."""
    with working_precision(ctx):
        z = mp.mpf(z)
        if z <= 0:
            raise DomainError(f"log_gamma requires z > 0, got z={z}")
        return +mp.loggamma(z)


def pochhammer(z, n: int, ctx: PrecisionContext) -> mp.mpf:
    """Rising factorial (z)_n."""
    with working_precision(ctx):
        return +mp.rf(mp.mpf(z), int(n))


def _line_window(digits: int, sigma_hint: float) -> tuple[float, float]:
    """Truncation window [-L1, L2] in s = log u.

    Right end: covers decay at least as slow as e^(-2 sqrt(u)); left end:
    covers endpoint behavior u^sigma with sigma >= sigma_hint.  Outside the
    window the integrand contributes below 10^-(digits+15) and is taken as 0.
    """
    budget = digits * math.log(10) + 60.0
    u_max = (0.5 * budget) ** 2 + 100.0
    L2 = math.log(u_max)
    # integrand * u ~ u^(sigma+1) near 0
    L1 = budget / max(sigma_hint + 1.0, 0.05)
    return L1, L2


def integrate_semiline(
    f: Callable[[mp.mpf], mp.mpf],
    spec: Optional[QuadratureSpec] = None,
    ctx: Optional[PrecisionContext] = None,
) -> tuple[mp.mpf, mp.mpf]:
    """Integrate f over (0, inf); returns (value, error estimate).

    f must be integrable with at worst an algebraic endpoint singularity
    u^sigma (sigma > -1) and exponential, or at least e^(-c sqrt(u)),
    decay at infinity.  Escalates precision until the error estimate meets
    ctx.tol (relative to the value when nonzero) or the cap is hit.
    """
    spec = spec or QuadratureSpec()
    ctx = ctx or PrecisionContext()
    while True:
        value, err = _integrate_once(f, spec, ctx)
        # relative when the value is large, absolute below unit scale
        scale = max(abs(value), mp.mpf(1))
        if err <= ctx.tol_mp() * scale:
            return value, err
        if not ctx.can_escalate:
            raise EscalationError(
                f"semi-line quadrature did not reach tol={ctx.tol} at "
                f"{ctx.digits} digits (err ~ {mp.nstr(err, 5)})",
                last_value=value,
            )
        ctx = ctx.escalated()


def _integrate_once(f, spec: QuadratureSpec, ctx: PrecisionContext):
    with working_precision(ctx):
        if spec.scheme == "tanh-sinh":
            L1, L2 = _line_window(ctx.digits, spec.sigma_hint)

            def g(s):
                sf = float(s)
                if sf < -L1 or sf > L2:
                    return mp.mpf(0)
                u = mp.exp(s)
                return f(u) * u

            # Infinite-interval tanh-sinh reaches the whole guard window in
            # log scale; outside it g returns exact zero.
            pts = [mp.mpf("-inf")]
            for p in spec.split_points:
                pts.append(mp.log(mp.mpf(p)))
            pts.append(mp.mpf("+inf"))
            value, err = mp.quad(g, pts, error=True, maxdegree=spec.level + 4)
            return +value, +err
        else:
            # truncated composite Gauss-Legendre; split points partition
            # (0, truncation]
            if not spec.split_points:
                raise DomainError(
                    "truncated-composite-gauss requires split points "
                    "(last one is the truncation)"
                )
            pts = [mp.mpf(0)] + [mp.mpf(p) for p in spec.split_points]
            total = mp.mpf(0)
            err = mp.mpf(0)
            for a, b in zip(pts[:-1], pts[1:]):
                v, e = _composite_gauss(f, a, b, spec.panels, ctx)
                total += v
                err += e
            return +total, +err


def _gauss_nodes(order: int):
    """Gauss-Legendre nodes/weights on [-1, 1] at current precision (cached
    per (order, prec))."""
    key = (order, mp.mp.prec)
    cache = _gauss_nodes.__dict__.setdefault("cache", {})
    if key not in cache:
        # roots of P_order via Newton on mp.legendre
        nodes = []
        weights = []
        n = order
        for i in range(1, n + 1):
            x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
            for _ in range(60):
                p = mp.legendre(n, x)
                dp = n * (x * mp.legendre(n, x) - mp.legendre(n - 1, x)) / (x**2 - 1)
                dx = p / dp
                x -= dx
                if abs(dx) < mp.mpf(10) ** (-mp.mp.dps + 2):
                    break
            dp = n * (x * mp.legendre(n, x) - mp.legendre(n - 1, x)) / (x**2 - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x**2) * dp**2))
        cache[key] = (nodes, weights)
    return cache[key]


def _composite_gauss(f, a, b, panels: int, ctx: PrecisionContext, order: int = 16):
    nodes, weights = _gauss_nodes(order)
    h = (b - a) / panels
    total = mp.mpf(0)
    for k in range(panels):
        lo = a + k * h
        mid = lo + h / 2
        half = h / 2
        for x, w in zip(nodes, weights):
            total += w * f(mid + half * x)
    total *= h / 2
    # error estimate: compare with doubled panel count
    fine = mp.mpf(0)
    h2 = h / 2
    for k in range(2 * panels):
        lo = a + k * h2
        mid = lo + h2 / 2
        half = h2 / 2
        for x, w in zip(nodes, weights):
            fine += w * f(mid + half * x)
    fine *= h2 / 2
    return fine, abs(fine - total)


def integrate_interval(
    f: Callable[[mp.mpf], mp.mpf],
    a,
    b,
    ctx: PrecisionContext,
    tol: Optional[float] = None,
) -> mp.mpf:
    """Finite-interval tanh-sinh integral to ctx.tol (or an explicit tol)."""
    target = mp.mpf(tol) if tol is not None else ctx.tol_mp()
    c = ctx
    while True:
        with working_precision(c):
            value, err = mp.quad(f, [mp.mpf(a), mp.mpf(b)], error=True)
        scale = max(abs(value), mp.mpf(1))
        if err <= target * scale:
            return value
        if not c.can_escalate:
            raise EscalationError(
                f"interval quadrature stalled at err ~ {mp.nstr(err, 5)}",
                last_value=value,
            )
        c = c.escalated()


def param_derivative(
    g: Callable[[mp.mpf], mp.mpf],
    at,
    ctx: PrecisionContext,
    order: int = 1,
    one_sided: bool = False,
) -> tuple[mp.mpf, mp.mpf]:
    """First derivative of g at `at` by central differences with one
    Richardson level; returns (value, error bound).

    Step h = 10^(-digits/3) balances truncation O(h^2) against cancellation
    O(10^-digits / h).  With one Richardson level the truncation term drops
    to O(h^4).  one_sided=True uses a forward stencil (for points at a
    domain boundary) with a degraded bound.
    """
    if order != 1:
        raise DomainError("only first derivatives are supported")
    with working_precision(ctx):
        at = mp.mpf(at)
        h = mp.mpf(10) ** (-mp.mpf(ctx.digits) / 3)
        if one_sided:
            # second-order forward stencils at h and h/2, Richardson in h^2
            def fwd(step):
                return (-3 * g(at) + 4 * g(at + step) - g(at + 2 * step)) / (2 * step)

            d1 = fwd(h)
            d2 = fwd(h / 2)
            value = (4 * d2 - d1) / 3
            bound = abs(d2 - d1) + mp.mpf(10) ** (-ctx.digits) / h
            return +value, +bound

        def central(step):
            return (g(at + step) - g(at - step)) / (2 * step)

        d1 = central(h)
        d2 = central(h / 2)
        value = (4 * d2 - d1) / 3
        bound = abs(d2 - d1) / 3 + mp.mpf(10) ** (-ctx.digits) / h
        return +value, +bound
