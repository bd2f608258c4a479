import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from macdopoly.precision import PrecisionContext, Params, DomainError
from macdopoly.kernels import (
    rho_eval,
    kernel_point,
    rho_recurrence_residual,
    rho_derivative_check,
    tricomi_psi,
    weight_eval,
    weight_ode_residual,
    weight_ode_scale,
    ismail_quotient_check,
    laguerre_coefficients,
    laguerre_product_check,
    fractional_integral_check,
)


def test_rho_half_order_closed_form(ctx60):
    # rho_(1/2)(x) = sqrt(pi) exp(-2 sqrt(x))
    with mp.workdps(80):
        for xs in ("0.25", "1", "4", "9"):
            x = mp.mpf(xs)
            exact = mp.sqrt(mp.pi) * mp.exp(-2 * mp.sqrt(x))
            got = rho_eval(mp.mpf("0.5"), x, ctx60)
            assert abs(got - exact) < mp.mpf(10) ** -52 * exact


def test_rho_route_agreement(ctx60):
    with mp.workdps(80):
        for nus in ("0", "0.5", "1", "1.5", "3"):
            for xs in ("0.01", "0.5", "2", "25"):
                nu, x = mp.mpf(nus), mp.mpf(xs)
                a = rho_eval(nu, x, ctx60, route="laplace-integral")
                b = rho_eval(nu, x, ctx60, route="bessel-k")
                assert abs(a - b) < mp.mpf(10) ** -52 * abs(b)


def test_rho_recurrence_route(ctx40):
    with mp.workdps(60):
        nu, x = mp.mpf("2.5"), mp.mpf("1.5")
        a = rho_eval(nu, x, ctx40, route="recurrence")
        b = rho_eval(nu, x, ctx40, route="bessel-k")
        assert abs(a - b) < mp.mpf(10) ** -35 * abs(b)


def test_rho_unknown_route(ctx40):
    with pytest.raises(DomainError):
        rho_eval("0.5", "1", ctx40, route="series")


def test_rho_domain(ctx40):
    with pytest.raises(DomainError):
        rho_eval("0.5", "0", ctx40)
    with pytest.raises(DomainError):
        rho_eval("0.5", "-1", ctx40)


def test_rho_small_x_limit(ctx40):
    # rho_nu(x) -> Gamma(nu) as x -> 0+ for nu > 0
    with mp.workdps(60):
        nu = mp.mpf("1.5")
        got = rho_eval(nu, mp.mpf("1e-30"), ctx40)
        assert abs(got - mp.gamma(nu)) < mp.mpf(10) ** -12


def test_kernel_point_fields(ctx40):
    pt = kernel_point("1.5", "2", ctx40)
    assert pt.nu == mp.mpf("1.5") and pt.x == mp.mpf(2)
    assert pt.value > 0


def test_index_recurrence_residual(ctx60):
    with mp.workdps(80):
        for nus in ("0.5", "1", "2.5"):
            for xs in ("0.5", "1", "4"):
                r = rho_recurrence_residual(mp.mpf(nus), mp.mpf(xs), ctx60)
                assert abs(r) < mp.mpf(10) ** -50


def test_derivative_checks(ctx60):
    with mp.workdps(80):
        for order in (1, 2, 3):
            r = rho_derivative_check(mp.mpf("2.5"), order, mp.mpf("1.5"), ctx60)
            assert abs(r) < mp.mpf(10) ** -15
    with pytest.raises(DomainError):
        rho_derivative_check("2.5", 4, "1.5", ctx60)


def test_tricomi_against_reference():
    # mp.hyperu is usable as a reference only at low precision
    ctx = PrecisionContext(40, 1e-20, 240)
    cases = [("0.7", "2.5", "3"), ("3.25", "1.5", "0.125"), ("8", "4.5", "40"),
             ("2.5", "0.5", "1e-4"), ("5.5", "3.5", "1e6")]
    for a_s, b_s, z_s in cases:
        with mp.workdps(60):
            a, b, z = mp.mpf(a_s), mp.mpf(b_s), mp.mpf(z_s)
            got = tricomi_psi(a, b, z, ctx)
        with mp.workdps(30):
            ref = mp.hyperu(a, b, z)
            assert abs(got - ref) < mp.mpf(10) ** -24 * abs(ref)


def test_tricomi_reduction_identity(ctx60):
    # Psi(a, a+1; z) = z^(-a)
    with mp.workdps(80):
        for a_s, z_s in (("1.5", "0.7"), ("4", "12"), ("2.25", "1e-3")):
            a, z = mp.mpf(a_s), mp.mpf(z_s)
            got = tricomi_psi(a, a + 1, z, ctx60)
            exact = z ** (-a)
            assert abs(got - exact) < mp.mpf(10) ** -50 * exact


def test_weight_positive_and_limits(ctx40, base_params):
    with mp.workdps(60):
        w = weight_eval(base_params, mp.mpf("1.3"), ctx40)
        assert w.omega > 0
        # factored form: x^alpha e^(-lam x) rho_nu(x t)
        direct = (mp.mpf("1.3") ** base_params.alpha
                  * mp.exp(-base_params.lam * mp.mpf("1.3"))
                  * rho_eval(base_params.nu, mp.mpf("1.3") * base_params.t, ctx40))
        assert abs(w.omega - direct) < mp.mpf(10) ** -35 * direct


def test_weight_ode_residual_grid(ctx40):
    with mp.workdps(60):
        for lam_s in ("0.5", "1", "2"):
            for t_s in ("0.5", "1", "2"):
                p = Params("0.5", "1.5", lam_s, t_s)
                for x_s in ("0.5", "1", "2"):
                    r = weight_ode_residual(p, mp.mpf(x_s), ctx40)
                    s = weight_ode_scale(p, mp.mpf(x_s), ctx40)
                    assert abs(r) < mp.mpf(10) ** -30 * s


def test_ismail_quotient():
    for nu_s in ("0", "0.5", "1"):
        for x_s in ("0.5", "1", "4"):
            lhs, rhs = ismail_quotient_check(nu_s, x_s)
            assert abs(lhs - rhs) < mp.mpf("1e-6") * abs(rhs)


def test_laguerre_coefficients_values(ctx40):
    # L_2^nu(x) = (nu+1)(nu+2)/2 - (nu+2) x + x^2/2
    with mp.workdps(60):
        nu = mp.mpf("1.5")
        c = laguerre_coefficients(2, nu, ctx40)
        assert abs(c[0] - (nu + 1) * (nu + 2) / 2) < mp.mpf(10) ** -35
        assert abs(c[1] + (nu + 2)) < mp.mpf(10) ** -35
        assert abs(c[2] - mp.mpf("0.5")) < mp.mpf(10) ** -35


def test_laguerre_product_identity(ctx40):
    with mp.workdps(60):
        for n in (1, 2, 3):
            for x_s in ("0.5", "2"):
                r = laguerre_product_check(mp.mpf("1.5"), n, mp.mpf(x_s), ctx40)
                assert abs(r) < mp.mpf(10) ** -25


def test_fractional_integral_identity(ctx40):
    with mp.workdps(60):
        r = fractional_integral_check(mp.mpf("0.5"), mp.mpf("1.25"), mp.mpf("2"), ctx40)
        assert abs(r) < mp.mpf(10) ** -25


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=0.2, max_value=4.0, allow_nan=False),
       st.floats(min_value=0.1, max_value=10.0, allow_nan=False))
def test_rho_positivity_and_decay(nu_f, x_f):
    ctx = PrecisionContext(30, 1e-10, 120)
    with mp.workdps(40):
        nu = mp.mpf(nu_f)
        x = mp.mpf(x_f)
        v = rho_eval(nu, x, ctx)
        v2 = rho_eval(nu, 2 * x, ctx)
        assert v > 0
        assert v2 < v  # strictly decreasing in x
