import mpmath as mp
import pytest

from macdopoly.precision import PrecisionContext, Params, DomainError
from macdopoly.opoly import cached_recurrence
from macdopoly.composition import (
    theta_apply,
    term_sum_eval,
    term_sum_integral,
    base_terms,
    theta_monomial_check,
    rodrigues_check,
    base_function_check,
    composition_integral,
    composition_orthogonality_check,
)


def test_theta_on_monomials(ctx40):
    with mp.workdps(60):
        for m in range(5):
            for s in ("0.5", "2", "3.75"):
                r = theta_monomial_check(m, s, ctx40)
                assert r < mp.mpf(10) ** -25


def test_theta_algebra_matches_numeric_derivative(ctx60, base_params):
    # theta = y D y applied to the base term sum, checked pointwise; the
    # finite-difference step inside mp.diff limits the attainable agreement
    with mp.workdps(80):
        terms = base_terms(base_params, ctx60)
        applied = theta_apply(terms, base_params.alpha, base_params.lam)
        y0 = mp.mpf("0.8")
        # explicit central-difference step: it must stay representable at the
        # evaluation precision of term_sum_eval
        h = mp.mpf(10) ** -20
        f = lambda y: y * term_sum_eval(terms, y, base_params, ctx60)
        numeric = y0 * (f(y0 + h) - f(y0 - h)) / (2 * h)
        algebraic = term_sum_eval(applied, y0, base_params, ctx60)
        assert abs(numeric - algebraic) < mp.mpf(10) ** -15 * max(abs(algebraic), 1)


def test_weighted_laguerre_representation(ctx40):
    with mp.workdps(60):
        for m in range(4):
            r = rodrigues_check(m, "1.5", ["0.5", "1", "3"], ctx40)
            assert r < mp.mpf(10) ** -30


def test_base_function(ctx40, base_params):
    r = base_function_check(base_params, ["0.25", "1", "4"], ctx40)
    assert r < mp.mpf(10) ** -30
    with pytest.raises(DomainError):
        base_function_check(Params("0.5", "1.5", "1", "0"), ["1"], ctx40)


def test_term_sum_integral_vs_quadrature(ctx40, base_params):
    with mp.workdps(60):
        terms = theta_apply(base_terms(base_params, ctx40),
                            base_params.alpha, base_params.lam)
        got = term_sum_integral(terms, base_params, ctx40)
        nu = base_params.nu
        ref = mp.quad(
            lambda y: y ** nu * mp.exp(-y)
            * term_sum_eval(terms, y, base_params, ctx40),
            [0, mp.inf],
        )
        assert abs(got - ref) < mp.mpf(10) ** -25 * max(abs(ref), 1)


def test_composition_orthogonality(ctx60, base_params):
    rec = cached_recurrence(base_params, 5, ctx60)
    for n in (1, 3):
        out = composition_orthogonality_check(rec, n, ctx60)
        assert out["zero"] < mp.mpf(10) ** -40
        assert out["diag"] < mp.mpf(10) ** -40
        assert out["cross"] < mp.mpf(10) ** -40


def test_composition_diagonal_value(ctx60, base_params):
    with mp.workdps(80):
        rec = cached_recurrence(base_params, 5, ctx60)
        val = composition_integral(rec, 2, 2, ctx60)
        assert abs(val - 1 / rec.a[2]) < mp.mpf(10) ** -40 / rec.a[2]


def test_composition_requires_positive_t(ctx40):
    p = Params("0.5", "1.5", "1", "0")
    rec = cached_recurrence(p, 3, ctx40)
    with pytest.raises(DomainError):
        composition_integral(rec, 1, 0, ctx40)
