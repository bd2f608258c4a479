import mpmath as mp
import pytest

from macdopoly.precision import PrecisionContext, Params, DomainError
from macdopoly.opoly import (
    build_recurrence,
    cached_recurrence,
    orthonormality_residual,
    eval_poly,
    poly_weighted_moment,
    poly_pair_weighted_moment,
    christoffel_darboux,
    gauss_rule,
    normalization_integrals,
    table_to_dict,
    rule_to_dict,
)


@pytest.fixture(scope="module")
def rec40(ctx40, base_params):
    return cached_recurrence(base_params, 6, ctx40)


def test_orthonormality(rec40, ctx40):
    assert orthonormality_residual(rec40, ctx40) < mp.mpf(10) ** -30


def test_leading_coefficients_positive(rec40):
    assert all(a > 0 for a in rec40.a)


def test_recurrence_coefficient_definitions(rec40):
    with mp.workdps(60):
        for n in range(1, rec40.N + 1):
            assert abs(rec40.A[n] - rec40.a[n - 1] / rec40.a[n]) < mp.mpf(10) ** -35
        for n in range(rec40.N):
            bn = rec40.b[n] / rec40.a[n] if n >= 1 else mp.mpf(0)
            bn1 = rec40.b[n + 1] / rec40.a[n + 1]
            assert abs(rec40.B[n] - (bn - bn1)) < mp.mpf(10) ** -33


def test_eval_routes_agree(rec40, ctx40):
    with mp.workdps(60):
        for n in (0, 2, 5):
            for x_s in ("0.25", "1", "3.5"):
                x = mp.mpf(x_s)
                r = eval_poly(rec40, n, x, ctx40, route="recurrence")
                c = eval_poly(rec40, n, x, ctx40, route="coefficients")
                assert abs(r - c) < mp.mpf(10) ** -30 * max(abs(r), 1)
    with pytest.raises(DomainError):
        eval_poly(rec40, 2, "1", ctx40, route="newton")
    with pytest.raises(DomainError):
        eval_poly(rec40, rec40.N + 1, "1", ctx40)


def test_three_term_recurrence_pointwise(rec40, ctx40):
    # x P_n = A_(n+1) P_(n+1) + B_n P_n + A_n P_(n-1)
    with mp.workdps(60):
        x = mp.mpf("1.7")
        for n in range(1, rec40.N):
            lhs = x * eval_poly(rec40, n, x, ctx40)
            rhs = (rec40.A[n + 1] * eval_poly(rec40, n + 1, x, ctx40)
                   + rec40.B[n] * eval_poly(rec40, n, x, ctx40)
                   + rec40.A[n] * eval_poly(rec40, n - 1, x, ctx40))
            assert abs(lhs - rhs) < mp.mpf(10) ** -30 * max(abs(lhs), 1)


def test_pair_moments_orthonormal(rec40, ctx40):
    with mp.workdps(60):
        for m in range(4):
            for n in range(4):
                v = poly_pair_weighted_moment(rec40, m, n, 0, ctx40)
                target = 1 if m == n else 0
                assert abs(v - target) < mp.mpf(10) ** -30


def test_normalization_integrals_match_predictions(rec40, ctx40):
    with mp.workdps(60):
        for n in (0, 2, 4):
            d = normalization_integrals(rec40, n, ctx40)
            for i in ("i0", "i1", "i2"):
                scale = max(abs(d[i + "_pred"]), 1)
                assert abs(d[i] - d[i + "_pred"]) < mp.mpf(10) ** -28 * scale


def test_gauss_rule_integrates_moments(rec40, ctx40):
    with mp.workdps(60):
        rule = gauss_rule(rec40, 6, ctx40)
        assert all(w > 0 for w in rule.weights)
        assert all(x > 0 for x in rule.nodes)
        assert all(a < b for a, b in zip(rule.nodes, rule.nodes[1:]))
        # exact for x^k, k <= 2N-1
        for k in (0, 1, 5, 11):
            q = sum(w * x ** k for x, w in zip(rule.nodes, rule.weights))
            mu_k = rec40.moments.mu[k]
            assert abs(q - mu_k) < mp.mpf(10) ** -28 * mu_k


def test_christoffel_darboux_forms_agree(rec40, ctx40):
    with mp.workdps(60):
        s, q = christoffel_darboux(rec40, 4, "0.8", "2.1", ctx40)
        assert abs(s - q) < mp.mpf(10) ** -28 * max(abs(s), 1)
        # confluent limit x = y
        s, q = christoffel_darboux(rec40, 4, "1.3", "1.3", ctx40)
        assert abs(s - q) < mp.mpf(10) ** -25 * max(abs(s), 1)


def test_laguerre_limit_recurrence(ctx60):
    # t = 0, alpha = 0, lam = 1, nu = 1: B_n = 2n+1, A_n = n, and
    # a_0 = 1/sqrt(Gamma(nu) Gamma(1+alpha))
    with mp.workdps(80):
        p = Params("0", "1", "1", "0")
        rec = build_recurrence(p, 7, ctx60)
        for n in range(7):
            assert abs(rec.B[n] - (2 * n + 1)) < mp.mpf(10) ** -50
        for n in range(1, 7):
            assert abs(rec.A[n] - n) < mp.mpf(10) ** -50
        assert abs(rec.a[0] - 1) < mp.mpf(10) ** -50


def test_cached_recurrence_is_shared(ctx40, base_params):
    r1 = cached_recurrence(base_params, 5, ctx40)
    r2 = cached_recurrence(base_params, 5, ctx40)
    assert r1 is r2


def test_table_dict_schema(rec40):
    d = table_to_dict(rec40)
    assert set(d) == {"params", "N", "digits", "moments", "moment_source",
                      "a", "b", "d", "a_const", "A", "B", "coefficients"}
    assert d["A"][0] is None
    assert len(d["coefficients"]) == rec40.N + 1
    assert all(isinstance(v, str) for v in d["a"])


def test_rule_dict_schema(rec40, ctx40):
    rule = gauss_rule(rec40, 4, ctx40)
    d = rule_to_dict(rule)
    assert len(d["nodes"]) == 4 and len(d["weights"]) == 4
    assert all(isinstance(v, str) for v in d["nodes"])


def test_gauss_rule_depth_domain(rec40, ctx40):
    with pytest.raises(DomainError):
        gauss_rule(rec40, rec40.N + 1, ctx40)
