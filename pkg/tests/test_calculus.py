import mpmath as mp
import pytest

from macdopoly.precision import PrecisionContext, Params, DomainError
from macdopoly.calculus import (
    IdentityReport,
    fd_step,
    fd_tol,
    check_thm2_lambda,
    check_thm2_t,
    check_corollary1,
    check_thm3,
    check_2_30,
    check_cor3,
    check_lemma2,
    check_2_36_2_37,
    check_quasi_orthogonality,
    check_thm4_t,
    check_section4,
    path_endpoint_residuals,
    scaling_residuals,
)


def _assert_passed(rep):
    failing = [d for d in rep.details if not d["pass"]]
    assert rep.passed, f"failing entries: {failing}"


def test_fd_step_and_tol(ctx60):
    h = fd_step(ctx60)
    assert h == mp.mpf(10) ** (-mp.mpf(60) / 3)
    assert fd_tol(ctx60, 10) > fd_tol(ctx60, 1)


def test_derivative_in_decay_rate(ctx40, base_params):
    for n in (1, 3):
        _assert_passed(check_thm2_lambda(base_params, n, ctx40))
    with pytest.raises(DomainError):
        check_thm2_lambda(base_params, 0, ctx40)


def test_derivative_in_kernel_scale(ctx40, base_params):
    for n in (1, 3):
        _assert_passed(check_thm2_t(base_params, n, ctx40))


def test_coefficient_derivative_relations(ctx40, base_params):
    for n in (1, 2):
        _assert_passed(check_corollary1(base_params, n, ctx40))


def test_leading_coefficient_derivative_laws(ctx40, base_params):
    for n in (0, 1, 3):
        _assert_passed(check_thm3(base_params, n, ctx40))


def test_subleading_euler_law(ctx40, base_params):
    for n in (0, 1, 3):
        _assert_passed(check_2_30(base_params, n, ctx40))


def test_euler_operator_on_polynomials(ctx40, base_params):
    for n in (0, 2):
        _assert_passed(check_cor3(base_params, n, ctx40))


def test_structure_integrals(ctx40, base_params):
    for n in (0, 1, 3):
        _assert_passed(check_lemma2(base_params, n, ctx40))


def test_shifted_kernel_integrals(ctx40, base_params):
    for n in (0, 2):
        _assert_passed(check_2_36_2_37(base_params, n, ctx40))


def test_quasi_orthogonality(ctx40, base_params):
    for n in (2, 4):
        _assert_passed(check_quasi_orthogonality(base_params, n, ctx40))
    with pytest.raises(DomainError):
        check_quasi_orthogonality(base_params, 1, ctx40)


def test_quasi_orthogonality_off_center(ctx40):
    _assert_passed(
        check_quasi_orthogonality(Params("0", "1", "2", "0.5"), 3, ctx40)
    )


def test_integral_reconstruction_in_kernel_scale(base_params):
    rep = check_thm4_t(base_params, 1, ["1"])
    _assert_passed(rep)
    assert rep.max_residual < mp.mpf("1e-8")


def test_one_parameter_path(ctx40):
    rep = check_section4("0.5", 2, ctx40)
    _assert_passed(rep)
    with pytest.raises(DomainError):
        check_section4("1.5", 2, ctx40)


def test_path_endpoints(ctx40):
    ends = path_endpoint_residuals(2, ctx40)
    for key, val in ends.items():
        assert val < mp.mpf("1e-6"), (key, val)


def test_scaling_characteristics(ctx40, base_params):
    for c in ("0.5", "3"):
        out = scaling_residuals(base_params, 2, c, ctx40)
        for key, val in out.items():
            assert val < mp.mpf(10) ** -30, (key, val)


def test_report_serialization(ctx40, base_params):
    rep = check_thm3(base_params, 1, ctx40)
    d = rep.to_dict()
    assert d["identity"] == "2.20-2.23"
    assert isinstance(d["max_residual"], str)
    assert isinstance(d["pass"], bool)
    assert all(isinstance(e["value"], str) for e in d["residuals"])
