import pytest

from dilog import (
    dilog_report,
    psi_coefficient,
    psi_exp_form,
    psi_inverse,
    psi_product_form,
    verify_inverse_product,
    verify_inverse_recurrence,
    verify_product_vs_exp,
    verify_recurrence,
    xi_homogeneity_failures,
)
from scalars import Scalar, quantum_bracket
from symfun import EMPTY, Partition


def test_first_coefficients():
    xi = Scalar.var('xi')
    assert psi_coefficient(EMPTY) == Scalar.one()
    assert psi_coefficient(Partition.of(1)) == -xi / quantum_bracket(1)


def test_product_form_equals_exp_form():
    assert psi_product_form(4) == psi_exp_form(4)


def test_coefficients_are_xi_homogeneous():
    assert xi_homogeneity_failures(psi_product_form(5)) == []


def test_inverse_at_xi_one():
    psi = psi_product_form(3, Scalar.one())
    assert psi.coefficient((1,)) * -1 == psi_inverse(3).coefficient((1,))


@pytest.mark.parametrize('check', [verify_product_vs_exp, verify_inverse_product,
                                   verify_recurrence, verify_inverse_recurrence])
def test_checks_pass_to_degree_four(check):
    report = check(4)
    assert report.verified, [r.grading for r in report.failures()]


def test_recurrence_needs_positive_degree():
    with pytest.raises(ValueError):
        verify_recurrence(0)
    with pytest.raises(ValueError):
        psi_product_form(-1)


def test_report_selection():
    assert [r.identity for r in dilog_report(2, 'recurrence')] == ['dilog recurrence']
    assert len(dilog_report(2)) == 4
    with pytest.raises(ValueError, match="Unsupported dilog check"):
        dilog_report(2, 'pentagon')


def test_degree_parts_of_residual_are_labelled():
    report = verify_product_vs_exp(2)
    assert [r.grading for r in report.residuals] == ['degree 0', 'degree 1', 'degree 2']
    assert report.parameter == 2
    assert report.seconds >= 0


@pytest.mark.slow
def test_full_suite_to_degree_ten():
    reports = dilog_report(10)
    assert len(reports) == 4
    assert all(r.verified for r in reports), [r.identity for r in reports if not r.verified]
