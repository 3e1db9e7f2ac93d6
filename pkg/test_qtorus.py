import pytest

from qtorus import (
    QuantumTorus,
    functional_equation_check,
    gl1_dilog,
    gl1_homomorphism_check,
    gl1_report,
    specialize_P,
    verify_dilog_images,
    verify_gl1_pentagon,
    verify_gl1_sw,
    verify_intertwining,
)
from scalars import Scalar, quantum_bracket
from torus import PENTAGON_GRADING, SW_GRADING, PBWAlgebra


def test_commutation_relation():
    torus = QuantumTorus()
    y, x = torus.monomial(1, 0), torus.monomial(0, 1)
    assert torus.multiply(y, x) == torus.monomial(1, 1)
    assert torus.multiply(x, y) == torus.monomial(1, 1, Scalar.s_power(-2))


def test_specialization_of_generators():
    assert specialize_P((1, 1)) == QuantumTorus().monomial(1, 1, Scalar.s_power(-1))
    assert specialize_P((0, 2)) == QuantumTorus().monomial(0, 2)


def test_sine_bracket_image():
    torus = QuantumTorus()
    p10, p01 = specialize_P((1, 0), torus), specialize_P((0, 1), torus)
    commutator = torus.multiply(p10, p01) - torus.multiply(p01, p10)
    assert commutator == specialize_P((1, 1), torus).scale(quantum_bracket(1))


def test_grading_and_bound_go_together():
    with pytest.raises(ValueError):
        QuantumTorus(PENTAGON_GRADING)


def test_truncation_drops_heavy_terms():
    torus = QuantumTorus(PENTAGON_GRADING, 1)
    assert torus.multiply(torus.monomial(1, 0), torus.monomial(0, 1)).is_zero()


def test_infinite_product_needs_bound():
    with pytest.raises(ValueError, match="weight bound"):
        QuantumTorus().pochhammer_inverse(QuantumTorus().monomial(0, 1))


def test_pochhammer_pair_is_inverse():
    torus = QuantumTorus(SW_GRADING, 5)
    u = torus.monomial(0, 1)
    assert torus.multiply(torus.pochhammer(u), torus.pochhammer_inverse(u)) == torus.unit()


def test_dilog_image_weight_one():
    torus = QuantumTorus(PENTAGON_GRADING, 1)
    psi = gl1_dilog(torus, (1, 0))
    coefficient = Scalar.s_power(1) / (Scalar.one() - Scalar.s_power(2))
    assert psi == torus.unit() + torus.monomial(1, 0, coefficient)


def test_specialize_respects_pbw_products():
    algebra = PBWAlgebra(PENTAGON_GRADING, 3)
    torus = QuantumTorus(PENTAGON_GRADING, 3)
    word = algebra.monomial([(0, 1), (1, 0)])
    expected = torus.multiply(torus.specialize_P((0, 1)), torus.specialize_P((1, 0)))
    assert torus.specialize(word) == expected


@pytest.mark.parametrize('twisted', [False, True])
def test_gl1_pentagon(twisted):
    assert verify_gl1_pentagon(6, twisted).verified


def test_gl1_sw():
    report = verify_gl1_sw(4)
    assert report.verified, [r.grading for r in report.failures()]


def test_gl1_consistency_checks():
    assert verify_dilog_images(3).verified
    assert gl1_homomorphism_check(seed=2, extra=4).verified
    assert functional_equation_check(6).verified
    assert verify_intertwining(seed=3, cases=3, max_weight=4).verified


def test_gl1_report_selection():
    assert [r.identity for r in gl1_report(2, 'pentagon')] == ['gl1 pentagon']
    with pytest.raises(ValueError, match="Unsupported"):
        gl1_report(2, 'hexagon')


@pytest.mark.slow
def test_gl1_identities_to_weight_ten():
    assert verify_gl1_pentagon(10).verified
    assert verify_gl1_pentagon(10, twisted=True).verified
    assert verify_gl1_sw(10).verified
