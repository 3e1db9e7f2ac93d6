from fractions import Fraction

import pytest

from scalars import (
    ScalarParseError,
    Scalar,
    framing_monomial,
    parse_scalar,
    quantum_bracket,
    quantum_integer,
    s,
    unknot_value,
)


def test_zero_coefficients_are_dropped():
    a = Scalar.var('a')
    assert (a - a).is_zero()
    assert Scalar.zero() == Scalar({})


def test_half_integer_framing_powers():
    root = Scalar.var('a1', Fraction(1, 2))
    assert root * root == Scalar.var('a1')
    with pytest.raises(ValueError):
        Scalar.var('a1', Fraction(1, 3))
    with pytest.raises(ValueError):
        Scalar.var('xi', Fraction(1, 2))


def test_unknown_variable_is_rejected():
    with pytest.raises(ValueError, match="Unsupported variable"):
        Scalar.var('b')


def test_inverse_of_monomial():
    x = Scalar.var('a') * Scalar.var('xi', 2) * Scalar.s_power(3)
    assert x * x.inverse() == Scalar.one()


def test_quantum_numbers():
    assert quantum_bracket(1) == Scalar.z()
    assert quantum_integer(0).is_zero()
    assert quantum_integer(-2) == -quantum_integer(2)
    assert quantum_integer(2) == Scalar.const(s + 1 / s)


def test_unknot_value_in_product_variable():
    A = framing_monomial('a1a2')
    assert A == Scalar.var('a1') * Scalar.var('a2')
    assert unknot_value('a1a2') * Scalar.z() == A - A.inverse()


def test_bar_inverts_s():
    assert Scalar.s_power(2).bar() == Scalar.s_power(-2)
    assert Scalar.z().bar() == -Scalar.z()


def test_specialize_a_to_product():
    value = unknot_value('a').specialize({'a': Scalar.var('a1') * Scalar.var('a2')})
    assert value == unknot_value('a1a2')


def test_specialize_rejects_unknown_binding():
    with pytest.raises(ValueError, match="Unsupported bindings"):
        Scalar.one().specialize({'b': 1})


@pytest.mark.parametrize('text', ['a - a^-1', '(a1*a2)^(1/2)', '(s - 1/s)*xi^2 + 3', 'q*a2^-1'])
def test_render_and_parse_agree(text):
    value = parse_scalar(text)
    assert parse_scalar(value.render()) == value


def test_parse_shorthands():
    assert parse_scalar('z') == Scalar.z()
    assert parse_scalar('q') == Scalar.s_power(2)


@pytest.mark.parametrize('text', ['', 'a +', 'b', 'a^x'])
def test_parse_errors(text):
    with pytest.raises(ScalarParseError):
        parse_scalar(text)


def test_coefficient_field_values_follow_monomial_order():
    x = Scalar.var('a') * 2 + Scalar.const(5)
    assert x.coefficient_field_values() == [5, 2]


def test_float_evaluation_of_z_and_framing():
    assert Scalar.z().evaluate_float(2.0) == pytest.approx(1.5)
    x = Scalar.var('a') * Scalar.z() + Scalar.var('a1', Fraction(1, 2))
    assert x.evaluate_float(2.0, a=3.0, a1=4.0) == pytest.approx(6.5)
    assert unknot_value().evaluate_float(2.0, a=4.0) == pytest.approx(2.5)
