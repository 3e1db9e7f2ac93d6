from fractions import Fraction

import pytest

from scalars import Scalar
from symfun import (
    EMPTY,
    POWER,
    SCHUR,
    Partition,
    SymSeries,
    SymTensor,
    character,
    coproduct,
    counit,
    hooks_contents,
    lr_coefficients,
    lr_coefficients_pieri,
    multiply,
    partitions_of,
    partitions_up_to,
    power_sum,
    series_exp,
)


def test_partition_validation():
    assert Partition.of(1, 3, 2).parts == (3, 2, 1)
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))


def test_partition_parse_and_conjugate():
    lam = Partition.parse('(3,1)')
    assert lam == Partition.of(3, 1)
    assert lam.conjugate() == Partition.of(2, 1, 1)
    assert Partition.parse('()') == EMPTY


@pytest.mark.parametrize('n,count', [(0, 1), (1, 1), (4, 5), (6, 11)])
def test_partition_counts(n, count):
    assert len(partitions_of(n)) == count


def test_hooks_and_contents_of_two_one():
    assert sorted(hooks_contents(Partition.of(2, 1))) == [(-1, 1), (0, 3), (1, 1)]


def test_character_table_rows_are_orthonormal():
    n = 4
    lams = partitions_of(n)
    for lam in lams:
        for mu in lams:
            total = sum(Fraction(character(lam, rho) * character(mu, rho), rho.z_factor()) for rho in lams)
            assert total == (1 if lam == mu else 0)


def test_lr_coefficients_small():
    one = Partition.of(1)
    assert lr_coefficients(one, one) == {Partition.of(2): 1, Partition.of(1, 1): 1}
    assert lr_coefficients(Partition.of(2, 1), Partition.of(2, 1))[Partition.of(3, 2, 1)] == 2


@pytest.mark.parametrize('mu,nu', [((2, 1), (1,)), ((2,), (2, 1)), ((2, 1), (2, 1)), ((3, 1), (1, 1))])
def test_lr_rules_agree(mu, nu):
    assert lr_coefficients(Partition.of(*mu), Partition.of(*nu)) == \
        lr_coefficients_pieri(Partition.of(*mu), Partition.of(*nu))


def test_schur_powersum_round_trip_degree_four():
    x = SymSeries(SCHUR, {lam: Scalar.var('a', k) for k, lam in enumerate(partitions_up_to(4))}, 4)
    assert x.to_powersum().to_schur() == x


def test_products_agree_across_bases():
    x = SymSeries(SCHUR, {Partition.of(2): 1, Partition.of(1): Scalar.var('xi')}, 5)
    y = SymSeries(SCHUR, {Partition.of(1, 1): Scalar.s_power(1)}, 5)
    assert multiply(x, y) == multiply(x.to_powersum(), y.to_powersum())


def test_truncation_drops_high_degrees():
    p1 = SymSeries.basis_element((1,), SCHUR, 2)
    cube = multiply(multiply(p1, p1), p1)
    assert cube.is_zero()


def test_exp_of_p1_is_complete_homogeneous_sum():
    # exp(p_1) = Σ p_1^n / n!, whose degree-2 part is (s_2 + s_11)/2
    e = series_exp(power_sum(1, 3)).to_schur()
    assert e.coefficient((2,)) == Scalar.const(1) / 2
    assert e.coefficient((1, 1)) == Scalar.const(1) / 2


def test_power_sums_are_primitive():
    p3 = power_sum(3, 3, basis=SCHUR)
    unit = SymSeries.unit(SCHUR, 3)
    assert coproduct(p3) == SymTensor.pure(p3, unit) + SymTensor.pure(unit, p3)


def test_coproduct_is_multiplicative():
    x = SymSeries.basis_element((1,), SCHUR, 3)
    y = SymSeries.basis_element((1, 1), SCHUR, 3)
    assert coproduct(multiply(x, y)) == coproduct(x).multiply(coproduct(y))


def test_counit_kills_positive_degree():
    x = SymSeries(SCHUR, {EMPTY: Scalar.var('a'), Partition.of(2): 1}, 3)
    assert counit(x) == Scalar.var('a')
    left = coproduct(x).apply_map(lambda v: SymSeries.unit(SCHUR, 3).scale(counit(v)), lambda v: v)
    assert left == SymTensor.pure(SymSeries.unit(SCHUR, 3), x)


def test_bases_must_match():
    with pytest.raises(ValueError, match="Basis mismatch"):
        SymSeries.unit(SCHUR) + SymSeries.unit(POWER)
    with pytest.raises(ValueError, match="Unsupported basis"):
        SymSeries('monomial')
