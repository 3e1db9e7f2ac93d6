import pytest

from annulus import (
    BraidWord,
    HeckeOracle,
    StrandBoundError,
    aij,
    aij_braid,
    apply_meridian,
    colored_unknot_identity,
    core_power,
    framed_unknot_value,
    hecke_closure,
    meridian_eigenvalue,
    planar_closure_value,
    sigma1_closure_expected,
    verify_aij_coproduct,
    verify_aij_hecke,
    verify_colored_unknot,
    verify_primitivity,
)
from scalars import Scalar, unknot_value
from symfun import EMPTY, SCHUR, Partition, SymSeries, coproduct


def test_braid_parse_and_render():
    braid = BraidWord.parse('s1 -s2 s1')
    assert braid.strands == 3
    assert braid.word == (1, -2, 1)
    assert braid.render() == 's1 -s2 s1'
    assert BraidWord(2).render() == 'id[2]'


@pytest.mark.parametrize('text', ['x1', 's', 's1 t2'])
def test_braid_parse_errors(text):
    with pytest.raises(ValueError):
        BraidWord.parse(text)


def test_generator_out_of_range():
    with pytest.raises(ValueError, match="out of range"):
        BraidWord(2, (2,))


def test_aij_braid_shape():
    assert aij_braid(2, 1) == BraidWord(4, (1, 2, -3))
    with pytest.raises(ValueError):
        aij_braid(-1, 0)


def test_closure_of_sigma1():
    assert hecke_closure(BraidWord(2, (1,))) == sigma1_closure_expected()


def test_closure_of_identity_is_core_power():
    assert hecke_closure(BraidWord(3)) == core_power(3)


def test_closure_is_conjugation_invariant():
    braid = BraidWord(3, (1, -2, 2, 2))
    assert hecke_closure(braid) == hecke_closure(braid.conjugate(1))


def test_strand_bound_is_enforced():
    with pytest.raises(StrandBoundError):
        HeckeOracle(strand_bound=2).closure(BraidWord(3, (1, 2)))


def test_cached_products_survive_eviction():
    words = [BraidWord(3, w) for w in [(1, 2), (1, 2, -1), (2, 2, 1, -2), (1, 2, -1, 1)]]
    fresh = [HeckeOracle().closure(b) for b in words]
    small = HeckeOracle(cache_size=2)
    assert [small.closure(b) for b in words] == fresh
    assert [small.closure(b) for b in reversed(words)] == fresh[::-1]
    assert len(small._products) <= 2


def test_planar_closure_of_one_strand_is_unknot():
    assert planar_closure_value(BraidWord(1)) == unknot_value('a')


def test_a_one_zero_is_sigma1_closure():
    assert aij(1, 0) == sigma1_closure_expected()
    assert aij(0, 0) == SymSeries.basis_element((1,), SCHUR, 1)


def test_meridian_acts_diagonally():
    lam = Partition.of(2, 1)
    x = SymSeries.basis_element(lam, SCHUR, 3)
    assert apply_meridian(x, 1).coefficient(lam) == meridian_eigenvalue(lam, 1)
    with pytest.raises(ValueError, match="orientation"):
        meridian_eigenvalue(lam, 0)


def test_meridian_on_empty_partition_is_unknot():
    assert meridian_eigenvalue(EMPTY, 1) == unknot_value('a')


def test_framed_unknot_of_one_box():
    assert framed_unknot_value(Partition.of(1), 'a1') == unknot_value('a1')


@pytest.mark.parametrize('parts', [(1,), (2,), (1, 1), (2, 1)])
def test_colored_unknot_identity(parts):
    lhs, rhs = colored_unknot_identity(Partition.of(*parts))
    assert lhs == rhs


def test_coproduct_of_core():
    x = SymSeries.basis_element((1,), SCHUR, 1)
    unit = SymSeries.unit(SCHUR, 1)
    delta = coproduct(x)
    assert delta.coeffs == {(Partition.of(1), EMPTY): Scalar.one(), (EMPTY, Partition.of(1)): Scalar.one()}
    assert unit.coefficient(EMPTY) == Scalar.one()


def test_verifiers_pass_at_small_sizes():
    assert verify_primitivity(4).verified
    assert verify_aij_coproduct(2).verified
    assert verify_aij_hecke(2).verified
    assert verify_colored_unknot(3).verified


@pytest.mark.slow
def test_aij_hecke_larger():
    assert verify_aij_hecke(4).verified


@pytest.mark.slow
def test_coproduct_statements_at_full_size():
    assert verify_primitivity(8).verified
    assert verify_aij_coproduct(6).verified
    assert verify_colored_unknot(6).verified
