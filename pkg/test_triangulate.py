from pathlib import Path

import numpy as np
import pytest

from triangulate import (
    EffectivityChecker,
    IdealTriangulation,
    InconsistentSystemError,
    Marking,
    TriangulationFormatError,
    TriangulationLoader,
    all_markings,
    edge_equation,
    enumerate_taut,
    figure_eight,
    generalized_angle_solver,
    gluing_matrix,
    is_effective,
    lackenby_filter,
    positive_solution,
    slot_sign,
    stiemke_certificate,
    taut_angles,
    verify_certificate,
    verify_witness,
)

HERE = Path(__file__).parent
EFFECTIVE = [(0, 2), (1, 2), (2, 0), (2, 1)]


@pytest.fixture
def fig8():
    return TriangulationLoader().load(HERE / 'fig8.tri')


def test_loader_matches_builtin(fig8):
    assert np.array_equal(fig8.incidence, figure_eight().incidence)
    assert fig8.tets == 2 and fig8.edges == 2
    assert fig8.consistent
    assert TriangulationLoader().parse(TriangulationLoader().to_text(fig8)).incidence.tolist() == \
        fig8.incidence.tolist()


@pytest.mark.parametrize('text', [
    'edge 0: tet 0 theta 1 theta\' 0 theta\'\' 1\n',
    'tets 1 edges 1\nedge 3: tet 0 theta 1 theta\' 0 theta\'\' 1\n',
    'tets 1 edges 1\nedge 0: tet 0 eta 1 theta\' 0 theta\'\' 1\n',
    'tets 1 edges 1\nvertex 0\n',
    'tets one edges 1\n',
    '# nothing here\n',
])
def test_loader_errors(text):
    with pytest.raises(TriangulationFormatError):
        TriangulationLoader().parse(text)


def test_negative_counts_rejected():
    with pytest.raises(TriangulationFormatError):
        IdealTriangulation(np.array([[[-1, 0, 0]]]))


def test_edge_equation_text(fig8):
    assert edge_equation(fig8, 0) == "2x_1^theta + x_1^theta'' + 2x_2^theta + x_2^theta'' = 0"


def test_three_taut_structures(fig8):
    assert enumerate_taut(fig8) == [(0, 1), (1, 0), (2, 2)]
    assert taut_angles((0, 1)) == [1, 0, 0, 0, 1, 0]


def test_taut_filter():
    structures = [(0, 1), (1, 0), (2, 2)]
    assert lackenby_filter(structures, [[0, 2], [1, 2]]) == [(0, 1), (2, 2)]
    assert lackenby_filter(structures) == structures


def test_inconsistent_slots_have_no_taut_structure():
    broken = IdealTriangulation(np.array([[[1, 0, 0]]]))
    assert not broken.consistent
    assert enumerate_taut(broken) == []


def test_generalized_angle_space(fig8):
    solution = generalized_angle_solver(fig8)
    assert solution.dimension == 3
    assert solution.satisfies(solution.particular)
    for choice in enumerate_taut(fig8):
        assert solution.satisfies(taut_angles(choice))


def test_inconsistent_angle_system():
    # edge class 1 has no slots but still asks for 2π
    T = IdealTriangulation(np.array([[[2, 2, 2]], [[0, 0, 0]]]))
    with pytest.raises(InconsistentSystemError):
        generalized_angle_solver(T)


@pytest.mark.parametrize('slot,marked,sign', [
    (0, 0, 0), (1, 1, 0), (0, 1, 1), (1, 2, 1), (2, 0, 1), (0, 2, -1), (2, 1, -1), (1, 0, -1),
])
def test_slot_sign(slot, marked, sign):
    assert slot_sign(slot, marked) == sign


def test_gluing_rows_are_opposite(fig8):
    for marking in all_markings(fig8):
        G = gluing_matrix(fig8, marking)
        assert np.array_equal(G[1], -G[0])


def test_gluing_matrix_shape_check(fig8):
    with pytest.raises(ValueError):
        gluing_matrix(fig8, Marking((0,)))


def test_orientation_signs_flip_columns(fig8):
    plain = gluing_matrix(fig8, Marking((0, 2)))
    flipped = gluing_matrix(fig8, Marking((0, 2), (1, -1)))
    assert np.array_equal(flipped[:, 0], plain[:, 0])
    assert np.array_equal(flipped[:, 1], -plain[:, 1])


def test_effective_markings(fig8):
    checker = EffectivityChecker(fig8)
    assert sorted(m.types for m in checker.effective_markings()) == EFFECTIVE
    assert all(r.verified for r in checker.check_all())


def test_witness_and_certificate(fig8):
    effective = is_effective(fig8, Marking((0, 2)))
    assert effective.effective
    assert all(v > 0 for v in effective.witness)
    stuck = is_effective(fig8, Marking((0, 0)))
    assert not stuck.effective
    assert verify_certificate(stuck.gluing, stuck.certificate)


def test_zero_matrix_is_effective():
    G = np.zeros((2, 3), dtype=int)
    assert verify_witness(G, positive_solution(G))
    assert stiemke_certificate(G) is None


def test_lp_on_small_matrices():
    G = np.array([[1, 1]])
    assert positive_solution(G) is None
    p = stiemke_certificate(G)
    assert p is not None and verify_certificate(G, p)
    G = np.array([[1, -2]])
    z = positive_solution(G)
    assert verify_witness(G, z)


def test_marking_parse_and_render():
    marking = Marking.parse("(theta, theta'')")
    assert marking.types == (0, 2)
    assert marking.render() == "(theta, theta'')"
    with pytest.raises(ValueError):
        Marking.parse('eta, theta')
    with pytest.raises(ValueError):
        Marking((3,))


def test_marking_table(fig8):
    table = EffectivityChecker(fig8).marking_table()
    assert len(table) == 9
    assert table['effective'].sum() == 4
    assert table['verified'].all()


def test_report_is_verified(fig8):
    report = EffectivityChecker(fig8).report()
    assert report.verified
    assert len(report.notes['effective']) == 4
