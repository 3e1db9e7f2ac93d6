import os
from fractions import Fraction
from pathlib import Path

import pytest

from annulus import BraidWord, planar_closure_value, sigma1_closure_expected
from lift import (
    CoverChart,
    CutEvent,
    DiagramFormatError,
    EvaluationError,
    LeafDiagram,
    LiftEngine,
    NonGenericDiagramError,
    Segment,
    SignEvent,
    WallEvent,
    classify_crossing,
    default_torus_chart,
    enumerate_lifts,
    evaluate,
    evaluate_annular,
    evaluate_homological,
    evaluate_planar,
    evaluate_trivial_cover,
    lift_count_bound,
    move_invariance_suite,
    rotation_representatives,
    skein_relation_suite,
    source_value,
    trace_components,
    verify_coproduct_on_braid,
    verify_coproduct_sweep,
    verify_lift_tables,
)
from qtorus import QuantumTorus
from scalars import Scalar, unknot_value
from symfun import coproduct

HERE = Path(__file__).parent


@pytest.fixture
def kink():
    return LeafDiagram.load(HERE / 'kink.diag')


@pytest.fixture
def torus_chart():
    return CoverChart.load(HERE / 'torus.chart')


def _weights_by_sheet(lifts):
    return {next(iter(t.sheets.values()))[0]: t.weight for t in lifts.terms if not t.crossing_types}


# -------------------------------------------------------------- crossing types
@pytest.mark.parametrize('ends,kind', [
    ((1, 1, 1, 1), 'kept'),
    ((2, 2, 2, 2), 'kept'),
    ((1, 1, 2, 2), 'direct'),
    ((2, 2, 1, 1), 'direct'),
    ((1, 2, 2, 1), 'exchange'),
    ((2, 1, 1, 2), None),
    ((1, 2, 1, 2), None),
])
def test_classify_crossing(ends, kind):
    assert classify_crossing(*ends) == kind


# -------------------------------------------------------------- lift tables
def test_unknot_has_one_lift_per_sheet():
    lifts = enumerate_lifts(LeafDiagram.load(HERE / 'unknot.diag'))
    assert len(lifts) == 2
    assert _weights_by_sheet(lifts) == {1: Scalar.var('a2'), 2: Scalar.var('a1', -1)}


def test_unknot_value_is_product_unknot():
    lifts = enumerate_lifts(LeafDiagram.unknot())
    assert evaluate_trivial_cover(lifts) == unknot_value('a1a2')


def test_kink_lift_table(kink):
    lifts = enumerate_lifts(kink)
    assert len(lifts) == 3
    kinds = sorted(t.crossing_types['c1'] for t in lifts.terms)
    assert kinds == ['exchange', 'kept', 'kept']
    exchange = next(t for t in lifts.terms if t.crossing_types['c1'] == 'exchange')
    assert exchange.weight == Scalar.var('a1') * Scalar.z()
    assert exchange.sheets == {'e0': (1,), 'e1': (2,), 'e2': (1,)}


def test_kink_evaluates_to_framing_factor(kink):
    a1a2 = Scalar.var('a1') * Scalar.var('a2')
    assert evaluate_planar(enumerate_lifts(kink)) == {(1,): a1a2, (2,): a1a2}


def test_negative_kink_matches_negative_twists():
    kinked = evaluate_planar(enumerate_lifts(LeafDiagram.kink(-1)))
    twisted = evaluate_planar(enumerate_lifts(LeafDiagram.strand().insert_twists('e0', -1, 2)))
    assert kinked == twisted


def test_lift_table_frame(kink):
    table = enumerate_lifts(kink).table()
    assert list(table.columns) == ['sheets', 'exchanges', 'detours', 'weight']
    assert (table['exchanges'] == 'c1').sum() == 1


def test_lift_count_bound(kink):
    chart = CoverChart.trivial_chart()
    assert len(enumerate_lifts(kink, chart)) <= lift_count_bound(kink, chart)


def test_verify_lift_tables():
    report = verify_lift_tables()
    assert report.verified, [r.grading for r in report.failures()]


# -------------------------------------------------------------- diagrams
def test_diagram_text_round_trip(kink):
    again = LeafDiagram.parse(kink.to_text())
    assert again.to_text() == kink.to_text()
    assert again.writhe() == 1


def test_braid_diagram_text_keeps_layout():
    diagram = LeafDiagram.from_braid(BraidWord(2, (1, -1)), 'annular')
    again = LeafDiagram.parse(diagram.to_text())
    assert again.braid == diagram.braid
    assert again.crossings == diagram.crossings


def test_from_braid_structure():
    diagram = LeafDiagram.from_braid(BraidWord(3, (1, -2)), 'planar')
    assert len(diagram.crossings) == 2
    assert len(diagram.arcs) == 4
    assert diagram.writhe() == 0
    assert diagram.braid is None
    with pytest.raises(ValueError, match="Unsupported closure"):
        LeafDiagram.from_braid(BraidWord(2), 'spherical')


def test_identity_braid_closure_is_unknot():
    one = LeafDiagram.from_braid(BraidWord(1), 'planar')
    assert evaluate_planar(enumerate_lifts(one)) == evaluate_planar(enumerate_lifts(LeafDiagram.unknot()))


def test_switch_flips_sign_and_is_an_involution(kink):
    switched = kink.switch('c1')
    assert switched.crossings['c1'].sign == -1
    assert switched.switch('c1').to_text() == kink.to_text()


def test_smoothing_a_kink_splits_off_a_loop(kink):
    smoothed = kink.smooth('c1')
    assert not smoothed.crossings
    assert sorted(a.is_loop for a in smoothed.arcs.values()) == [False, True]


def test_insert_kink_rejects_loops():
    with pytest.raises(NonGenericDiagramError):
        LeafDiagram.unknot().insert_kink('u0')


def test_trace_components_of_unknot():
    comps = trace_components(LeafDiagram.unknot(), {})
    assert len(comps) == 1
    assert not comps[0].open


def test_source_value_counts_writhe(kink):
    assert source_value(kink) == Scalar.var('a')
    assert source_value(LeafDiagram.unknot()) == unknot_value('a')


@pytest.mark.parametrize('text,error', [
    ('crossing c1 +\narc e0 in:0 c1:over\n', NonGenericDiagramError),
    ('arc e0 in:0 c9:over\narc e1 c9:over out:0\n', DiagramFormatError),
    ('arc e0 in:0 out:0\nwall e0 w1 +1\ncut e0 k1\n', NonGenericDiagramError),
    ('arc e0 in:0 out:0\nseg e0 turn 0\nseg e0 turn 0\n', DiagramFormatError),
    ('knot e0\n', DiagramFormatError),
    ('seg e7 turn 1\n', DiagramFormatError),
    ('crossing c1 x\n', DiagramFormatError),
    ('arc e0 in:0 out:1\n', NonGenericDiagramError),
])
def test_diagram_parse_errors(text, error):
    with pytest.raises(error):
        LeafDiagram.parse(text)


def test_load_reports_the_bad_file(tmp_path, caplog):
    path = tmp_path / 'bad.diag'
    path.write_text('knot e0\n')
    with pytest.raises(DiagramFormatError):
        LeafDiagram.load(path)
    assert 'bad.diag' in caplog.text


# -------------------------------------------------------------- charts
def test_chart_round_trip(torus_chart):
    assert torus_chart.kind == 'torus'
    assert not torus_chart.trivial
    assert CoverChart.parse(torus_chart.to_text()) == torus_chart
    assert torus_chart.walls['w1'].turn == Fraction(1)


@pytest.mark.parametrize('text', [
    'chart sphere\n',
    'chart torus\nwall w1 1 1 turn 0 class 0 0\n',
    'wall w1 1 2 turn 0 class 0 0\n',
    'chart planar\nface f1 3 1/2\n',
    'chart planar\nwall w1 1 2\n',
])
def test_chart_parse_errors(text):
    with pytest.raises(DiagramFormatError):
        CoverChart.parse(text)


def test_unknown_wall_is_rejected():
    diagram = LeafDiagram.load(HERE / 'torus_curve.diag')
    with pytest.raises(DiagramFormatError, match="unknown wall"):
        enumerate_lifts(diagram, CoverChart.trivial_chart())


# -------------------------------------------------------------- torus target
def test_torus_curve_has_a_single_detour_lift(torus_chart):
    lifts = LiftEngine(torus_chart).enumerate_lifts(LeafDiagram.load(HERE / 'torus_curve.diag'))
    assert len(lifts) == 1
    term = lifts.terms[0]
    assert term.sheets['t0'] == (1, 2, 1)
    assert term.detours == (('t0', 0),)
    assert term.weight == Scalar.var('a')


def test_torus_curve_gl1_value(torus_chart):
    lifts = enumerate_lifts(LeafDiagram.load(HERE / 'torus_curve.diag'), torus_chart)
    assert evaluate(lifts, 'gl1') == QuantumTorus().monomial(1, 1)


def test_sign_line_changes_the_sign():
    chart = default_torus_chart()
    plain = LeafDiagram.load(HERE / 'torus_curve.diag')
    arcs = {k: a.copy() for k, a in plain.arcs.items()}
    arcs['t0'].events.insert(0, SignEvent('l1'))
    arcs['t0'].segments.insert(1, Segment())
    marked = LeafDiagram(plain.crossings, arcs)
    assert evaluate_homological(enumerate_lifts(marked, chart)) == \
        -evaluate_homological(enumerate_lifts(plain, chart))


def test_events_are_parsed_in_order():
    arc = LeafDiagram.load(HERE / 'torus_curve.diag').arcs['t0']
    assert arc.events == [WallEvent('w1', 1), CutEvent('k1')]
    assert arc.segments[0].cls == (1, 0)


def test_trivial_target_needs_trivial_chart(torus_chart):
    lifts = enumerate_lifts(LeafDiagram.load(HERE / 'torus_curve.diag'), torus_chart)
    with pytest.raises(EvaluationError):
        evaluate(lifts, 'trivial')


def test_gl1_target_rejects_sheet_variables():
    with pytest.raises(EvaluationError, match="other than a"):
        evaluate(enumerate_lifts(LeafDiagram.unknot()), 'gl1')


def test_unknown_target():
    with pytest.raises(ValueError, match="Unsupported target"):
        evaluate(enumerate_lifts(LeafDiagram.unknot()), 'sl2')


# -------------------------------------------------------------- braid closures
def test_annular_sigma1_lift_is_coproduct():
    braid = BraidWord(2, (1,))
    diagram = LeafDiagram.from_braid(braid, 'annular')
    value = evaluate_annular(enumerate_lifts(diagram, CoverChart.trivial_chart('annular')))
    assert value == coproduct(sigma1_closure_expected())


def test_annular_evaluation_needs_braid_layout(kink):
    with pytest.raises(EvaluationError):
        evaluate_annular(enumerate_lifts(kink, CoverChart.trivial_chart('annular')))


@pytest.mark.parametrize('word', ['s1 s1', 's1 -s2', 's1 s2 s1 s2'])
def test_planar_closure_matches_homflypt(word):
    braid = BraidWord.parse(word)
    lifts = enumerate_lifts(LeafDiagram.from_braid(braid, 'planar'))
    assert evaluate_trivial_cover(lifts) == planar_closure_value(braid, 'a1a2')


@pytest.mark.parametrize('word', [(), (1,), (-1,), (1, 1), (1, -2), (2, 1, -2)])
def test_coproduct_on_small_braids(word):
    strands = max((abs(g) for g in word), default=0) + 1
    assert verify_coproduct_on_braid(BraidWord(strands, word)).verified


def test_rotation_representatives_keep_one_word_per_class():
    words = [BraidWord(3, w) for w in [(), (1, -2), (-2, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (2,)]]
    reps = rotation_representatives(words)
    assert [b.word for b in reps] == [(), (1, -2), (1, 1, 2), (2,)]


def test_sweep_counts_words_and_rotation_classes():
    report = verify_coproduct_sweep(2, 3, random_cases=2, seed=3)
    assert report.verified
    # one strand: the empty word; two strands: 1 + 2 + 3 + 4 rotation classes of lengths 0..3
    assert report.notes == {'words': 1 + 15, 'checked': 1 + 10 + 2}


def test_sweep_with_process_pool_matches_serial():
    serial = verify_coproduct_sweep(2, 2, random_cases=1, seed=4, random_strands=3, random_length=3)
    pooled = verify_coproduct_sweep(2, 2, random_cases=1, seed=4, random_strands=3, random_length=3, workers=2)
    assert pooled.verified
    assert [r.grading for r in pooled.residuals] == [r.grading for r in serial.residuals]


def test_relation_suites_small():
    assert skein_relation_suite(seed=0, cases=3, max_strands=3, max_length=3).verified
    assert move_invariance_suite(seed=0, cases=2).verified


@pytest.mark.slow
def test_coproduct_sweep():
    assert verify_coproduct_sweep(3, 3, random_cases=3, seed=1, random_strands=4, random_length=5).verified


@pytest.mark.slow
def test_skein_relation_on_hundred_embeddings():
    report = skein_relation_suite(seed=0, cases=100)
    assert report.verified, [r.grading for r in report.failures()][:5]


@pytest.mark.slow
def test_coproduct_sweep_four_strands_length_six():
    report = verify_coproduct_sweep(4, 6, random_cases=100, seed=0, workers=os.cpu_count() or 1)
    assert report.notes['words'] == 61576
    assert report.verified, [r.grading for r in report.failures()][:5]
