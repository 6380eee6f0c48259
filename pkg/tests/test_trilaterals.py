import itertools
from fractions import Fraction

import pytest

from hyperdomino.brackets import Color, IntervalKind, ModelWindow, PhaseSequence
from hyperdomino.trilaterals import (
    Kind,
    Trilateral,
    basis_leg_meetings,
    check_same_color_disjoint,
    dump,
    free_rows,
    free_rows_by_visibility,
    isocline_of,
    lift,
    lift_interval,
    meeting_violations,
    property_report,
    signal_rows,
    synchronization_violations,
    tower_violations,
    towers,
)

ZERO = PhaseSequence.zeros(6)


def tri(v, b, g, kind=Kind.TRIANGLE):
    return Trilateral(v, b, g, kind, Fraction(b - v))


def test_lift_examples():
    w = ModelWindow(-8, 8, ZERO, 2)
    ts = lift(w)
    assert len(ts) == len(w.all_intervals())
    t = next(t for t in ts if (t.vertex_pos, t.basis_pos, t.generation) == (0, 2, 0))
    assert t.kind is Kind.TRIANGLE and t.half_height == 2
    p = next(t for t in ts if (t.vertex_pos, t.basis_pos, t.generation) == (2, 4, 0))
    assert p.kind is Kind.PHANTOM
    for t in ts:
        assert t.basis_pos - t.vertex_pos == 2 ** (t.generation + 1)
        assert lift_interval(t.interval) == t


def test_same_color_examples():
    assert tri(4, 6, 0).nested_in(tri(3, 11, 2))
    assert tri(0, 2, 0).disjoint_from(tri(3, 11, 2))
    assert check_same_color_disjoint([tri(4, 6, 0), tri(3, 11, 2), tri(0, 2, 0)]) == []
    assert check_same_color_disjoint([tri(0, 4, 1), tri(2, 6, 1)])


def _sweep(G):
    for phases in PhaseSequence.all(G):
        yield ModelWindow(-(2 ** (G + 2)), 2 ** (G + 2), phases, G)


@pytest.mark.parametrize("G", range(1, 5))
def test_property_suite_all_phases(G):
    for w in _sweep(G):
        assert property_report(w) == []


def test_meetings_brute_force():
    # independent scan: sample the basis segment of every trilateral on a fine
    # grid and test membership in the legs of the others
    w = ModelWindow(-32, 32, PhaseSequence(1, (1, 0, 1)), 3)
    ts = lift(w, inside=True)
    found = {(m.basis_of, m.leg_of) for m in basis_leg_meetings(ts)}
    expected = set()
    for a, b in itertools.permutations(ts, 2):
        x = a.basis_pos
        if b.vertex_pos <= x <= b.basis_pos:
            for y2 in range(-2 * int(a.half_height), 2 * int(a.half_height) + 1):
                if Fraction(abs(y2), 2) == x - b.vertex_pos:
                    expected.add((a, b))
    assert found == expected
    assert all(m.basis_of != m.leg_of for m in basis_leg_meetings(ts))
    assert meeting_violations(ts) == []


def test_phantom_basis_crosses_leg_near_vertex():
    w = ModelWindow(-64, 64, ZERO, 4)
    ms = [m for m in basis_leg_meetings(lift(w, inside=True)) if m.basis_of.kind is Kind.PHANTOM]
    assert ms and all(m.on_vertex_half for m in ms)
    assert any(m.leg_of.generation > m.basis_of.generation for m in ms)


def test_meeting_off_vertex_half_is_reported():
    bad = [tri(0, 8, 2), tri(-2, 6, 2, Kind.PHANTOM)]
    assert meeting_violations(bad)


def test_towers():
    w = ModelWindow(-64, 64, ZERO, 4)
    phantoms = [t for t in lift(w, inside=True) if t.kind is Kind.PHANTOM]
    ts = towers(phantoms)
    assert sum(len(t.members) for t in ts) == len(phantoms)
    for t in ts:
        gens = [m.generation for m in t.members]
        assert gens == list(range(len(gens)))
        assert t.problems() == []
    assert tower_violations(phantoms) == []
    with pytest.raises(ValueError):
        towers([tri(0, 2, 0)])


def test_isoclines():
    assert isocline_of(0).display == 0
    assert isocline_of(1).display == 5
    assert isocline_of(4).display == 0
    assert isocline_of(-1).display == 15


@pytest.mark.parametrize("g,count", [(1, 3), (3, 5), (5, 9)])
def test_free_rows_counts(g, count):
    w = ModelWindow(-256, 256, ZERO, 6)
    for t in lift(w, inside=True):
        if t.kind is Kind.TRIANGLE and t.generation == g:
            rows = free_rows(t, w)
            assert len(rows) == count
            assert rows == free_rows_by_visibility(t, w)
            assert all(5 * t.vertex_pos < r.absolute < 5 * t.basis_pos for r in rows)


def test_free_rows_cross_check_all_phases():
    for w in _sweep(4):
        for t in lift(w, inside=True):
            if t.kind is Kind.TRIANGLE and t.color is Color.RED:
                assert free_rows(t, w) == free_rows_by_visibility(t, w)


def test_free_rows_needs_red_triangle():
    w = ModelWindow(-16, 16, ZERO, 3)
    with pytest.raises(ValueError):
        free_rows(tri(0, 2, 0), w)


def test_signal_rows_of_inner_triangles():
    w = ModelWindow(-64, 64, ZERO, 4)
    t = tri(7, 23, 3)
    rows = signal_rows(t, w)
    # the red generation-1 triangle [9,13] inside puts upper red signals on rows 10..12
    assert any(r.isocline.absolute == 55 and r.color is Color.RED and r.level.value == "upper" for r in rows)


def test_synchronization():
    for w in _sweep(3):
        assert synchronization_violations(lift(w)) == []
    assert synchronization_violations([tri(0, 2, 0), tri(3, 5, 0, Kind.PHANTOM)])


def test_dump():
    d = dump([tri(0, 2, 0)])
    assert d["format"] == 1 and d["trilaterals"][0]["half_height"] == "2"
