import math
import xml.etree.ElementTree as ET

import pytest

from hyperdomino.brackets import ModelWindow, PhaseSequence
from hyperdomino.fibonacci import BLACK, WHITE, LevelTable, quarter_size
from hyperdomino.render import (
    APOTHEM,
    CIRCUMRADIUS,
    COSH_CIRCUMRADIUS,
    DiscIsometry,
    RenderError,
    closure_errors,
    emit_disc_svg,
    emit_line_svg,
    hyperbolic_distance,
    layout,
)
from hyperdomino.trilaterals import lift

SVG = "{http://www.w3.org/2000/svg}"


def test_circumradius_regression():
    assert COSH_CIRCUMRADIUS == pytest.approx(1.198880187289, abs=1e-12)
    assert CIRCUMRADIUS == pytest.approx(0.620671737556, abs=1e-12)
    assert APOTHEM == pytest.approx(0.545274831754, abs=1e-12)
    # same right triangle: the leg next to the pi/7 angle is the apothem
    assert math.tanh(APOTHEM) == pytest.approx(math.cos(math.pi / 7) * math.tanh(CIRCUMRADIUS), abs=1e-14)


def test_reflection_is_involution():
    for k in range(7):
        r = DiscIsometry.edge_reflection(k)
        assert r.compose(r).close_to(DiscIsometry.identity())


def test_composition_drift():
    t = DiscIsometry.identity()
    for i in range(20):
        t = t.compose(DiscIsometry.edge_reflection((3 * i) % 7))
    assert t.drift() < 1e-9
    for z in (0j, 0.3 + 0.2j, -0.5j):
        assert abs(t(z)) < 1


def test_round_trip_returns_to_identity():
    path = [(2 * i + 1) % 7 for i in range(10)]
    t = DiscIsometry.identity()
    for k in path + path[::-1]:
        t = t.compose(DiscIsometry.edge_reflection(k))
    assert t.close_to(DiscIsometry.identity(), 1e-9)


def test_isometry_preserves_distance():
    t = DiscIsometry.edge_reflection(2).compose(DiscIsometry.edge_reflection(5))
    z, w = 0.1 + 0.3j, -0.4 + 0.05j
    assert hyperbolic_distance(t(z), t(w)) == pytest.approx(hyperbolic_distance(z, w))


@pytest.mark.parametrize("levels", range(1, 7))
def test_counts_and_closure(levels):
    table = LevelTable(WHITE, levels)
    hexes = layout(table)
    assert len(hexes) == quarter_size(levels)
    assert max(closure_errors(hexes, table), default=0) < 1e-6


def test_heptagons_regular_and_distinct():
    table = LevelTable(WHITE, 5)
    hexes = layout(table)
    for h in hexes:
        c = h.center
        ds = [hyperbolic_distance(c, v) for v in h.vertices]
        assert max(ds) - min(ds) < 1e-9
    centres = [h.center for h in hexes]
    for i, a in enumerate(centres):
        for b in centres[:i]:
            assert hyperbolic_distance(a, b) > 1.0


def test_interior_angle():
    # law of cosines in the triangle (v1, v0, v6) gives the angle at v0
    for h in layout(LevelTable(WHITE, 3)):
        v = h.vertices
        side = hyperbolic_distance(v[0], v[1])
        diag = hyperbolic_distance(v[1], v[6])
        cos_angle = (math.cosh(side) ** 2 - math.cosh(diag)) / math.sinh(side) ** 2
        assert math.acos(cos_angle) == pytest.approx(2 * math.pi / 3, abs=1e-9)


def test_quarter_svg():
    text = emit_disc_svg(layout(LevelTable(WHITE, 3)))
    root = ET.fromstring(text)
    assert len(root.findall(f"{SVG}path")) == 12
    assert text == emit_disc_svg(layout(LevelTable(WHITE, 3)))
    assert 'viewBox="-1.050000000 -1.050000000 2.100000000 2.100000000"' in text


def test_empty_svg():
    root = ET.fromstring(emit_disc_svg([]))
    assert root.findall(f"{SVG}path") == []
    assert len(root.findall(f"{SVG}circle")) == 1


def test_points_inside_disc():
    for h in layout(LevelTable(BLACK, 7)):
        assert all(abs(v) < 1 for v in h.vertices)


def test_layout_budget():
    with pytest.raises(RenderError):
        layout(LevelTable(WHITE, 12))


def test_line_svg():
    w = ModelWindow(0, 64, PhaseSequence.zeros(3), 3)
    root = ET.fromstring(emit_line_svg(w))
    paths = root.findall(f"{SVG}path")
    assert len(paths) == len(lift(w, inside=True))
    dashed = [p for p in paths if p.get("class") == "phantom"]
    assert dashed and all(p.get("stroke-dasharray") for p in dashed)
    assert all(p.get("stroke-dasharray") is None for p in paths if p.get("class") == "triangle")
    assert emit_line_svg(w) == emit_line_svg(w)
    ET.fromstring(emit_line_svg(lift(w)))
