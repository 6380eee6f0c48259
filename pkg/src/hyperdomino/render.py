"""SVG output: heptagrid sectors in the Poincare disc and line diagrams of trilaterals.

Heptagons are placed by reflecting a central one in its edges along the
tree paths. An isometry is kept as an SU(1,1) matrix plus a flag telling
whether it reverses orientation; a reflection is an anti-Moebius map
``z -> M conj(z)``. Floating point is fine here: nothing downstream relies
on exact geometry.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .brackets import Color, ModelWindow
from .fibonacci import BLACK, WHITE, LevelTable, NodeColor, TreeAddress, address_at
from .trilaterals import Kind, Trilateral, lift


class RenderError(RuntimeError):
    pass


# Right triangle with angles pi/7 (at the centre) and pi/3 (at a vertex):
# circumradius R and apothem a of the heptagon with interior angle 2pi/3.
COSH_CIRCUMRADIUS = 1 / (math.tan(math.pi / 7) * math.tan(math.pi / 3))
COSH_APOTHEM = math.cos(math.pi / 3) / math.sin(math.pi / 7)
CIRCUMRADIUS = math.acosh(COSH_CIRCUMRADIUS)
APOTHEM = math.acosh(COSH_APOTHEM)
# Euclidean radii in the disc of the central heptagon's vertices and edge mid-points
DISC_VERTEX_RADIUS = math.tanh(CIRCUMRADIUS / 2)
DISC_APOTHEM_RADIUS = math.tanh(APOTHEM / 2)

BASE_VERTICES = tuple(DISC_VERTEX_RADIUS * cmath.exp(2j * math.pi * k / 7) for k in range(7))

# Edges of a heptagon are labelled counterclockwise from the edge shared with
# the father (label 1); sons lie across these labels.
SON_EDGE_LABELS = {BLACK: (4, 5), WHITE: (3, 4, 5)}


@dataclass(frozen=True)
class DiscIsometry:
    """``z -> (a w + b) / (conj(b) w + conj(a))`` with ``w = conj(z)`` when ``flip``."""

    a: complex
    b: complex
    flip: bool = False

    @classmethod
    def identity(cls) -> "DiscIsometry":
        return cls(1 + 0j, 0j, False)

    @classmethod
    def edge_reflection(cls, k: int) -> "DiscIsometry":
        """Reflection in the line through edge k of the central heptagon."""
        phi = 2 * math.pi * (k + 0.5) / 7
        ra = DISC_APOTHEM_RADIUS
        c = cmath.exp(1j * phi) * (1 + ra * ra) / (2 * ra)
        r = (1 - ra * ra) / (2 * ra)
        return cls(1j * c / r, -1j / r, True)

    def __call__(self, z: complex) -> complex:
        w = z.conjugate() if self.flip else z
        return (self.a * w + self.b) / (self.b.conjugate() * w + self.a.conjugate())

    def compose(self, other: "DiscIsometry") -> "DiscIsometry":
        """``self after other``."""
        a2, b2 = (other.a.conjugate(), other.b.conjugate()) if self.flip else (other.a, other.b)
        a = self.a * a2 + self.b * b2.conjugate()
        b = self.a * b2 + self.b * a2.conjugate()
        return DiscIsometry(a, b, self.flip != other.flip).normalized()

    def normalized(self) -> "DiscIsometry":
        n = abs(self.a) ** 2 - abs(self.b) ** 2
        if n <= 0:
            raise RenderError("isometry degenerated")
        s = math.sqrt(n)
        return DiscIsometry(self.a / s, self.b / s, self.flip)

    def drift(self) -> float:
        """Departure from |a|^2 - |b|^2 = 1, relative to the size of the entries."""
        big = abs(self.a) ** 2 + abs(self.b) ** 2
        return abs(abs(self.a) ** 2 - abs(self.b) ** 2 - 1) / big

    def close_to(self, other: "DiscIsometry", tol: float = 1e-9) -> bool:
        if self.flip != other.flip:
            return False
        # the matrix is defined up to sign
        return min(
            abs(self.a - other.a) + abs(self.b - other.b),
            abs(self.a + other.a) + abs(self.b + other.b),
        ) < tol


def hyperbolic_distance(z: complex, w: complex) -> float:
    return 2 * math.atanh(abs((z - w) / (1 - z.conjugate() * w)))


@dataclass
class HeptagonLayout:
    level: int
    offset: int
    color: NodeColor
    transform: DiscIsometry
    father_edge: int
    root: NodeColor = WHITE

    @property
    def center(self) -> complex:
        return self.transform(0j)

    @property
    def vertices(self) -> list[complex]:
        return [self.transform(v) for v in BASE_VERTICES]

    def edge(self, k: int) -> tuple[complex, complex]:
        vs = self.vertices
        return vs[k % 7], vs[(k + 1) % 7]

    def address(self) -> TreeAddress:
        return address_at(self.root, self.level, self.offset)

    def son_edges(self) -> list[int]:
        s = -1 if self.transform.flip else 1
        return [(self.father_edge + s * (lab - 1)) % 7 for lab in SON_EDGE_LABELS[self.color]]


MAX_RENDER_LEVELS = 10


def layout(table: LevelTable, levels: int | None = None) -> list[HeptagonLayout]:
    """One heptagon per node of the first ``levels`` levels, in BFS order."""
    levels = table.depth if levels is None else levels
    if levels > min(table.depth, MAX_RENDER_LEVELS):
        raise RenderError(f"cannot lay out {levels} levels (limit {min(table.depth, MAX_RENDER_LEVELS)})")
    root = HeptagonLayout(0, 0, table.root, DiscIsometry.identity(), 0, table.root)
    out = [root]
    current = [root]
    for lvl in range(levels - 1):
        nxt = []
        for h in current:
            starts = table.child_start[lvl]
            sons = range(int(starts[h.offset]), int(starts[h.offset + 1]))
            for k, o in zip(h.son_edges(), sons):
                t = h.transform.compose(DiscIsometry.edge_reflection(k))
                color = WHITE if table.white[lvl + 1][o] else BLACK
                nxt.append(HeptagonLayout(lvl + 1, o, color, t, k, table.root))
        out.extend(nxt)
        current = nxt
    return out


def _same_edge(p: tuple[complex, complex], q: tuple[complex, complex]) -> float:
    return min(abs(p[0] - q[0]) + abs(p[1] - q[1]), abs(p[0] - q[1]) + abs(p[1] - q[0]))


def closure_errors(layouts: Sequence[HeptagonLayout], table: LevelTable) -> list[float]:
    """Edge mismatch between every father/son pair and every pair of level neighbours."""
    index = {(h.level, h.offset): h for h in layouts}
    errs = []
    for h in layouts:
        if h.level > 0:
            starts = table.child_start[h.level - 1]
            father = index[(h.level - 1, int(np.searchsorted(starts, h.offset, side="right")) - 1)]
            # the son's father edge is the base edge it was reflected across
            errs.append(_same_edge(h.edge(h.father_edge), father.edge(h.father_edge)))
        right = index.get((h.level, h.offset + 1))
        if right is not None:
            errs.append(min(_same_edge(h.edge(i), right.edge(j)) for i in range(7) for j in range(7)))
    return errs


PALETTE = {
    "B": "#3b3b3b",
    "W": "#f2efe6",
    "W1": "#8fb8de",
    "W2": "#f4d35e",
    "W3": "#9bc995",
    "T": "#f4d35e",
    "R": "#6b5b95",
    "Q1": "#8fb8de",
    "Q2": "#ee964b",
    "Q3": "#9bc995",
    "blue": "#1f5fbf",
    "red": "#c0392b",
    "stroke": "#222222",
    "disc": "#ffffff",
}

VIEWBOX = (-1.05, -1.05, 2.1, 2.1)


def _fmt(x: float) -> str:
    s = f"{x:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def _point(z: complex) -> str:
    return f"{_fmt(z.real)},{_fmt(-z.imag)}"


def node_coloring(h: HeptagonLayout) -> str:
    return PALETTE[h.color.value]


def emit_disc_svg(layouts: Iterable[HeptagonLayout], coloring: Callable[[HeptagonLayout], str] = node_coloring) -> str:
    x, y, w, hgt = VIEWBOX
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{_fmt(x)} {_fmt(y)} {_fmt(w)} {_fmt(hgt)}">',
        f'<circle class="disc" cx="0" cy="0" r="1" fill="{PALETTE["disc"]}" stroke="{PALETTE["stroke"]}" stroke-width="0.004"/>',
    ]
    for h in layouts:
        vs = h.vertices
        if any(abs(v) >= 1 for v in vs):
            raise RenderError(f"heptagon at level {h.level} offset {h.offset} leaves the disc")
        d = "M" + " L".join(_point(v) for v in vs) + " Z"
        lines.append(
            f'<path class="heptagon" data-level="{h.level}" data-offset="{h.offset}" d="{d}" '
            f'fill="{coloring(h)}" stroke="{PALETTE["stroke"]}" stroke-width="0.002"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_line_svg(source: ModelWindow | Sequence[Trilateral], scale: int = 8) -> str:
    """Trilaterals drawn on a horizontal axis: triangles solid, phantoms dashed."""
    if isinstance(source, ModelWindow):
        window: ModelWindow | None = source
        trilaterals = lift(source, inside=True)
        lo, hi = source.lo, source.hi
    else:
        window = None
        trilaterals = list(source)
        lo = min((t.vertex_pos for t in trilaterals), default=0)
        hi = max((t.basis_pos for t in trilaterals), default=1)
    top = max((int(t.half_height) for t in trilaterals), default=1)
    width = (hi - lo + 2) * scale
    height = (2 * top + 4) * scale
    ox, oy = (1 - lo) * scale, (top + 2) * scale
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<line class="axis" x1="0" y1="{oy}" x2="{width}" y2="{oy}" stroke="{PALETTE["stroke"]}" stroke-width="0.5"/>',
    ]
    for t in sorted(trilaterals, key=lambda t: (-t.generation, t.vertex_pos)):
        h = int(t.half_height) * scale
        vx, bx = ox + t.vertex_pos * scale, ox + t.basis_pos * scale
        dash = ' stroke-dasharray="4,3"' if t.kind is Kind.PHANTOM else ""
        lines.append(
            f'<path class="{t.kind.value}" data-generation="{t.generation}" '
            f'd="M{vx},{oy} L{bx},{oy - h} L{bx},{oy + h} Z" fill="none" '
            f'stroke="{PALETTE[t.color.value]}" stroke-width="1"{dash}/>'
        )
    if window is not None:
        for le in window.letters:
            fill = PALETTE["blue" if le.color is Color.BLUE else "red"]
            lines.append(
                f'<text x="{ox + le.position * scale}" y="{oy + top * scale + scale}" font-size="{scale}" '
                f'text-anchor="middle" fill="{fill}">{le.label.value}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def variant_coloring(owner: Sequence, variants: Sequence[str]) -> Callable[[HeptagonLayout], str]:
    """Colour heptagons by the prototile variant covering them.

    ``owner[level][offset]`` is a placement id and ``variants[id]`` its
    variant name, as kept by an assembly map.
    """

    def color(h: HeptagonLayout) -> str:
        pid = int(owner[h.level][h.offset])
        return PALETTE[variants[pid]] if pid >= 0 else PALETTE["disc"]

    return color
