"""Triangles and phantoms lifted from bracket intervals.

Every interval becomes an isoceles trilateral whose height lies on a common
axis (the integer line of the brackets). Active intervals give triangles,
silent ones give phantoms. The vertex sits at the left end of the interval
and the legs have slope 1, so a trilateral of generation g spans
``[v, v + 2**(g+1)]`` on the axis and its basis has half length
``2**(g+1)``.

Positions on the axis double as isoclines: letter ``p`` sits on isocline
``5p``, and isoclines are displayed modulo 20.
"""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .brackets import (
    Color,
    Interval,
    IntervalKind,
    ModelWindow,
    color_of_generation,
    visible_blue,
)

ISOCLINE_PERIOD = 20
ISOCLINE_STEP = 5


class Kind(enum.Enum):
    TRIANGLE = "triangle"
    PHANTOM = "phantom"


@dataclass(frozen=True, order=True)
class Trilateral:
    vertex_pos: int
    basis_pos: int
    generation: int
    kind: Kind
    half_height: Fraction

    @property
    def color(self) -> Color:
        return color_of_generation(self.generation)

    @property
    def interval(self) -> Interval:
        k = IntervalKind.ACTIVE if self.kind is Kind.TRIANGLE else IntervalKind.SILENT
        return Interval(self.vertex_pos, self.basis_pos, self.generation, k)

    @property
    def midpoint(self) -> int:
        return (self.vertex_pos + self.basis_pos) // 2

    def leg_point(self, x) -> Fraction:
        """Distance from the axis of the legs at axis coordinate ``x``."""
        return Fraction(x) - self.vertex_pos

    def nested_in(self, other: "Trilateral") -> bool:
        return other.vertex_pos <= self.vertex_pos and self.basis_pos <= other.basis_pos

    def disjoint_from(self, other: "Trilateral") -> bool:
        return self.basis_pos < other.vertex_pos or other.basis_pos < self.vertex_pos

    def dump(self) -> dict:
        return {
            "kind": self.kind.value,
            "generation": self.generation,
            "color": self.color.value,
            "vertex": self.vertex_pos,
            "basis": self.basis_pos,
            "half_height": str(self.half_height),
        }

    def __str__(self) -> str:
        return f"{self.kind.value} g={self.generation} [{self.vertex_pos},{self.basis_pos}]"


def lift_interval(iv: Interval) -> Trilateral:
    kind = Kind.TRIANGLE if iv.active else Kind.PHANTOM
    return Trilateral(iv.left, iv.right, iv.generation, kind, Fraction(iv.right - iv.left))


def lift(window: ModelWindow, inside: bool = False) -> list[Trilateral]:
    return [lift_interval(iv) for iv in window.all_intervals(inside=inside)]


def check_same_color_disjoint(trilaterals: Iterable[Trilateral], only_triangles: bool = True) -> list[str]:
    """Pairs of same-coloured trilaterals that overlap without being nested."""
    items = sorted(
        t for t in trilaterals if not only_triangles or t.kind is Kind.TRIANGLE
    )
    violations = []
    by_color: dict[Color, list[Trilateral]] = defaultdict(list)
    for t in items:
        by_color[t.color].append(t)
    for color in (Color.BLUE, Color.RED):
        group = by_color[color]
        # sorted by vertex, so only later items starting before our basis can overlap
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                if b.vertex_pos > a.basis_pos:
                    break
                if not (a.nested_in(b) or b.nested_in(a)):
                    violations.append(f"overlap: {a} / {b}")
    return violations


@dataclass
class Tower:
    midpoint: int
    members: list[Trilateral]

    def problems(self) -> list[str]:
        out = []
        for lo, hi in zip(self.members, self.members[1:]):
            if not (hi.vertex_pos < lo.vertex_pos and lo.basis_pos < hi.basis_pos):
                out.append(f"tower at {self.midpoint}: {lo} not strictly inside {hi}")
            if lo.color is hi.color:
                out.append(f"tower at {self.midpoint}: {lo} and {hi} share a colour")
        return out


def towers(phantoms: Iterable[Trilateral]) -> list[Tower]:
    groups: dict[int, list[Trilateral]] = defaultdict(list)
    for p in phantoms:
        if p.kind is not Kind.PHANTOM:
            raise ValueError(f"{p} is not a phantom")
        groups[p.midpoint].append(p)
    return [
        Tower(m, sorted(groups[m], key=lambda t: t.generation)) for m in sorted(groups)
    ]


def tower_violations(phantoms: Sequence[Trilateral]) -> list[str]:
    out = []
    ts = towers(phantoms)
    if sum(len(t.members) for t in ts) != len(phantoms):
        out.append("towers do not partition the phantoms")
    for t in ts:
        out.extend(t.problems())
    return out


@dataclass(frozen=True)
class Meeting:
    basis_of: Trilateral
    leg_of: Trilateral
    at: Fraction  # distance from the leg's vertex, measured along the axis

    @property
    def on_vertex_half(self) -> bool:
        return 2 * self.at <= self.leg_of.half_height

    def __str__(self) -> str:
        return f"basis of {self.basis_of} meets leg of {self.leg_of} at {self.at}/{self.leg_of.half_height}"


def basis_leg_meetings(trilaterals: Sequence[Trilateral]) -> list[Meeting]:
    """Every point where the basis of one trilateral crosses a leg of another.

    The basis of A is the segment ``x = basis(A), |y| <= half_height(A)``; a
    leg of B is ``|y| = x - vertex(B)`` for ``vertex(B) <= x <= basis(B)``.
    They meet when ``vertex(B) <= basis(A) <= basis(B)`` and the leg is no
    wider than the basis there.
    """
    items = sorted(trilaterals, key=lambda t: (t.vertex_pos, t.basis_pos, t.generation))
    out = []
    for a in items:
        x = a.basis_pos
        for b in items:
            if b.vertex_pos > x:
                break
            if b == a or x > b.basis_pos:
                continue
            d = b.leg_point(x)
            if d <= a.half_height:
                out.append(Meeting(a, b, d))
    return out


def meeting_violations(trilaterals: Sequence[Trilateral]) -> list[str]:
    return [f"off the vertex half: {m}" for m in basis_leg_meetings(trilaterals) if not m.on_vertex_half]


@dataclass(frozen=True, order=True)
class IsoclineIndex:
    absolute: int

    @property
    def display(self) -> int:
        return self.absolute % ISOCLINE_PERIOD


def isocline_of(p: int) -> IsoclineIndex:
    return IsoclineIndex(ISOCLINE_STEP * p)


class RowLevel(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"
    BASIS = "basis"


class Laterality(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    NONE = "none"


@dataclass(frozen=True, order=True)
class SignalRow:
    isocline: IsoclineIndex
    level: RowLevel
    color: Color | None
    laterality: Laterality = Laterality.NONE


def signal_rows(T: Trilateral, window: ModelWindow) -> list[SignalRow]:
    """Horizontal signals crossing the letter rows strictly inside ``T``.

    Letters put a signal of their own colour on their row. A red triangle
    nested in ``T`` emits upper red signals from its legs on every row
    strictly between its vertex and its basis; its vertex row gets a lower
    signal and its basis row a basis signal.
    """
    rows = []
    for x in range(T.vertex_pos + 1, T.basis_pos):
        rows.append(SignalRow(isocline_of(x), RowLevel.UPPER, window.letter(x).color))
    inner = [
        lift_interval(iv)
        for g in range(T.generation)
        for iv in window.intervals(g, IntervalKind.ACTIVE)
        if iv.color is Color.RED and T.vertex_pos <= iv.left and iv.right <= T.basis_pos
    ]
    for u in inner:
        rows.append(SignalRow(isocline_of(u.vertex_pos), RowLevel.LOWER, Color.RED))
        rows.append(SignalRow(isocline_of(u.basis_pos), RowLevel.BASIS, None))
        for x in range(u.vertex_pos + 1, u.basis_pos):
            rows.append(SignalRow(isocline_of(x), RowLevel.UPPER, Color.RED, Laterality.LEFT))
            rows.append(SignalRow(isocline_of(x), RowLevel.UPPER, Color.RED, Laterality.RIGHT))
    return sorted(set(rows), key=lambda r: (r.isocline, r.level.value, str(r.color), r.laterality.value))


def free_rows(T: Trilateral, window: ModelWindow) -> list[IsoclineIndex]:
    """Letter rows strictly inside a red triangle that carry no red signal."""
    if T.kind is not Kind.TRIANGLE or T.color is not Color.RED:
        raise ValueError(f"{T} is not a red triangle")
    red = {r.isocline for r in signal_rows(T, window) if r.color is Color.RED}
    return [
        isocline_of(x)
        for x in range(T.vertex_pos + 1, T.basis_pos)
        if isocline_of(x) not in red
    ]


def free_rows_by_visibility(T: Trilateral, window: ModelWindow) -> list[IsoclineIndex]:
    return [isocline_of(x) for x in visible_blue(T.interval, window)]


def synchronization_violations(trilaterals: Iterable[Trilateral]) -> list[str]:
    """Per generation, triangles and phantoms must end on the same isoclines (mod 20)."""
    ends: dict[tuple[int, Kind], set[int]] = defaultdict(set)
    for t in trilaterals:
        ends[(t.generation, t.kind)].update(
            {isocline_of(t.vertex_pos).display, isocline_of(t.basis_pos).display}
        )
    out = []
    for g in sorted({g for g, _ in ends}):
        tri, ph = ends.get((g, Kind.TRIANGLE)), ends.get((g, Kind.PHANTOM))
        if tri is not None and ph is not None and tri != ph:
            out.append(f"generation {g}: triangles on {sorted(tri)}, phantoms on {sorted(ph)}")
    return out


def property_report(window: ModelWindow) -> list[str]:
    """All trilateral property checks on the trilaterals lying inside the window."""
    ts = lift(window, inside=True)
    phantoms = [t for t in ts if t.kind is Kind.PHANTOM]
    return (
        check_same_color_disjoint(ts)
        + tower_violations(phantoms)
        + meeting_violations(ts)
        + synchronization_violations(ts)
    )


def dump(trilaterals: Iterable[Trilateral]) -> dict:
    return {"format": 1, "trilaterals": [t.dump() for t in trilaterals]}
