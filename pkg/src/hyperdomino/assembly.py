"""Periodic assembly of super-prototiles over a white-rooted Fibonacci tree.

Super-prototiles are bordered quarters (W1, W2, W3) and bars (B) of a fixed
depth d. Regions are built by induction:

* step 0: every region is a single prototile (T, Q^2 -> W2, Q^1 -> W1,
  Q^3 -> W3, R -> B);
* step n+1: a top prototile, then a first row of step-n regions hung on the
  sons of its bottom border, then a second row of prototiles hung on the
  sons of the bottom border of those regions.

Under a black node the sons receive (R, Q^1) or (B, W1); under a white node
(R, Q^2, Q^3) or (B, W2, W3). For T the middle son of the junction point
receives T_n instead of Q_n^2, which puts T_n inside T_{n+1} and the root of
T_n on the axis through the junction point.

Everything lives in the coordinates of one white-rooted tree per region,
stored level by level in numpy arrays (owner prototile and local index per
tile), so the checks are array comparisons.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .brackets import IntervalKind, ModelWindow
from .fibonacci import (
    BLACK,
    WHITE,
    ConstructionError,
    LevelTable,
    NodeColor,
    TreeAddress,
    address_at,
    bar_size,
    quarter_size,
)


class Variant(enum.Enum):
    B = "B"
    W1 = "W1"
    W2 = "W2"
    W3 = "W3"

    @property
    def root_color(self) -> NodeColor:
        return BLACK if self is Variant.B else WHITE

    @property
    def code(self) -> int:
        return _VARIANTS.index(self)


_VARIANTS = [Variant.B, Variant.W1, Variant.W2, Variant.W3]

# (inside, outside left, outside right)
_BORDERS = {
    Variant.B: (BLACK, WHITE, WHITE),
    Variant.W1: (WHITE, BLACK, BLACK),
    Variant.W2: (WHITE, BLACK, WHITE),
    Variant.W3: (WHITE, WHITE, BLACK),
}


@dataclass(frozen=True)
class SuperPrototile:
    variant: Variant
    depth: int
    payload: object | None = None

    def __post_init__(self) -> None:
        if self.depth < 2:
            raise ValueError("prototile depth must be >= 2")

    @property
    def inside_color(self) -> NodeColor:
        return _BORDERS[self.variant][0]

    @property
    def outside_left(self) -> NodeColor:
        return _BORDERS[self.variant][1]

    @property
    def outside_right(self) -> NodeColor:
        return _BORDERS[self.variant][2]

    @property
    def size(self) -> int:
        return bar_size(self.depth) if self.variant is Variant.B else quarter_size(self.depth)


class RegionKind(enum.Enum):
    T = "T"
    R = "R"
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"

    @property
    def top_variant(self) -> Variant:
        return _TOP[self]

    @property
    def root_color(self) -> NodeColor:
        return BLACK if self is RegionKind.R else WHITE


_TOP = {
    RegionKind.T: Variant.W2,
    RegionKind.R: Variant.B,
    RegionKind.Q1: Variant.W1,
    RegionKind.Q2: Variant.W2,
    RegionKind.Q3: Variant.W3,
}

_REGION_ROW = {BLACK: (RegionKind.R, RegionKind.Q1), WHITE: (RegionKind.R, RegionKind.Q2, RegionKind.Q3)}
_TILE_ROW = {BLACK: (Variant.B, Variant.W1), WHITE: (Variant.B, Variant.W2, Variant.W3)}


def region_height(n: int, d: int) -> int:
    return (2 * n + 1) * d


@dataclass
class Region:
    id: int
    kind: RegionKind
    n: int
    level: int
    offset: int
    height: int
    parent: int | None = None

    def top(self, table: LevelTable) -> TreeAddress:
        return address_at(table.root, self.level, self.offset)


@dataclass
class Placement:
    id: int
    variant: Variant
    level: int
    offset: int
    region: int


class GlobalMap:
    """Tiles of one region tree with the prototile covering each of them.

    ``owner[l][o]`` is the placement id covering tile ``o`` of level ``l``
    (-1 when uncovered) and ``local[l][o]`` the BFS index (from 0) of the
    tile inside that prototile; ``hits`` counts placements per tile.
    """

    def __init__(self, root: NodeColor, height: int):
        self.table = LevelTable(root, height)
        self.owner = [np.full(w, -1, dtype=np.int64) for w in self.table.widths]
        self.local = [np.full(w, -1, dtype=np.int64) for w in self.table.widths]
        self.hits = [np.zeros(w, dtype=np.int32) for w in self.table.widths]
        self.placements: list[Placement] = []
        self.regions: list[Region] = []
        self.problems: list[str] = []

    @property
    def height(self) -> int:
        return self.table.depth

    @property
    def size(self) -> int:
        return self.table.size

    def variant_codes(self) -> np.ndarray:
        return np.array([p.variant.code for p in self.placements], dtype=np.int8)

    def place(self, variant: Variant, level: int, offset: int, depth: int, region: int) -> int:
        color = WHITE if self.table.white[level][offset] else BLACK
        if color is not variant.root_color:
            self.problems.append(
                f"{variant.value} placed on a {color.name} node at level {level} offset {offset}"
            )
        pid = len(self.placements)
        self.placements.append(Placement(pid, variant, level, offset, region))
        base = 0
        for lvl, lo, hi in self.table.subtree_ranges(level, offset, depth):
            self.hits[lvl][lo:hi] += 1
            self.owner[lvl][lo:hi] = pid
            self.local[lvl][lo:hi] = np.arange(base, base + hi - lo)
            base += hi - lo
        return pid

    def remove(self, pid: int) -> None:
        """Uncover the tiles of one placement (used for negative controls)."""
        p = self.placements[pid]
        for lvl in range(p.level, self.height):
            mask = self.owner[lvl] == pid
            self.hits[lvl][mask] -= 1
            self.owner[lvl][mask] = -1
            self.local[lvl][mask] = -1

    def son_ranks(self, level: int) -> tuple[np.ndarray, np.ndarray]:
        """Colour of the father and rank among its sons for every node of ``level``."""
        starts = self.table.child_start[level - 1]
        father = np.repeat(np.arange(starts.size - 1), np.diff(starts))
        rank = np.arange(starts[-1]) - starts[father]
        return self.table.white[level - 1][father], rank

    def neighbours(self, level: int, offset: int) -> list[tuple[int, int]]:
        """Tiles of the tree sharing an edge with tile (level, offset)."""
        t = self.table
        out = []
        if offset > 0:
            out.append((level, offset - 1))
        if offset + 1 < t.widths[level]:
            out.append((level, offset + 1))
        if level > 0:
            starts = t.child_start[level - 1]
            father = int(np.searchsorted(starts, offset, side="right")) - 1
            out.append((level - 1, father))
            if not t.white[level][offset] and father > 0:
                out.append((level - 1, father - 1))
        if level + 1 < t.depth:
            out.extend((level + 1, o) for o in t.neighbours_below(level, offset))
        return out

    def labels(self, level: int, lo: int = 0, hi: int | None = None) -> np.ndarray:
        """(variant code, local index) pairs for a slice of one level."""
        codes = self.variant_codes()
        own = self.owner[level][lo:hi]
        var = np.where(own >= 0, codes[np.maximum(own, 0)], -1)
        return np.stack([var, self.local[level][lo:hi]], axis=1)


def build_region(kind: RegionKind, n: int, d: int) -> GlobalMap:
    """Region of the given kind after ``n`` induction steps with prototile depth ``d``."""
    if d < 2:
        raise ValueError("prototile depth must be >= 2")
    if n < 0:
        raise ValueError("step index must be >= 0")
    gm = GlobalMap(kind.root_color, region_height(n, d))
    _paint(gm, kind, n, d, 0, 0, None)
    return gm


def _paint(gm: GlobalMap, kind: RegionKind, n: int, d: int, level: int, offset: int, parent: int | None) -> None:
    rid = len(gm.regions)
    gm.regions.append(Region(rid, kind, n, level, offset, region_height(n, d), parent))
    gm.place(kind.top_variant, level, offset, d, rid)
    if n == 0:
        return
    t = gm.table
    # first fill row: step n-1 regions under the bottom border of the top prototile
    junction = None
    if kind is RegionKind.T:
        _, junction = _descend(t, level, offset, (1,) * (d - 1))
    (blvl, lo, hi) = t.subtree_ranges(level, offset, d)[-1]
    starts = t.child_start[blvl]
    for o in range(lo, hi):
        color = WHITE if t.white[blvl][o] else BLACK
        kinds = list(_REGION_ROW[color])
        sons = range(int(starts[o]), int(starts[o + 1]))
        if len(kinds) != len(sons):
            raise ConstructionError(f"fill row arity mismatch under level {blvl} offset {o}")
        if o == junction:
            kinds[1] = RegionKind.T
        for k, s in zip(kinds, sons):
            if (WHITE if t.white[blvl + 1][s] else BLACK) is not k.root_color:
                raise ConstructionError(f"{k.value} region on a wrongly coloured node")
            _paint(gm, k, n - 1, d, blvl + 1, s, rid)
    # second fill row: prototiles under the bottom border of those regions
    h = region_height(n, d)
    lvl = level + d + region_height(n - 1, d)
    (_, lo2, hi2) = t.subtree_ranges(level, offset, lvl - level + 1)[-1]
    father_white, rank = gm.son_ranks(lvl)
    for o in range(lo2, hi2):
        row = _TILE_ROW[WHITE if father_white[o] else BLACK]
        gm.place(row[int(rank[o])], lvl, o, d, rid)
    assert lvl + d == level + h


def _descend(t: LevelTable, level: int, offset: int, path: tuple[int, ...]) -> tuple[int, int]:
    for step in path:
        offset = int(t.child_start[level][offset]) + step
        level += 1
    return level, offset


def initial_step(d: int) -> dict[RegionKind, GlobalMap]:
    return {k: build_region(k, 0, d) for k in RegionKind}


def induction_step(regions: dict[RegionKind, GlobalMap]) -> dict[RegionKind, GlobalMap]:
    """Regions of step n+1; T_n must reappear unchanged inside T_(n+1)."""
    current = regions[RegionKind.T]
    n, d = current.regions[0].n, _depth_of(current)
    out = {k: build_region(k, n + 1, d) for k in RegionKind}
    problems = shift_invariance_check(current, out[RegionKind.T], d)
    if problems:
        raise ConstructionError("; ".join(problems[:3]))
    return out


def _depth_of(gm: GlobalMap) -> int:
    top = gm.regions[0]
    return top.height // (2 * top.n + 1)


def prototile_depth(gm: GlobalMap) -> int:
    return _depth_of(gm)


def coverage_check(gm: GlobalMap) -> list[str]:
    out = list(gm.problems)
    for lvl, h in enumerate(gm.hits):
        if (h == 0).any():
            out.append(f"level {lvl}: {int((h == 0).sum())} tiles uncovered")
        if (h > 1).any():
            out.append(f"level {lvl}: {int((h > 1).sum())} tiles covered more than once")
    return out


def arity_check(gm: GlobalMap) -> list[str]:
    """Every non-root prototile and region sits where the son rule of its father allows it."""
    out = []
    codes = gm.variant_codes()
    by_level: dict[int, list[int]] = {}
    for p in gm.placements:
        by_level.setdefault(p.level, []).append(p.offset)
    for lvl in sorted(by_level):
        if lvl == 0:
            continue
        starts = np.array(by_level[lvl], dtype=np.int64)
        father_white, rank = gm.son_ranks(lvl)
        fw, rk = father_white[starts], rank[starts]
        expected = np.where(
            fw,
            np.choose(np.minimum(rk, 2), [Variant.B.code, Variant.W2.code, Variant.W3.code]),
            np.where(rk == 0, Variant.B.code, Variant.W1.code),
        )
        got = codes[gm.owner[lvl][starts]]
        bad = np.flatnonzero(got != expected)
        out.extend(f"level {lvl} offset {int(starts[i])}: found {_VARIANTS[got[i]].value}" for i in bad[:10])
    for r in gm.regions[1:]:
        father_white, rank = gm.son_ranks(r.level)
        color = WHITE if father_white[r.offset] else BLACK
        expected = _REGION_ROW[color][int(rank[r.offset])]
        if r.kind is RegionKind.T:
            ok = expected is RegionKind.Q2
        else:
            ok = r.kind is expected
        if not ok:
            out.append(f"region {r.id} ({r.kind.value}) misplaced at level {r.level} offset {r.offset}")
    return out


def adjacency_check(gm: GlobalMap) -> list[str]:
    """Outside colours of lateral borders face the inside colour of the neighbour."""
    out = []
    variants = [p.variant for p in gm.placements]
    for lvl in range(gm.height):
        own = gm.owner[lvl]
        cut = np.flatnonzero(own[1:] != own[:-1])
        pairs = {(int(own[i]), int(own[i + 1])) for i in cut}
        for a, b in sorted(pairs):
            if a < 0 or b < 0:
                continue
            pa, pb = _BORDERS[variants[a]], _BORDERS[variants[b]]
            if pa[2] is not pb[0] or pb[1] is not pa[0]:
                out.append(
                    f"level {lvl}: {variants[a].value}#{a} | {variants[b].value}#{b} border colours disagree"
                )
    return out


def adjacent_pairs_checked(gm: GlobalMap) -> int:
    return sum(
        len({(int(a), int(b)) for a, b in zip(o[:-1], o[1:]) if a != b}) for o in gm.owner
    )


def axis_shift(d: int):
    """The shift along the axis: prefixes a tree path with d middle-son steps.

    It sends the origin (the root of T_n) to the middle son of the junction
    point of the top prototile, which is where the root of T_{n-1} lies.
    """
    prefix = (1,) * d

    def shift(path: Iterable[int]) -> tuple[int, ...]:
        return prefix + tuple(path)

    return shift


def _shifted_range(gm: GlobalMap, d: int, k: int) -> tuple[int, int, int]:
    level, offset = _descend(gm.table, 0, 0, (1,) * d)
    return gm.table.subtree_ranges(level, offset, k + 1)[-1]


def shift_invariance_check(small: GlobalMap, big: GlobalMap, d: int) -> list[str]:
    """Labels of T_n agree with those of its shifted copy inside T_{n+1}."""
    out = []
    if big.height < small.height + d:
        return [f"T_(n+1) has {big.height} levels, needs at least {small.height + d}"]
    for k in range(small.height):
        lvl, lo, hi = _shifted_range(big, d, k)
        if hi - lo != small.table.widths[k]:
            out.append(f"level {k}: shifted width {hi - lo} != {small.table.widths[k]}")
            continue
        a, b = small.labels(k), big.labels(lvl, lo, hi)
        bad = np.flatnonzero((a != b).any(axis=1))
        if bad.size:
            out.append(f"level {k}: {bad.size} label mismatches, first at offset {int(bad[0])}")
    return out


def self_shift_check(gm: GlobalMap, d: int) -> list[str]:
    """Labels are invariant under the axis shift within one region.

    Compares every tile of the top ``height - d`` levels with its image
    ``d`` levels further down the axis.
    """
    out = []
    for k in range(gm.height - d):
        lvl, lo, hi = _shifted_range(gm, d, k)
        a, b = gm.labels(k), gm.labels(lvl, lo, hi)
        bad = np.flatnonzero((a != b).any(axis=1))
        if bad.size:
            out.append(f"level {k}: {bad.size} label mismatches under the shift")
    return out


def border_tiles(gm: GlobalMap, level: int = 0, offset: int = 0, depth: int | None = None) -> set[tuple[int, int]]:
    """Leftmost and rightmost tile of every level, and the whole last level, of a subtree."""
    depth = gm.height - level if depth is None else depth
    out = set()
    ranges = gm.table.subtree_ranges(level, offset, depth)
    for lvl, lo, hi in ranges:
        out.update({(lvl, lo), (lvl, hi - 1)})
    lvl, lo, hi = ranges[-1]
    out.update((lvl, o) for o in range(lo, hi))
    return out


def border_separation_check(big: GlobalMap, d: int, small_height: int) -> list[str]:
    """The border of the embedded T_n neither meets nor touches the border of T_{n+1}."""
    level, offset = _descend(big.table, 0, 0, (1,) * d)
    inner = border_tiles(big, level, offset, small_height)
    outer = border_tiles(big)
    out = []
    shared = inner & outer
    if shared:
        out.append(f"{len(shared)} tiles on both borders")
    touching = [t for t in sorted(inner) if any(nb in outer for nb in big.neighbours(*t))]
    if touching:
        out.append(f"{len(touching)} border tiles of T_n touch the border of T_(n+1), first {touching[0]}")
    return out


@dataclass
class StepReport:
    n: int
    size: int
    prototiles: int
    regions: int
    problems: dict[str, list[str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.problems.values())

    def lines(self) -> list[str]:
        out = [f"step {self.n}: tiles={self.size} prototiles={self.prototiles} regions={self.regions}"]
        for name, probs in self.problems.items():
            out.append(f"  {name}: {'ok' if not probs else f'{len(probs)} problems'}")
            out.extend(f"    {p}" for p in probs[:5])
        return out


def assemble(steps: int, d: int) -> tuple[list[GlobalMap], list[StepReport]]:
    """Build T_0..T_steps and run every check on each of them."""
    maps = [build_region(RegionKind.T, n, d) for n in range(steps + 1)]
    reports = []
    for n, gm in enumerate(maps):
        rep = StepReport(n, gm.size, len(gm.placements), len(gm.regions))
        rep.problems["coverage"] = coverage_check(gm)
        rep.problems["arity"] = arity_check(gm)
        rep.problems["adjacency"] = adjacency_check(gm)
        if n > 0:
            rep.problems["shift"] = shift_invariance_check(maps[n - 1], gm, d)
            rep.problems["border"] = border_separation_check(gm, d, maps[n - 1].height)
            rep.problems["self_shift"] = self_shift_check(gm, d)
        reports.append(rep)
    return maps, reports


def assembly_dump(maps: list[GlobalMap], d: int) -> dict:
    steps = []
    for n, gm in enumerate(maps):
        steps.append({
            "n": n,
            "height": gm.height,
            "tiles": gm.size,
            "regions": [
                {"id": r.id, "kind": r.kind.value, "n": r.n, "level": r.level, "offset": r.offset, "parent": r.parent}
                for r in gm.regions
            ],
            "placements": len(gm.placements),
            "variant_counts": {v.value: sum(1 for p in gm.placements if p.variant is v) for v in Variant},
        })
    return {"format": 1, "depth": d, "shift": {"prefix": [1] * d}, "steps": steps}


@dataclass
class Witness:
    translation: int
    generation: int
    left: int
    right: int

    def __str__(self) -> str:
        return (f"t={self.translation}: generation {self.generation} triangle [{self.left},{self.right}] "
                f"has no partner at [{self.left + self.translation},{self.right + self.translation}]")


def nonperiodicity_witness(window: ModelWindow, max_translation: int | None = None) -> tuple[list[Witness], list[int]]:
    """For each axis translation 1..max, a triangle with no same-generation image.

    Returns the witnesses and the translations for which none was found.
    Active intervals of generation g have period 2**(g+2), so a translation
    is matched by generation g only when it is a multiple of that period.
    """
    G = window.G
    if max_translation is None:
        max_translation = 2 ** G
    actives = {
        g: sorted((iv.left, iv.right) for iv in window.intervals(g, IntervalKind.ACTIVE, inside=True))
        for g in range(G + 1)
    }
    witnesses, missing = [], []
    for t in range(1, max_translation + 1):
        found = None
        for g in range(G, -1, -1):
            present = set(actives[g])
            for left, right in actives[g]:
                if window.lo <= left + t and right + t <= window.hi and (left + t, right + t) not in present:
                    found = Witness(t, g, left, right)
                    break
            if found:
                break
        if found:
            witnesses.append(found)
        else:
            missing.append(t)
    return witnesses, missing
