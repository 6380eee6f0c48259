"""Fibonacci trees spanning sectors of the heptagrid {7,3}.

Nodes are black (two sons) or white (three sons). Sons are listed left to
right with the black son first: black -> (B, W), white -> (B, W, W).

Nodes are numbered breadth first from 1 at the root; the subtrees rooted at
consecutive nodes of one level are contiguous, which is what makes most
counting here reduce to per-level offset arithmetic.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np


class ConstructionError(RuntimeError):
    """A structural precondition of a construction was not met."""


class NodeColor(enum.Enum):
    BLACK = "B"
    WHITE = "W"

    @property
    def arity(self) -> int:
        return 2 if self is NodeColor.BLACK else 3

    def __str__(self) -> str:
        return self.value


BLACK = NodeColor.BLACK
WHITE = NodeColor.WHITE

_SONS = {BLACK: (BLACK, WHITE), WHITE: (BLACK, WHITE, WHITE)}


def son_colors(color: NodeColor) -> tuple[NodeColor, ...]:
    return _SONS[color]


@lru_cache(maxsize=None)
def fib(k: int) -> int:
    """Fibonacci numbers with f(-1) = 0 and f(0) = f(1) = 1."""
    if k < -1:
        raise ValueError(f"fib is defined for k >= -1, got {k}")
    a, b = 0, 1
    for _ in range(k + 1):
        a, b = b, a + b
    return a


def is_fibonacci(value: int) -> bool:
    k = 0
    while fib(k) < value:
        k += 1
    return fib(k) == value


@lru_cache(maxsize=None)
def level_counts(root: NodeColor, n: int) -> tuple[int, int]:
    """Return ``(black, white)`` node counts on level ``n`` of a tree."""
    if n < 0:
        raise ValueError("level index must be non-negative")
    if root is WHITE:
        return fib(2 * n - 1), fib(2 * n)
    if n == 0:
        return 1, 0
    black, white = level_counts(root, n - 1)
    return black + white, black + 2 * white


def level_width(root: NodeColor, n: int) -> int:
    return sum(level_counts(root, n))


def level_start(root: NodeColor, n: int) -> int:
    """BFS index of the leftmost node of level ``n``."""
    return 1 + sum(level_width(root, k) for k in range(n))


def quarter_size(n: int) -> int:
    if n < 1:
        raise ValueError("quarter depth must be >= 1")
    return fib(2 * n) - 1


def bar_size(n: int) -> int:
    if n < 1:
        raise ValueError("bar depth must be >= 1")
    return fib(2 * n - 1)


def region_size(root: NodeColor, depth: int) -> int:
    return quarter_size(depth) if root is WHITE else bar_size(depth)


@dataclass(frozen=True, order=True)
class TreeAddress:
    """A node given by its root colour and the son indices leading to it."""

    root_color: NodeColor = field(compare=False)
    path: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        color = self.root_color
        for step in self.path:
            if not 0 <= step < color.arity:
                raise ValueError(f"son index {step} invalid below a {color.name} node")
            color = _SONS[color][step]
        object.__setattr__(self, "_color", color)

    @property
    def color(self) -> NodeColor:
        return self._color  # type: ignore[attr-defined]

    @property
    def level(self) -> int:
        return len(self.path)

    def child(self, j: int) -> "TreeAddress":
        return TreeAddress(self.root_color, self.path + (j,))

    def children(self) -> list["TreeAddress"]:
        return [self.child(j) for j in range(self.color.arity)]

    @property
    def parent(self) -> "TreeAddress | None":
        if not self.path:
            return None
        return TreeAddress(self.root_color, self.path[:-1])

    def extend(self, path: tuple[int, ...]) -> "TreeAddress":
        return TreeAddress(self.root_color, self.path + tuple(path))

    def __str__(self) -> str:
        return f"{self.root_color}:" + ".".join(map(str, self.path))


def color_along(root: NodeColor, path: tuple[int, ...]) -> NodeColor:
    color = root
    for step in path:
        color = _SONS[color][step]
    return color


def offset_in_level(root: NodeColor, path: tuple[int, ...]) -> int:
    """0-based position of the node ``path`` among the nodes of its level."""
    depth = len(path)
    pos = 0
    color = root
    for s, step in enumerate(path):
        sons = _SONS[color]
        remaining = depth - s - 1
        pos += sum(level_width(sons[j], remaining) for j in range(step))
        color = sons[step]
    return pos


def bfs_index(address: TreeAddress) -> int:
    return level_start(address.root_color, address.level) + offset_in_level(
        address.root_color, address.path
    )


def address_at(root: NodeColor, level: int, offset: int) -> TreeAddress:
    if not 0 <= offset < level_width(root, level):
        raise ValueError(f"offset {offset} outside level {level}")
    path = []
    color = root
    for s in range(level):
        remaining = level - s - 1
        for j, son in enumerate(_SONS[color]):
            w = level_width(son, remaining)
            if offset < w:
                path.append(j)
                color = son
                break
            offset -= w
    return TreeAddress(root, tuple(path))


def address_of_index(root: NodeColor, index: int) -> TreeAddress:
    if index < 1:
        raise ValueError("BFS indices start at 1")
    level = 0
    while level_start(root, level + 1) <= index:
        level += 1
    return address_at(root, level, index - level_start(root, level))


def level_addresses(root: NodeColor, n: int) -> list[TreeAddress]:
    """All nodes of level ``n``, left to right."""
    level = [((), root)]
    for _ in range(n):
        level = [(path + (j,), son) for path, c in level for j, son in enumerate(_SONS[c])]
    return [TreeAddress(root, path) for path, _ in level]


def iter_nodes(root: NodeColor, depth: int) -> Iterator[TreeAddress]:
    """All nodes on levels ``0 .. depth-1`` in BFS order."""
    level = [TreeAddress(root)]
    for _ in range(depth):
        yield from level
        level = [c for node in level for c in node.children()]


class LevelTable:
    """Per-level colour and son-offset arrays for a tree cut at ``depth`` levels.

    ``white[l][o]`` is True when node ``o`` of level ``l`` is white and
    ``child_start[l][o]`` is the offset on level ``l+1`` of its first son
    (with a trailing sentinel equal to the width of level ``l+1``).
    """

    def __init__(self, root: NodeColor, depth: int):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.root = root
        self.depth = depth
        self.white: list[np.ndarray] = [np.array([root is WHITE])]
        self.child_start: list[np.ndarray] = []
        for lvl in range(depth - 1):
            arity = np.where(self.white[lvl], 3, 2).astype(np.int64)
            starts = np.zeros(arity.size + 1, dtype=np.int64)
            np.cumsum(arity, out=starts[1:])
            self.child_start.append(starts)
            nxt = np.ones(int(starts[-1]), dtype=bool)
            nxt[starts[:-1]] = False
            self.white.append(nxt)
        self.widths = [w.size for w in self.white]
        self.starts = np.concatenate([[1], 1 + np.cumsum(self.widths)]).astype(np.int64)

    @property
    def size(self) -> int:
        return int(sum(self.widths))

    def locate(self, path: tuple[int, ...]) -> tuple[int, int]:
        """(level, offset) of the node reached by ``path``."""
        offset = 0
        for lvl, step in enumerate(path):
            offset = int(self.child_start[lvl][offset]) + step
        return len(path), offset

    def subtree_ranges(self, level: int, offset: int, depth: int) -> list[tuple[int, int, int]]:
        """``(level, lo, hi)`` offset ranges covered by a subtree of ``depth`` levels."""
        out = [(level, offset, offset + 1)]
        lo, hi = offset, offset + 1
        for k in range(depth - 1):
            lvl = level + k
            if lvl + 1 >= self.depth:
                raise ConstructionError(
                    f"subtree of depth {depth} at level {level} exceeds table depth {self.depth}"
                )
            starts = self.child_start[lvl]
            lo, hi = int(starts[lo]), int(starts[hi])
            out.append((lvl + 1, lo, hi))
        return out

    def subtree_indices(self, level: int, offset: int, depth: int) -> np.ndarray:
        parts = [
            np.arange(lo, hi, dtype=np.int64) + self.starts[lvl]
            for lvl, lo, hi in self.subtree_ranges(level, offset, depth)
        ]
        return np.concatenate(parts)

    def neighbours_below(self, level: int, offset: int) -> range:
        """Offsets on ``level+1`` of heptagons sharing an edge with the node.

        These are its own sons plus the first son of its right neighbour.
        """
        starts = self.child_start[level]
        hi = int(starts[offset + 1])
        if offset + 1 < self.widths[level]:
            hi += 1
        return range(int(starts[offset]), hi)


@dataclass(frozen=True)
class Quarter:
    """The first ``depth`` levels of a white-rooted Fibonacci tree."""

    depth: int
    root_color: NodeColor = field(default=WHITE, init=False)

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("quarter depth must be >= 1")

    @property
    def size(self) -> int:
        return quarter_size(self.depth)

    def nodes(self) -> Iterator[TreeAddress]:
        return iter_nodes(self.root_color, self.depth)

    def last_level(self) -> list[TreeAddress]:
        return level_addresses(self.root_color, self.depth - 1)


@dataclass(frozen=True)
class Bar:
    """The first ``depth`` levels of a black-rooted Fibonacci tree."""

    depth: int
    root_color: NodeColor = field(default=BLACK, init=False)

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("bar depth must be >= 1")

    @property
    def size(self) -> int:
        return bar_size(self.depth)

    def nodes(self) -> Iterator[TreeAddress]:
        return iter_nodes(self.root_color, self.depth)

    def last_level(self) -> list[TreeAddress]:
        return level_addresses(self.root_color, self.depth - 1)


@dataclass
class Decomposition:
    """A region of depth n+m split into its top n levels and subtrees of depth m."""

    base: Quarter | Bar
    white_slots: list[tuple[TreeAddress, Quarter]]
    black_slots: list[tuple[TreeAddress, Bar]]

    @property
    def depth(self) -> int:
        slots = self.white_slots or self.black_slots
        return self.base.depth + slots[0][1].depth

    def counting_identity(self) -> bool:
        n, m = self.base.depth, self.depth - self.base.depth
        total = region_size(self.base.root_color, n + m)
        return total == (
            region_size(self.base.root_color, n)
            + len(self.white_slots) * quarter_size(m)
            + len(self.black_slots) * bar_size(m)
        )

    def verify(self) -> list[str]:
        """Tile-level partition check; returns a list of problems (empty on success)."""
        problems = []
        n = self.base.depth
        root = self.base.root_color
        table = LevelTable(root, self.depth)
        hits = np.zeros(table.size + 1, dtype=np.int32)
        hits[table.subtree_indices(0, 0, n)] += 1
        seen_slots = []
        for address, region in [*self.white_slots, *self.black_slots]:
            if address.level != n:
                problems.append(f"slot {address} is not on level {n}")
                continue
            if address.color is not region.root_color:
                problems.append(f"slot {address} is {address.color.name}, region root is {region.root_color.name}")
            level, offset = table.locate(address.path)
            seen_slots.append(offset)
            np.add.at(hits, table.subtree_indices(level, offset, region.depth), 1)
        if sorted(seen_slots) != list(range(table.widths[n])):
            problems.append("slot addresses are not exactly the level-n nodes")
        body = hits[1:]
        if (body == 0).any():
            problems.append(f"{int((body == 0).sum())} tiles not covered")
        if (body > 1).any():
            problems.append(f"{int((body > 1).sum())} tiles covered more than once")
        if not self.counting_identity():
            problems.append("counting identity fails")
        return problems


def _split(root: NodeColor, n: int, m: int) -> Decomposition:
    if n < 1 or m < 1:
        raise ValueError("split depths must be >= 1")
    base: Quarter | Bar = Quarter(n) if root is WHITE else Bar(n)
    white, black = [], []
    for address in level_addresses(root, n):
        if address.color is WHITE:
            white.append((address, Quarter(m)))
        else:
            black.append((address, Bar(m)))
    return Decomposition(base, white, black)


def split_quarter(n: int, m: int) -> Decomposition:
    """Split Q_{n+m} into Q_n, f(2n) copies of Q_m and f(2n-1) copies of R_m."""
    return _split(WHITE, n, m)


def split_bar(n: int, m: int) -> Decomposition:
    return _split(BLACK, n, m)


def junction_point(region: Quarter | Bar) -> TreeAddress:
    """The white node of the last level whose BFS index is a Fibonacci number.

    Two Fibonacci indices fall on every level; the white one is taken, and
    the larger index if both are white.
    """
    if region.depth < 2:
        raise ValueError("junction point needs depth >= 2")
    root = region.root_color
    lvl = region.depth - 1
    lo, hi = level_start(root, lvl), level_start(root, lvl + 1)
    candidates = []
    k = 0
    while fib(k) < hi:
        if fib(k) >= lo and fib(k) not in candidates:
            candidates.append(fib(k))
        k += 1
    white = [i for i in candidates if address_of_index(root, i).color is WHITE]
    if not white:
        raise ConstructionError(f"no white Fibonacci-indexed node on level {lvl}")
    return address_of_index(root, max(white))


def tree_dump(root: NodeColor, depth: int) -> dict:
    nodes = []
    index = {}
    for i, address in enumerate(iter_nodes(root, depth), start=1):
        index[address.path] = i
        parent = index.get(address.path[:-1]) if address.path else None
        nodes.append(
            {"index": i, "level": address.level, "color": address.color.value, "parent_index": parent}
        )
    return {"format": 1, "root_color": root.value, "depth": depth, "nodes": nodes}
