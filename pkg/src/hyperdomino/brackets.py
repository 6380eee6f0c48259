"""Abstract brackets: generations of R/M/B letters on the integer line.

Generation 0 labels every integer with the 4-periodic pattern R, M, B, M.
The letters of generation g+1 are the letters still labelled M after
generation g; the ones sitting at mid-points of active intervals of
generation g become R or B, again in an R, M, B, M pattern. Everything here
is evaluated in closed form from the position, so any window of the
infinite model can be computed without building its neighbours.

Phases: ``p0`` in 0..3 puts the generation-0 R letters on ``p0 mod 4``; each
bit ``p[g]`` (g >= 1) picks which of the two active mid-points of
generation g-1 in ``[0, 2**(g+2))`` carries the R of generation g (0: the
smaller one).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence


class ConfigurationError(ValueError):
    pass


class Label(enum.Enum):
    R = "R"
    M = "M"
    B = "B"


class Color(enum.Enum):
    BLUE = "blue"
    RED = "red"

    @property
    def opposite(self) -> "Color":
        return Color.RED if self is Color.BLUE else Color.BLUE


def color_of_generation(g: int) -> Color:
    return Color.BLUE if g % 2 == 0 else Color.RED


class IntervalKind(enum.Enum):
    ACTIVE = "active"
    SILENT = "silent"


@dataclass(frozen=True)
class PhaseSequence:
    p0: int
    bits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.p0 not in range(4):
            raise ConfigurationError(f"p0 must be in 0..3, got {self.p0}")
        if any(b not in (0, 1) for b in self.bits):
            raise ConfigurationError("phase bits must be 0 or 1")
        object.__setattr__(self, "bits", tuple(self.bits))

    @property
    def max_generation(self) -> int:
        return len(self.bits)

    @classmethod
    def zeros(cls, generations: int) -> "PhaseSequence":
        return cls(0, (0,) * generations)

    @classmethod
    def parse(cls, text: str) -> "PhaseSequence":
        try:
            values = [int(v) for v in text.replace(" ", "").split(",") if v != ""]
        except ValueError as exc:
            raise ConfigurationError(f"bad phase list {text!r}") from exc
        if not values:
            raise ConfigurationError("empty phase list")
        return cls(values[0], tuple(values[1:]))

    @classmethod
    def all(cls, generations: int) -> Iterator["PhaseSequence"]:
        """Every phase sequence covering ``generations`` generations (4 * 2**G of them)."""
        for p0 in range(4):
            for bits in itertools.product((0, 1), repeat=generations):
                yield cls(p0, bits)

    def truncated(self, generations: int) -> "PhaseSequence":
        if generations > self.max_generation:
            raise ConfigurationError(
                f"phase sequence covers {self.max_generation} generations, {generations} requested"
            )
        return PhaseSequence(self.p0, self.bits[:generations])

    @cached_property
    def r_offsets(self) -> tuple[int, ...]:
        """Residue of the R letters of generation g modulo 2**(g+2), for g = 0..G."""
        r = [self.p0]
        for g, bit in enumerate(self.bits):
            r.append((r[g] + 2**g) % 2 ** (g + 2) + bit * 2 ** (g + 2))
        return tuple(r)

    def __str__(self) -> str:
        return ",".join(str(v) for v in (self.p0, *self.bits))


@dataclass(frozen=True)
class Letter:
    """A position with its final label through generation G.

    ``generation`` is the generation at which the letter became R or B; a
    letter still labelled M after generation G keeps ``generation == G`` and
    takes the colour of generation G+1, where it is next considered.
    """

    position: int
    label: Label
    generation: int
    color: Color

    @property
    def pending(self) -> bool:
        return self.label is Label.M


@dataclass(frozen=True, order=True)
class Interval:
    left: int
    right: int
    generation: int = field(compare=False)
    kind: IntervalKind = field(compare=False)

    @property
    def color(self) -> Color:
        return color_of_generation(self.generation)

    @property
    def active(self) -> bool:
        return self.kind is IntervalKind.ACTIVE

    @property
    def midpoint(self) -> int:
        return (self.left + self.right) // 2

    @property
    def length(self) -> int:
        return self.right - self.left

    def contains(self, x: int, strict: bool = False) -> bool:
        if strict:
            return self.left < x < self.right
        return self.left <= x <= self.right

    def __str__(self) -> str:
        return f"{self.generation} {self.kind.value} [{self.left},{self.right}]"


def _check_generations(phases: PhaseSequence, G: int) -> None:
    if G < 0:
        raise ConfigurationError("generation count must be >= 0")
    if G > phases.max_generation:
        raise ConfigurationError(
            f"{G} generations requested but phases only cover {phases.max_generation}"
        )


def letter_generation(x: int, phases: PhaseSequence, G: int) -> int:
    """Largest g <= G such that x is a letter of generation g."""
    r = phases.r_offsets
    g = 0
    while g < G and (x - r[g] - 2**g) % 2 ** (g + 1) == 0:
        g += 1
    return g


def final_letter(x: int, phases: PhaseSequence, G: int) -> Letter:
    _check_generations(phases, G)
    g = letter_generation(x, phases, G)
    residue = (x - phases.r_offsets[g]) % 2 ** (g + 2)
    if residue == 0:
        label = Label.R
    elif residue == 2 ** (g + 1):
        label = Label.B
    else:
        label = Label.M
    color = color_of_generation(g + 1 if label is Label.M else g)
    return Letter(x, label, g, color)


def _intervals_meeting(
    g: int, phases: PhaseSequence, lo: int, hi: int, kind: IntervalKind | None = None
) -> list[Interval]:
    """Intervals of generation g meeting [lo, hi], in left-to-right order."""
    step = 2 ** (g + 1)
    base = phases.r_offsets[g]
    first = lo - step - ((lo - step - base) % step)
    out = []
    left = first
    while left <= hi:
        right = left + step
        if right >= lo:
            k = IntervalKind.ACTIVE if (left - base) % (2 * step) == 0 else IntervalKind.SILENT
            if kind is None or kind is k:
                out.append(Interval(left, right, g, k))
        left += step
    return out


def active_containing(
    x: int, g: int, phases: PhaseSequence, strict: bool = False
) -> Interval | None:
    """The (unique) active interval of generation g containing x, if any."""
    for iv in _intervals_meeting(g, phases, x, x, IntervalKind.ACTIVE):
        if iv.contains(x, strict):
            return iv
    return None


@dataclass
class ModelWindow:
    """Positions ``lo..hi`` of the infinite model with phases ``phases`` through G generations."""

    lo: int
    hi: int
    phases: PhaseSequence
    G: int | None = None

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ConfigurationError("empty window")
        if self.G is None:
            self.G = self.phases.max_generation
        _check_generations(self.phases, self.G)

    def letter(self, x: int) -> Letter:
        return final_letter(x, self.phases, self.G)

    @cached_property
    def letters(self) -> list[Letter]:
        return [self.letter(x) for x in range(self.lo, self.hi + 1)]

    def intervals(self, g: int, kind: IntervalKind | None = None, inside: bool = False) -> list[Interval]:
        if not 0 <= g <= self.G:
            raise ConfigurationError(f"generation {g} outside 0..{self.G}")
        out = _intervals_meeting(g, self.phases, self.lo, self.hi, kind)
        if inside:
            out = [iv for iv in out if self.lo <= iv.left and iv.right <= self.hi]
        return out

    def all_intervals(self, kind: IntervalKind | None = None, inside: bool = False) -> list[Interval]:
        return [iv for g in range(self.G + 1) for iv in self.intervals(g, kind, inside)]

    def covers(self, iv: Interval) -> bool:
        return self.lo <= iv.left and iv.right <= self.hi

    def dump(self) -> dict:
        return {
            "format": 1,
            "range": [self.lo, self.hi],
            "generations": self.G,
            "phases": [self.phases.p0, *self.phases.bits[: self.G]],
            "letters": [
                {"pos": le.position, "label": le.label.value, "generation": le.generation, "color": le.color.value}
                for le in self.letters
            ],
        }


def intervals(g: int, window: ModelWindow) -> list[Interval]:
    return window.intervals(g)


def _visible(I: Interval, window: ModelWindow, want: Color) -> list[int]:
    # A letter is hidden from I when it lies strictly inside an active
    # interval of I's colour and of lower generation.
    hiding = [g for g in range(I.generation) if color_of_generation(g) is I.color]
    out = []
    for x in range(I.left + 1, I.right):
        if window.letter(x).color is not want:
            continue
        if any(active_containing(x, g, window.phases, strict=True) for g in hiding):
            continue
        out.append(x)
    return out


def _require_active(I: Interval, window: ModelWindow) -> None:
    if not I.active:
        raise ValueError(f"{I} is not an active interval")
    if I.generation > window.G:
        raise ConfigurationError(f"window stops at generation {window.G}, interval is generation {I.generation}")


def visible_blue(I: Interval, window: ModelWindow) -> list[int]:
    """Blue letters seen from a red active interval."""
    _require_active(I, window)
    if I.color is not Color.RED:
        raise ValueError(f"{I} is not red")
    return _visible(I, window, Color.BLUE)


def visible_red(I: Interval, window: ModelWindow) -> list[int]:
    """Red letters seen from a blue active interval (always just its mid-point)."""
    _require_active(I, window)
    if I.color is not Color.BLUE:
        raise ValueError(f"{I} is not blue")
    return _visible(I, window, Color.RED)


def containment_count(x: int, window: ModelWindow, removed: Sequence[Interval] = ()) -> int:
    """Number of active intervals (closed, all generations <= G) containing x."""
    count = 0
    for g in range(window.G + 1):
        iv = active_containing(x, g, window.phases)
        if iv is not None and iv not in removed:
            count += 1
    return count


@dataclass
class Cut:
    """A model cut at ``position``: every active interval containing it is removed."""

    window: ModelWindow
    position: int

    @cached_property
    def removed(self) -> list[Interval]:
        out = []
        for g in range(self.window.G + 1):
            iv = active_containing(self.position, g, self.window.phases)
            if iv is not None:
                out.append(iv)
        return out

    def retained_intervals(self) -> list[Interval]:
        removed = set(self.removed)
        return [iv for iv in self.window.all_intervals() if iv not in removed]

    def semi_infinite(self) -> list[Interval]:
        """Retained intervals lying to the right of the cut letter."""
        return [iv for iv in self.retained_intervals() if iv.left >= self.position]

    def containment_count(self, x: int) -> int:
        return containment_count(x, self.window, self.removed)


def cut(window: ModelWindow, x: int) -> Cut:
    if not window.lo <= x <= window.hi:
        raise ValueError(f"cut position {x} outside window")
    return Cut(window, x)


def interval_listing(window: ModelWindow) -> list[str]:
    return [str(iv) for iv in window.all_intervals()]
