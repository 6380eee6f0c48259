"""Deterministic Turing machines and their space-time diagrams.

A diagram is placed inside a red triangle: row k of the computation goes on
the k-th free row of the triangle (counted from the vertex) and tape cell j
on the j-th vertical from the axis. A halted computation gets a halting
cap; a computation still running when the free rows run out is cut by the
basis.

Machine files are line oriented::

    # comment
    initial: A
    halting: H
    blank: 0
    symbols: 0 1        (optional; otherwise taken from the transitions)
    A 0 -> B 1 R
"""
from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .brackets import Color, ModelWindow
from .trilaterals import IsoclineIndex, Kind, Trilateral, free_rows


class MachineError(ValueError):
    """The machine description is malformed or incomplete."""


class InsufficientArea(RuntimeError):
    """The computation does not fit in the chosen triangle."""


class NotHalted(RuntimeError):
    """Encapsulation needs a computation that reached a halting state."""


class Move(enum.Enum):
    L = -1
    R = 1


@dataclass(frozen=True)
class Action:
    state: str
    symbol: str
    move: Move


@dataclass
class TuringMachine:
    transitions: dict[tuple[str, str], Action]
    initial: str
    halting: frozenset[str]
    blank: str
    symbols: frozenset[str] = frozenset()
    name: str = "machine"

    def __post_init__(self) -> None:
        self.halting = frozenset(self.halting)
        used = {self.blank}
        for (q, s), a in self.transitions.items():
            used.update((s, a.symbol))
        if not self.symbols:
            self.symbols = frozenset(used)
        else:
            self.symbols = frozenset(self.symbols)
            unknown = used - self.symbols
            if unknown:
                raise MachineError(f"symbols not declared: {sorted(unknown)}")
        if self.initial in self.halting:
            raise MachineError("the initial state must not be halting")
        for (q, _s) in self.transitions:
            if q in self.halting:
                raise MachineError(f"halting state {q} has an outgoing transition")

    @property
    def states(self) -> frozenset[str]:
        out = {self.initial, *self.halting}
        for (q, _), a in self.transitions.items():
            out.update((q, a.state))
        return frozenset(out)

    @classmethod
    def parse(cls, text: str, name: str = "machine") -> "TuringMachine":
        header: dict[str, str] = {}
        transitions: dict[tuple[str, str], Action] = {}
        rule = re.compile(r"^(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+([LR])$")
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition(":")
            if sep and key.strip() in ("initial", "halting", "blank", "symbols"):
                header[key.strip()] = value.strip()
                continue
            m = rule.match(line)
            if not m:
                raise MachineError(f"line {lineno}: cannot parse {raw.strip()!r}")
            q, s, q2, s2, d = m.groups()
            if (q, s) in transitions:
                raise MachineError(f"line {lineno}: second transition for ({q}, {s})")
            transitions[(q, s)] = Action(q2, s2, Move[d])
        for key in ("initial", "halting", "blank"):
            if key not in header:
                raise MachineError(f"missing header line '{key}:'")
        blank = header["blank"]
        if len(blank.split()) != 1:
            raise MachineError("exactly one blank symbol expected")
        return cls(
            transitions,
            initial=header["initial"],
            halting=frozenset(header["halting"].split()),
            blank=blank,
            symbols=frozenset(header.get("symbols", "").split()),
            name=name,
        )

    @classmethod
    def load(cls, path: str | Path) -> "TuringMachine":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise MachineError(f"cannot read {path}: {exc}") from exc
        return cls.parse(text, name=path.stem)


def builtin_machine(name: str) -> TuringMachine:
    """One of the machines shipped with the package: ``bb2`` or ``loop``."""
    res = resources.files("hyperdomino") / "machines" / f"{name}.tm"
    if not res.is_file():
        raise MachineError(f"no built-in machine {name!r}")
    return TuringMachine.parse(res.read_text(), name=name)


def resolve_machine(name: str) -> TuringMachine:
    """A path to a machine file, or the name of a built-in machine."""
    path = Path(name)
    if path.exists():
        return TuringMachine.load(path)
    stem = path.name[:-3] if path.name.endswith(".tm") else path.name
    try:
        return builtin_machine(stem)
    except MachineError:
        raise MachineError(f"no machine file {name}") from None


class OutcomeKind(enum.Enum):
    HALTED = "halted"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    steps: int

    @property
    def halted(self) -> bool:
        return self.kind is OutcomeKind.HALTED

    def __str__(self) -> str:
        return f"Halted({self.steps})" if self.halted else f"StepLimit({self.steps})"


@dataclass(frozen=True)
class Row:
    state: str
    head: int
    tape: Mapping[int, str]  # non-blank cells only


@dataclass
class SpaceTimeDiagram:
    machine: TuringMachine
    rows: list[Row]
    outcome: Outcome

    @property
    def steps(self) -> int:
        return len(self.rows) - 1

    def non_blank(self, k: int = -1) -> int:
        return len(self.rows[k].tape)

    def span(self) -> tuple[int, int]:
        # a head moves one cell per step, so steps+1 cells on each side always suffice
        w = self.steps + 1
        return -w, w

    def text_grid(self) -> str:
        lo, hi = self.span()
        width = max(len(s) for s in self.machine.symbols | {self.machine.blank})
        lines = []
        for r in self.rows:
            cells = []
            for j in range(lo, hi + 1):
                s = r.tape.get(j, self.machine.blank).rjust(width)
                cells.append(f"[{s}]" if j == r.head else f" {s} ")
            lines.append("".join(cells) + f"  {r.state}")
        return "\n".join(lines) + "\n"


def run(machine: TuringMachine, max_steps: int) -> SpaceTimeDiagram:
    """Run from an all-blank tape for at most ``max_steps`` transitions."""
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    state, head = machine.initial, 0
    tape: dict[int, str] = {}
    rows = [Row(state, head, {})]
    for step in range(1, max_steps + 1):
        symbol = tape.get(head, machine.blank)
        action = machine.transitions.get((state, symbol))
        if action is None:
            raise MachineError(f"no transition for state {state} reading {symbol}")
        if action.symbol == machine.blank:
            tape.pop(head, None)
        else:
            tape[head] = action.symbol
        state, head = action.state, head + action.move.value
        rows.append(Row(state, head, dict(tape)))
        if state in machine.halting:
            return SpaceTimeDiagram(machine, rows, Outcome(OutcomeKind.HALTED, step))
    return SpaceTimeDiagram(machine, rows, Outcome(OutcomeKind.STEP_LIMIT, max_steps))


def rows_available(g: int) -> int:
    """Free rows of a red triangle of odd generation g."""
    if g < 1 or g % 2 == 0:
        raise ValueError("red triangles have odd generations")
    return 2 ** ((g + 1) // 2) + 1


def required_generation(diagram: SpaceTimeDiagram) -> int:
    g = 1
    while rows_available(g) < len(diagram.rows):
        g += 2
    return g


@dataclass(frozen=True)
class PlacedRow:
    step: int
    isocline: IsoclineIndex
    axis_pos: int
    head: int


@dataclass
class EmbeddedComputation:
    triangle: Trilateral
    diagram: SpaceTimeDiagram
    placements: list[PlacedRow]
    halt_cap: PlacedRow | None

    @property
    def rows_used(self) -> int:
        return len(self.placements)

    def grid(self) -> tuple[tuple[str, ...], ...]:
        """The embedded cells, one tuple per free row, verticals from -h to h."""
        h = int(self.triangle.half_height)
        blank = self.diagram.machine.blank
        out = []
        for p in self.placements:
            tape = self.diagram.rows[p.step].tape
            out.append(tuple(tape.get(j, blank) for j in range(-h, h + 1)))
        return tuple(out)

    def dump(self) -> dict:
        return {
            "format": 1,
            "machine": self.diagram.machine.name,
            "outcome": str(self.diagram.outcome),
            "triangle": self.triangle.dump(),
            "rows": [
                {"step": p.step, "isocline": p.isocline.absolute, "display": p.isocline.display,
                 "head": p.head, "state": self.diagram.rows[p.step].state}
                for p in self.placements
            ],
            "halt_cap": None if self.halt_cap is None else {
                "step": self.halt_cap.step, "isocline": self.halt_cap.isocline.absolute,
                "head": self.halt_cap.head,
            },
        }


def embed(diagram: SpaceTimeDiagram, T: Trilateral, window: ModelWindow) -> EmbeddedComputation:
    if T.kind is not Kind.TRIANGLE or T.color is not Color.RED:
        raise ValueError(f"{T} is not a red triangle")
    rows = free_rows(T, window)
    halted = diagram.outcome.halted
    if halted and len(rows) < len(diagram.rows):
        raise InsufficientArea(
            f"{len(diagram.rows)} rows needed, generation {T.generation} triangle has {len(rows)} free rows"
        )
    if not halted and len(diagram.rows) < len(rows):
        raise ValueError("diagram stops before the basis; run it for more steps")
    placements = []
    for k, iso in enumerate(rows[: len(diagram.rows)]):
        pos = iso.absolute // 5
        reach = pos - T.vertex_pos  # half width of the triangle on this row
        r = diagram.rows[k]
        cells = [r.head, *r.tape]
        if any(abs(j) > reach for j in cells):
            raise InsufficientArea(f"step {k} uses a cell beyond the {reach} verticals of its row")
        placements.append(PlacedRow(k, iso, pos, r.head))
    cap = placements[-1] if halted else None
    return EmbeddedComputation(T, diagram, placements, cap)


def embed_machine(machine: TuringMachine, T: Trilateral, window: ModelWindow) -> EmbeddedComputation:
    """Run the machine for as many steps as the triangle has free rows, then embed."""
    n = len(free_rows(T, window))
    return embed(run(machine, n - 1), T, window)


class AreaVariant(enum.Enum):
    WHITE = "white"
    BLACK = "black"


@dataclass
class EncapsulatedArea:
    computation: EmbeddedComputation
    variant: AreaVariant
    border: list[tuple[int, int]] = field(repr=False)

    @property
    def height(self) -> int:
        t = self.computation.triangle
        return t.basis_pos - t.vertex_pos

    @property
    def interior(self) -> tuple[tuple[str, ...], ...]:
        return self.computation.grid()

    def border_closed(self) -> bool:
        pts = self.border
        steps = zip(pts, pts[1:] + pts[:1])
        return all(max(abs(a[0] - b[0]), abs(a[1] - b[1])) == 1 for a, b in steps)


def _border_cycle(T: Trilateral) -> list[tuple[int, int]]:
    # (axis position, lateral offset) lattice points: left leg, basis, right leg
    h = int(T.half_height)
    v = T.vertex_pos
    left = [(v + i, -i) for i in range(h)]
    basis = [(v + h, -h + i) for i in range(2 * h)]
    right = [(v + h - i, h - i) for i in range(h)]
    return left + basis + right


def encapsulate(e: EmbeddedComputation, variant: AreaVariant) -> EncapsulatedArea:
    if e.halt_cap is None:
        raise NotHalted(f"{e.diagram.machine.name} did not halt ({e.diagram.outcome})")
    return EncapsulatedArea(e, variant, _border_cycle(e.triangle))


def dump_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
