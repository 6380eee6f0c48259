import json

import pytest

from hyperdomino.brackets import ModelWindow, PhaseSequence
from hyperdomino.trilaterals import Kind, lift
from hyperdomino.turing import (
    AreaVariant,
    InsufficientArea,
    MachineError,
    NotHalted,
    OutcomeKind,
    TuringMachine,
    builtin_machine,
    embed,
    embed_machine,
    encapsulate,
    required_generation,
    resolve_machine,
    run,
)

from oracles import simulate

BB2 = """
initial: A
halting: H
blank: 0
A 0 -> B 1 R
A 1 -> B 1 L
B 0 -> A 1 L
B 1 -> H 1 R
"""


def red_triangle(g):
    size = 2 ** (g + 3)
    w = ModelWindow(-size, size, PhaseSequence.zeros(g + 1))
    t = next(t for t in lift(w, inside=True) if t.kind is Kind.TRIANGLE and t.generation == g)
    return t, w


def test_busy_beaver_against_oracle():
    m = TuringMachine.parse(BB2)
    d = run(m, 100)
    assert str(d.outcome) == "Halted(6)"
    assert d.non_blank() == 4
    table = {k: (a.state, a.symbol, a.move.name) for k, a in m.transitions.items()}
    steps, tape, halted = simulate(table, "A", {"H"}, "0", 100)
    assert halted and steps == 6 and tape.count("1") == 4
    assert builtin_machine("bb2").transitions == m.transitions


def test_one_step_halt():
    m = TuringMachine.parse("initial: A\nhalting: H\nblank: _\nA _ -> H x R\n")
    assert str(run(m, 5).outcome) == "Halted(1)"


def test_loop_hits_step_limit():
    m = builtin_machine("loop")
    for bound in (0, 1, 17):
        d = run(m, bound)
        assert d.outcome.kind is OutcomeKind.STEP_LIMIT and d.steps == bound


def test_rerun_extends_rows():
    m = builtin_machine("bb2")
    short, full = run(m, 3), run(m, 50)
    assert full.rows[:4] == short.rows


def test_text_grid_marks_head():
    grid = run(builtin_machine("bb2"), 10).text_grid().splitlines()
    assert len(grid) == 7
    assert all(line.count("[") == 1 for line in grid)
    assert grid[-1].endswith("H")


@pytest.mark.parametrize("text,msg", [
    ("halting: H\nblank: 0\n", "initial"),
    ("initial: A\nhalting: H\nblank: 0\nA 0 -> B 1 X\n", "cannot parse"),
    ("initial: A\nhalting: H\nblank: 0\nA 0 -> B 1 R\nA 0 -> A 0 L\n", "second transition"),
    ("initial: A\nhalting: H\nblank: 0\nsymbols: 0\nA 0 -> B 1 R\n", "not declared"),
    ("initial: H\nhalting: H\nblank: 0\n", "initial state"),
])
def test_machine_errors(text, msg):
    with pytest.raises(MachineError, match=msg):
        TuringMachine.parse(text)


def test_missing_transition_is_machine_error():
    m = TuringMachine.parse("initial: A\nhalting: H\nblank: 0\nA 0 -> A 1 R\n")
    run(m, 3)
    m = TuringMachine.parse("initial: A\nhalting: H\nblank: 0\nA 0 -> B 1 R\n")
    with pytest.raises(MachineError):
        run(m, 3)


def test_resolve_machine(tmp_path):
    p = tmp_path / "m.tm"
    p.write_text(BB2)
    assert resolve_machine(str(p)).name == "m"
    assert resolve_machine("bb2.tm").name == "bb2"
    with pytest.raises(MachineError):
        resolve_machine(str(tmp_path / "nope.tm"))


def test_required_generation():
    class D:
        def __init__(self, n):
            self.rows = [None] * n
    assert required_generation(D(1)) == 1
    assert required_generation(D(3)) == 1
    assert required_generation(D(4)) == 3
    assert required_generation(run(builtin_machine("bb2"), 10)) == 5


def test_embed_busy_beaver():
    d = run(builtin_machine("bb2"), 100)
    g = required_generation(d)
    t, w = red_triangle(g)
    e = embed(d, t, w)
    assert e.halt_cap is not None and e.halt_cap.step == 6
    assert e.rows_used == 7
    json.dumps(e.dump())
    t1, w1 = red_triangle(1)
    with pytest.raises(InsufficientArea):
        embed(d, t1, w1)


def test_embed_succeeds_for_every_larger_generation():
    d = run(builtin_machine("bb2"), 100)
    for g in (5, 7):
        t, w = red_triangle(g)
        assert embed(d, t, w).halt_cap is not None
    for g in (1, 3):
        t, w = red_triangle(g)
        with pytest.raises(InsufficientArea):
            embed(d, t, w)


def test_loop_is_cut_by_the_basis():
    t, w = red_triangle(5)
    e = embed_machine(builtin_machine("loop"), t, w)
    assert e.halt_cap is None
    assert e.rows_used == 9
    with pytest.raises(NotHalted):
        encapsulate(e, AreaVariant.WHITE)


def test_encapsulation():
    d = run(builtin_machine("bb2"), 100)
    t, w = red_triangle(5)
    e = embed(d, t, w)
    white, black = encapsulate(e, AreaVariant.WHITE), encapsulate(e, AreaVariant.BLACK)
    assert white.height == black.height
    assert white.interior == black.interior
    h = int(t.half_height)
    assert len(white.border) == 4 * h
    assert white.border_closed()
