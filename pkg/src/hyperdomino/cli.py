"""Command-line entry point.

Exit codes: 0 success, 1 property violation or refusal, 2 usage or
configuration error, 3 malformed machine description.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import assembly, brackets, fibonacci, render, trilaterals, turing
from .brackets import ConfigurationError, IntervalKind, ModelWindow, PhaseSequence

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_MACHINE = 0, 1, 2, 3

MAX_ALL_PHASES_GENS = 6
MAX_ASSEMBLY_TILES = 5_000_000


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(".."))
    except ValueError:
        raise UsageError(f"range must look like A..B, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty range {text}")
    return lo, hi


def phase_list(args) -> list[PhaseSequence]:
    G = args.gens
    if args.phases == "all":
        if G > MAX_ALL_PHASES_GENS:
            raise UsageError(f"--phases all is limited to --gens <= {MAX_ALL_PHASES_GENS}")
        return list(PhaseSequence.all(G))
    if args.phases is None:
        return [PhaseSequence.zeros(G)]
    return [PhaseSequence.parse(args.phases).truncated(G)]


def windows(args) -> list[ModelWindow]:
    lo, hi = parse_range(args.range)
    return [ModelWindow(lo, hi, ph, args.gens) for ph in phase_list(args)]


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def brackets_problems(w: ModelWindow) -> list[str]:
    out = []
    for iv in w.all_intervals(IntervalKind.ACTIVE, inside=True):
        if iv.color is brackets.Color.RED:
            n = (iv.generation - 1) // 2
            seen = brackets.visible_blue(iv, w)
            if len(seen) != 2 ** (n + 1) + 1:
                out.append(f"{iv}: {len(seen)} visible blue letters, expected {2 ** (n + 1) + 1}")
        else:
            seen = brackets.visible_red(iv, w)
            if seen != [iv.midpoint]:
                out.append(f"{iv}: visible red letters {seen}, expected [{iv.midpoint}]")
    for x in range(w.lo, w.hi + 1):
        c = brackets.containment_count(x, w)
        if c > w.G + 1:
            out.append(f"{x} lies in {c} active intervals")
        if brackets.cut(w, x).containment_count(x) != 0:
            out.append(f"cut at {x} keeps an active interval containing it")
    for g in range(w.G + 1):
        ivs = w.intervals(g)
        for a, b in zip(ivs, ivs[1:]):
            if a.right != b.left or a.kind is b.kind:
                out.append(f"generation {g}: {a} and {b} do not alternate")
    return out


def cmd_brackets(args) -> int:
    ws = windows(args)
    if args.action == "gen":
        w = ws[0]
        for line in brackets.interval_listing(w):
            print(line)
        _write(args.out, _json(w.dump()))
        return EXIT_OK
    bad = 0
    for w in ws:
        probs = brackets_problems(w)
        bad += len(probs)
        for p in probs:
            print(f"phases {w.phases}: {p}")
    print(f"windows={len(ws)} violations={bad}")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_trilaterals(args) -> int:
    ws = windows(args)
    if args.action == "lift":
        ts = trilaterals.lift(ws[0])
        for t in ts:
            print(t)
        _write(args.out, _json(trilaterals.dump(ts)))
        return EXIT_OK
    bad = 0
    meetings = 0
    for w in ws:
        probs = trilaterals.property_report(w)
        ts = trilaterals.lift(w, inside=True)
        meetings += len(trilaterals.basis_leg_meetings(ts))
        for t in ts:
            if t.kind is trilaterals.Kind.TRIANGLE and t.color is brackets.Color.RED:
                if trilaterals.free_rows(t, w) != trilaterals.free_rows_by_visibility(t, w):
                    probs.append(f"{t}: free rows disagree with visible letters")
        bad += len(probs)
        for p in probs:
            print(f"phases {w.phases}: {p}")
    print(f"windows={len(ws)} meetings={meetings} violations={bad}")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_quarters(args) -> int:
    dec = fibonacci.split_quarter(args.n, args.m)
    probs = dec.verify()
    ident = "ok" if dec.counting_identity() else "fail"
    print(f"white_slots={len(dec.white_slots)} black_slots={len(dec.black_slots)} identity={ident}")
    for p in probs:
        print(p)
    return EXIT_VIOLATION if probs else EXIT_OK


def _triangle_for(g: int) -> tuple[trilaterals.Trilateral, ModelWindow]:
    size = 2 ** (g + 3)
    w = ModelWindow(-size, size, PhaseSequence.zeros(g + 1))
    for t in trilaterals.lift(w, inside=True):
        if t.kind is trilaterals.Kind.TRIANGLE and t.generation == g:
            return t, w
    raise ConfigurationError(f"no generation {g} triangle found")


def cmd_tm(args) -> int:
    machine = turing.resolve_machine(args.machine)
    d = turing.run(machine, args.steps)
    if args.action == "run":
        print(f"outcome={d.outcome} rows={len(d.rows)} non_blank={d.non_blank()}")
        if args.grid:
            sys.stdout.write(d.text_grid())
        return EXIT_OK
    g = args.gen
    if g is None:
        g = turing.required_generation(d) if d.outcome.halted else 1
    if g % 2 == 0:
        raise UsageError("--gen must be odd")
    tri, w = _triangle_for(g)
    try:
        if d.outcome.halted:
            e = turing.embed(d, tri, w)
        else:
            e = turing.embed_machine(machine, tri, w)
    except turing.InsufficientArea as exc:
        print(f"refused: {exc}")
        return EXIT_VIOLATION
    cap = "none" if e.halt_cap is None else f"step {e.halt_cap.step} isocline {e.halt_cap.isocline.absolute}"
    print(f"triangle={tri} rows_used={e.rows_used} outcome={e.diagram.outcome} halt_cap={cap}")
    if args.action == "embed":
        _write(args.out, _json(e.dump()))
        return EXIT_OK
    try:
        areas = [turing.encapsulate(e, v) for v in turing.AreaVariant]
    except turing.NotHalted as exc:
        print(f"refused: {exc}")
        return EXIT_VIOLATION
    for a in areas:
        print(f"{a.variant.value}: height={a.height} border={len(a.border)} closed={a.border_closed()}")
    same = areas[0].interior == areas[1].interior and areas[0].height == areas[1].height
    print(f"identical_interiors={same}")
    return EXIT_OK if same else EXIT_VIOLATION


def cmd_assemble(args) -> int:
    if args.depth < 2:
        raise UsageError("--depth must be >= 2")
    size = fibonacci.quarter_size(assembly.region_height(args.steps, args.depth))
    if size > MAX_ASSEMBLY_TILES:
        raise UsageError(f"T_{args.steps} with depth {args.depth} has {size} tiles (limit {MAX_ASSEMBLY_TILES})")
    if args.machine:
        machine = turing.resolve_machine(args.machine)
        d = turing.run(machine, args.max_steps)
        if not d.outcome.halted:
            print(f"refused: {machine.name} did not halt within {args.max_steps} steps; no super-prototiles exist")
            return EXIT_VIOLATION
        print(f"machine {machine.name}: {d.outcome}")
    maps, reports = assembly.assemble(args.steps, args.depth)
    for r in reports:
        for line in r.lines():
            print(line)
    ok = all(r.ok for r in reports)
    print(f"shift: {'ok' if ok else 'failed'} prefix={'.'.join(['1'] * args.depth)}")
    _write(args.out, _json(assembly.assembly_dump(maps, args.depth)))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_nonperiodic(args) -> int:
    bad = 0
    for w in windows(args):
        found, missing = assembly.nonperiodicity_witness(w, args.max_translation)
        if args.verbose:
            for wit in found:
                print(f"phases {w.phases}: {wit}")
        for t in missing:
            print(f"phases {w.phases}: no witness for translation {t}")
        bad += len(missing)
    print(f"missing_witnesses={bad}")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_render(args) -> int:
    if args.action == "line":
        ws = windows(args)
        text = render.emit_line_svg(ws[0])
    elif args.steps is not None:
        gm = assembly.build_region(assembly.RegionKind.T, args.steps, args.prototile_depth)
        levels = min(args.depth, gm.height)
        coloring = render.variant_coloring(gm.owner, [p.variant.value for p in gm.placements])
        text = render.emit_disc_svg(render.layout(gm.table, levels), coloring)
    else:
        root = fibonacci.NodeColor(args.root)
        text = render.emit_disc_svg(render.layout(fibonacci.LevelTable(root, args.depth)))
    Path(args.out).write_text(text)
    print(f"wrote {args.out}")
    return EXIT_OK


def _window_args(p: argparse.ArgumentParser, gens: int = 4) -> None:
    p.add_argument("--range", default="-64..64", help="window A..B")
    p.add_argument("--gens", type=int, default=gens, help="max generation G")
    p.add_argument("--phases", default=None, help="comma list p0,p1,...,pG or 'all'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperdomino", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("brackets", help="abstract brackets windows")
    p.add_argument("action", choices=["gen", "check"])
    _window_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_brackets)

    p = sub.add_parser("trilaterals", help="lifted triangles and phantoms")
    p.add_argument("action", choices=["lift", "check"])
    _window_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_trilaterals)

    p = sub.add_parser("quarters", help="quarter decomposition")
    p.add_argument("action", choices=["split"])
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_quarters)

    p = sub.add_parser("tm", help="Turing machine pipeline")
    p.add_argument("action", choices=["run", "embed", "encapsulate"])
    p.add_argument("machine", help="machine file, or bb2 / loop")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--gen", type=int, default=None, help="generation of the host triangle")
    p.add_argument("--grid", action="store_true", help="print the space-time diagram")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tm)

    p = sub.add_parser("assemble", help="periodic super-prototile assembly")
    p.add_argument("--steps", type=int, default=2)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--machine")
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("nonperiodic", help="witnesses against axis translations")
    _window_args(p, gens=5)
    p.add_argument("--max-translation", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_nonperiodic)

    p = sub.add_parser("render", help="SVG output")
    p.add_argument("action", choices=["disc", "line"])
    p.add_argument("--out", required=True)
    p.add_argument("--depth", type=int, default=4, help="levels to draw (disc)")
    p.add_argument("--root", choices=["W", "B"], default="W")
    p.add_argument("--steps", type=int, default=None, help="colour an assembly T_n by variant")
    p.add_argument("--prototile-depth", type=int, default=3)
    _window_args(p)
    p.set_defaults(func=cmd_render)
    return parser


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    # "--range -64..64" would otherwise read -64..64 as an option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--range":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = _join_negative_values(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except turing.MachineError as exc:
        print(f"machine error: {exc}", file=sys.stderr)
        return EXIT_MACHINE
    except (UsageError, ConfigurationError, render.RenderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
