"""Slow, independent reference implementations used to check the package.

Nothing here imports the code under test except for plain data types.
"""
from __future__ import annotations

from collections import deque

SONS = {"B": ("B", "W"), "W": ("B", "W", "W")}


def bfs_enumerate(root: str, depth: int) -> list[tuple[int, int, str, int | None, tuple[int, ...]]]:
    """(index, level, colour, parent index, path) for every node, by an explicit queue."""
    out = []
    queue = deque([(root, 0, None, ())])
    index = 0
    while queue:
        color, level, parent, path = queue.popleft()
        index += 1
        out.append((index, level, color, parent, path))
        if level + 1 < depth:
            for j, son in enumerate(SONS[color]):
                queue.append((son, level + 1, index, path + (j,)))
    return out


def fib_oracle(k: int) -> int:
    seq = {-1: 0, 0: 1}
    for i in range(1, k + 1):
        seq[i] = seq[i - 1] + seq[i - 2]
    return seq[k]


class BruteBrackets:
    """Run the generation process letter by letter on a finite stretch of the line.

    Generation 0 labels every integer R, M, B, M with R on ``p0 mod 4``.
    Generation g+1 keeps the M letters of generation g; those that are
    mid-points of active intervals become R and B alternately (the phase bit
    says whether the smaller of the two such mid-points in
    ``[0, 2**(g+3))`` is an R), the others stay M.
    """

    def __init__(self, phases: list[int], G: int, lo: int, hi: int):
        margin = 2 ** (G + 4)
        self.G = G
        self.lo, self.hi = lo, hi
        xs = list(range(lo - margin, hi + margin + 1))
        labels = {x: "RMBM"[(x - phases[0]) % 4] for x in xs}
        self.gens = [dict(labels)]
        self.actives: list[list[tuple[int, int]]] = []
        self.silents: list[list[tuple[int, int]]] = []
        for g in range(G + 1):
            cur = self.gens[g]
            letters = sorted(cur)
            act, sil = [], []
            for i, x in enumerate(letters):
                if cur[x] not in "RB":
                    continue
                want = "B" if cur[x] == "R" else "R"
                for y in letters[i + 1:]:
                    if cur[y] in "RB":
                        if cur[y] == want:
                            (act if cur[x] == "R" else sil).append((x, y))
                        break
            self.actives.append(act)
            self.silents.append(sil)
            if g == G:
                break
            mids = sorted((a + b) // 2 for a, b in act)
            inside = [m for m in mids if 0 <= m < 2 ** (g + 3)]
            assert len(inside) == 2, inside
            first_r = inside[phases[g + 1]]
            k0 = mids.index(first_r)
            nxt = {}
            for x in letters:
                if cur[x] == "M":
                    nxt[x] = "M"
            for k, m in enumerate(mids):
                nxt[m] = "R" if (k - k0) % 2 == 0 else "B"
            self.gens.append(nxt)

    def final(self, x: int) -> tuple[str, int]:
        g = max(k for k, labels in enumerate(self.gens) if x in labels)
        return self.gens[g][x], g

    def color(self, x: int) -> str:
        label, g = self.final(x)
        if label == "M":
            g += 1
        return "blue" if g % 2 == 0 else "red"

    def visible(self, interval: tuple[int, int], g: int) -> list[int]:
        """Letters of the opposite colour inside an active interval of generation g
        that no smaller active interval of the interval's own colour hides."""
        own = "blue" if g % 2 == 0 else "red"
        l, r = interval
        out = []
        for x in range(l + 1, r):
            if self.color(x) == own:
                continue
            hidden = any(
                a < x < b
                for n in range(g)
                if n % 2 == g % 2
                for a, b in self.actives[n]
            )
            if not hidden:
                out.append(x)
        return out

    def containing(self, x: int) -> int:
        return sum(1 for g in range(self.G + 1) for a, b in self.actives[g] if a <= x <= b)


def simulate(transitions: dict, initial: str, halting: set, blank: str, limit: int):
    """Tape as a Python list that grows on demand; returns (steps, tape, halted)."""
    tape = [blank]
    head, state, origin = 0, initial, 0
    for step in range(1, limit + 1):
        q, s, move = transitions[(state, tape[head])]
        tape[head] = s
        state = q
        head += 1 if move == "R" else -1
        if head < 0:
            tape.insert(0, blank)
            head, origin = 0, origin + 1
        if head == len(tape):
            tape.append(blank)
        if state in halting:
            return step, tape, True
    return limit, tape, False
