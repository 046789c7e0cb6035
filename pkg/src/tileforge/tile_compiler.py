"""Compile a checker machine into a tile set whose macro-tiles carry its accepting runs.

Every tile knows its coordinates (x, y) modulo N, which forces the N x N
splitting.  On top of that, border cells expose one bit per side position
(nonzero only in the k centered cells), wires carry those bits unchanged to
the bottom row of a computation zone, and the zone holds the time-space
diagram of the machine: each zone tile stores three neighboring cells of row t
and emits the middle cell of row t + 1 on its top side.  Acceptance is
required in the top row.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .macro_sim import MacroTile, SimulationMap, SimulationReport, WindowSearchExploded, check_simulation
from .substitution import SubstitutionRule, iterate
from .wang_core import Tile, TileSet, TilingError

BLANK = "_"
WALL = "#"
SIDE_ORDER = ("left", "right", "top", "bottom")


class LayoutInfeasible(TilingError):
    pass


class RejectedByProgram(TilingError):
    pass


class TimeBudgetExceeded(TilingError):
    pass


class ZoomMismatch(TilingError):
    pass


# ---------------------------------------------------------------- machines


@dataclass(frozen=True)
class CheckerMachine:
    """Single-tape machine with a read-only program track.

    ``transitions`` maps (state, symbol) or (state, symbol, program_symbol) to
    (new_state, write, move) with move in {-1, 0, 1}.  A missing entry halts
    without accepting.  The accepting state is absorbing.  The step bound on
    an input of n bits is ``time_slope * n + time_offset``.
    """

    name: str
    states: tuple[str, ...]
    start: str
    accept: str
    transitions: tuple[tuple[tuple, tuple], ...]
    program: str = ""
    time_slope: int = 1
    time_offset: int = 1
    letters: SubstitutionRule | None = None
    letter_iterations: int = 0

    def __post_init__(self):
        if self.start not in self.states or self.accept not in self.states:
            raise ValueError("start and accept must be states")
        keys = [k for k, _ in self.transitions]
        if len(keys) != len(set(keys)):
            raise ValueError("transitions must be deterministic")
        if any(k[0] == self.accept for k in keys):
            raise ValueError("the accepting state halts")

    @property
    def table(self) -> dict:
        return dict(self.transitions)

    def lookup(self, q: str, sym: str, prog: str):
        t = self.table
        return t.get((q, sym, prog), t.get((q, sym)))

    @property
    def trivial(self) -> bool:
        """Accepts before reading anything, so no computation zone is needed."""
        return self.start == self.accept and not self.program

    def steps(self, n_input: int) -> int:
        return self.time_slope * n_input + self.time_offset

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "states": list(self.states),
            "start": self.start,
            "accept": self.accept,
            "transitions": [[list(k), list(v)] for k, v in self.transitions],
            "program": self.program,
            "time_slope": self.time_slope,
            "time_offset": self.time_offset,
        }


def machine_from_json(d: Mapping) -> CheckerMachine:
    return CheckerMachine(
        d["name"],
        tuple(d["states"]),
        d["start"],
        d["accept"],
        tuple((tuple(k), tuple(v)) for k, v in d["transitions"]),
        d.get("program", ""),
        int(d.get("time_slope", 1)),
        int(d.get("time_offset", 1)),
    )


def eq1() -> CheckerMachine:
    """Accepts iff all input bits are equal (one sweep to the right)."""
    tr = (
        (("start", "0"), ("s0", "0", 1)),
        (("start", "1"), ("s1", "1", 1)),
        (("start", BLANK), ("acc", BLANK, 0)),
        (("s0", "0"), ("s0", "0", 1)),
        (("s0", BLANK), ("acc", BLANK, 0)),
        (("s1", "1"), ("s1", "1", 1)),
        (("s1", BLANK), ("acc", BLANK, 0)),
    )
    return CheckerMachine("EQ1", ("start", "s0", "s1", "acc"), "start", "acc", tr, "", 1, 1)


def reject_all() -> CheckerMachine:
    return CheckerMachine("REJECT-ALL", ("start", "acc"), "start", "acc", (), "", 1, 1)


def accept_all() -> CheckerMachine:
    return CheckerMachine("ACCEPT-ALL", ("acc",), "acc", "acc", (), "", 0, 0)


def bundled_machines() -> dict:
    return {"EQ1": eq1(), "REJECT-ALL": reject_all(), "ACCEPT-ALL": accept_all()}


def add_substitution_layer(machine: CheckerMachine, s: SubstitutionRule, iterations: int, N: int | None = None) -> CheckerMachine:
    """Attach a letter layer: each tile carries its own letter and its father's.

    The father letter is shared across the non-border sides of a macro-tile and
    the own letter must equal s^iterations(father) at the tile's coordinates.
    The image block is precomputed here rather than computed by the machine.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if N is not None and N != s.m**iterations:
        raise ZoomMismatch(f"N={N} but m^iterations={s.m**iterations}")
    return replace(machine, name=f"{machine.name}+letters", letters=s, letter_iterations=iterations)


# ---------------------------------------------------------------- runs


@dataclass(frozen=True)
class Run:
    rows: tuple[tuple[tuple[str, str | None], ...], ...]  # rows[t][i] = (symbol, state)
    accepted: bool


def run_machine(m: CheckerMachine, tape: str, width: int, height: int) -> Run:
    """Run for height - 1 steps on a tape of ``width`` cells, head at cell 0."""
    cells = list(tape.ljust(width, BLANK))
    prog = program_track(m, len(tape) - len(m.program), width)
    pos, q = 0, m.start
    rows = []
    for t in range(height):
        rows.append(tuple((cells[i], q if i == pos else None) for i in range(width)))
        if t == height - 1:
            break
        if q == m.accept:
            continue
        tr = m.lookup(q, cells[pos], prog[pos])
        if tr is None:
            raise RejectedByProgram(f"{m.name} halts in state {q!r} at step {t}")
        q, cells[pos], mv = tr[0], tr[1], tr[2]
        pos += mv
        if not 0 <= pos < width:
            raise TimeBudgetExceeded(f"{m.name} leaves the zone (width {width})")
    if q != m.accept:
        raise TimeBudgetExceeded(f"{m.name} still running after {height - 1} steps")
    return Run(tuple(rows), True)


def program_track(m: CheckerMachine, n_input: int, width: int) -> str:
    return (BLANK * n_input + m.program).ljust(width, BLANK)[:width]


# ---------------------------------------------------------------- layout


@dataclass(frozen=True)
class Wire:
    side: str
    bit: int
    path: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Layout:
    N: int
    k: int
    zone: tuple[int, int, int, int] | None  # (x0, y0, w, h)
    wires: tuple[Wire, ...]
    tape_order: tuple[tuple[str, int], ...]  # input tape cell i reads (side, bit)

    @property
    def c0(self) -> int:
        return (self.N - self.k) // 2

    def side_cells(self, side: str) -> list[tuple[int, int]]:
        n, c0 = self.N, self.c0
        if side == "left":
            return [(0, c0 + b) for b in range(self.k)]
        if side == "right":
            return [(n - 1, c0 + b) for b in range(self.k)]
        if side == "top":
            return [(c0 + b, n - 1) for b in range(self.k)]
        return [(c0 + b, 0) for b in range(self.k)]

    def zone_cells(self) -> set:
        if self.zone is None:
            return set()
        x0, y0, w, h = self.zone
        return {(x, y) for x in range(x0, x0 + w) for y in range(y0, y0 + h)}

    def wires_disjoint(self) -> bool:
        seen = set()
        for wire in self.wires:
            for c in wire.path:
                if c in seen:
                    return False
                seen.add(c)
        return not (seen & self.zone_cells())

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "zone": list(self.zone) if self.zone else None,
            "wires": [{"side": w.side, "bit": w.bit, "path": [list(c) for c in w.path]} for w in self.wires],
            "tape_order": [list(t) for t in self.tape_order],
        }


def _segment(a: tuple[int, int], b: tuple[int, int]) -> list[tuple[int, int]]:
    """Cells from a (exclusive) to b (inclusive) along one axis."""
    (x0, y0), (x1, y1) = a, b
    if x0 != x1 and y0 != y1:
        raise AssertionError("segments are axis-parallel")
    out = []
    dx = (x1 > x0) - (x1 < x0)
    dy = (y1 > y0) - (y1 < y0)
    x, y = x0, y0
    while (x, y) != (x1, y1):
        x, y = x + dx, y + dy
        out.append((x, y))
    return out


def _path(corners: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    cells = [corners[0]]
    for a, b in zip(corners, corners[1:]):
        cells.extend(_segment(a, b))
    return tuple(cells)


def plan_layout(N: int, k: int, machine: CheckerMachine, slack: int = 4) -> Layout:
    """Canonical layout; wires are rectilinear channels nested so they never cross.

    The input block of the zone sits at columns c0 - 2k .. c0 + 2k - 1 just above
    the port row, and receives the side bits in counterclockwise boundary order
    starting at the top-right corner: top (right to left), left (top to bottom),
    bottom (left to right), right (bottom to top).
    """
    if k < 0 or N < 1:
        raise LayoutInfeasible("need N >= 1 and k >= 0")
    if k > N:
        raise LayoutInfeasible(f"k={k} exceeds N={N}")
    if machine.letters is not None and N != machine.letters.m**machine.letter_iterations:
        raise ZoomMismatch(f"N={N} but the letter layer needs {machine.letters.m ** machine.letter_iterations}")
    if machine.trivial:
        return Layout(N, k, None, (), ())
    c0 = (N - k) // 2
    w = 4 * k + len(machine.program) + slack
    h = machine.steps(4 * k) + 1
    zx0 = c0 - 2 * k
    zy0 = (N - h) // 2
    py = zy0 - 1
    reasons = []
    if zx0 < 2 * k + 1:
        reasons.append("no room left of the zone for the side channels")
    if zx0 + w > N - 1 - k:
        reasons.append("zone too wide")
    if zy0 < 2 * k + 2:
        reasons.append("no room below the zone for the lanes")
    if zy0 + h + k > N - 1:
        reasons.append("no room above the zone")
    if k > 0 and c0 + k - 1 >= zy0 + h:
        reasons.append("side rows above the zone")
    if reasons:
        raise LayoutInfeasible(f"N={N}, k={k}, zone {w}x{h}: " + "; ".join(reasons))
    wires = []
    port = {}
    for b in range(k):
        # left group (outer to inner): L_0..L_{k-1}, then T_0..T_{k-1}
        lane, col = 1 + b, c0 - 1 - b
        wires.append(Wire("left", b, _path([(0, c0 + b), (1 + b, c0 + b), (1 + b, lane), (col, lane), (col, py)])))
        port[("left", b)] = col
    for b in range(k):
        j = k + b
        lane, col, xt, yt = 1 + j, c0 - 1 - j, k + 1 + b, zy0 + h + (k - 1 - b)
        wires.append(
            Wire("top", b, _path([(c0 + b, N - 1), (c0 + b, yt), (xt, yt), (xt, lane), (col, lane), (col, py)]))
        )
        port[("top", b)] = col
    for b in range(k):
        wires.append(Wire("bottom", b, _path([(c0 + b, 0), (c0 + b, py)])))
        port[("bottom", b)] = c0 + b
    for b in range(k):
        lane, col, xr = 1 + b, c0 + k + b, N - 2 - b
        wires.append(Wire("right", b, _path([(N - 1, c0 + b), (xr, c0 + b), (xr, lane), (col, lane), (col, py)])))
        port[("right", b)] = col
    order = sorted(port, key=lambda key: port[key])
    lay = Layout(N, k, (zx0, zy0, w, h), tuple(wires), tuple(order))
    if not lay.wires_disjoint():
        raise LayoutInfeasible("wire channels collide")
    if any(not (0 <= x < N and 0 <= y < N) for wire in wires for x, y in wire.path):
        raise LayoutInfeasible("wire leaves the square")
    return lay


def smallest_feasible_N(machine: CheckerMachine, k: int, n_max: int = 256) -> int:
    for n in range(1, n_max + 1):
        try:
            plan_layout(n, k, machine)
        except (LayoutInfeasible, ZoomMismatch):
            continue
        return n
    raise LayoutInfeasible(f"no N <= {n_max} fits")


def tape_input(layout: Layout, sides: Mapping[str, Sequence[int]]) -> str:
    return "".join(str(sides[s][b]) for s, b in layout.tape_order)


# ---------------------------------------------------------------- compilation

_OPP = {"left": "right", "right": "left", "top": "bottom", "bottom": "top"}
_DIR = {(1, 0): "right", (-1, 0): "left", (0, 1): "top", (0, -1): "bottom"}


@dataclass(frozen=True)
class CompiledTileSet:
    tileset: TileSet
    machine: CheckerMachine
    layout: Layout
    decode_table: tuple[tuple, ...]  # per tile: (x, y, content)
    lookup: dict = field(repr=False, compare=False)  # color quadruple -> tile index
    color_ids: dict = field(repr=False, compare=False)

    @property
    def N(self) -> int:
        return self.layout.N


def _coord_sides(x: int, y: int, n: int) -> dict:
    return {"left": (x, y), "right": ((x + 1) % n, y), "bottom": (x, y), "top": (x, (y + 1) % n)}


class _Geometry:
    """Per-cell roles derived from a layout."""

    def __init__(self, m: CheckerMachine, lay: Layout):
        self.m, self.lay, self.N = m, lay, lay.N
        self.wire_at = {}
        for wi, wire in enumerate(lay.wires):
            path = wire.path
            for s, c in enumerate(path):
                prev_side = wire.side if s == 0 else _DIR[(path[s - 1][0] - c[0], path[s - 1][1] - c[1])]
                next_side = "top" if s == len(path) - 1 else _DIR[(path[s + 1][0] - c[0], path[s + 1][1] - c[1])]
                self.wire_at[c] = (wi, prev_side, next_side, s == 0)
        self.free_bit = {}
        if lay.zone is None:
            for side in SIDE_ORDER:
                for b, c in enumerate(lay.side_cells(side)):
                    self.free_bit.setdefault(c, []).append(side)
        self.zone = lay.zone
        if self.zone is not None:
            zx0, _, w, _ = self.zone
            self.prog = program_track(m, 4 * lay.k, w)
            self.ports = {}
            for wi, wire in enumerate(lay.wires):
                self.ports[wire.path[-1][0]] = wi

    def outer_sides(self, x: int, y: int) -> list[str]:
        n = self.N
        out = []
        if x == 0:
            out.append("left")
        if x == n - 1:
            out.append("right")
        if y == n - 1:
            out.append("top")
        if y == 0:
            out.append("bottom")
        return out


def _next_cell(m: CheckerMachine, prog: str, a, b, c, i: int):
    """Content of tape cell i one step later, or None if the window is impossible."""
    sym, q = b
    if q is not None:
        if q == m.accept:
            return b
        tr = m.lookup(q, sym, prog[i])
        if tr is None:
            return None
        q2, wr, mv = tr
        if mv == 0:
            return (wr, q2)
        if (mv == -1 and a == WALL) or (mv == 1 and c == WALL):
            return None
        return (wr, None)
    for nb, want, j in ((a, 1, i - 1), (c, -1, i + 1)):
        if nb == WALL or nb[1] is None or nb[1] == m.accept:
            continue
        tr = m.lookup(nb[1], nb[0], prog[j])
        if tr is not None and tr[2] == want:
            return (sym, tr[0])
    return (sym, None)


def _heads(*cells) -> int:
    return sum(1 for c in cells if c != WALL and c[1] is not None)


def _zone_rows(m: CheckerMachine, lay: Layout, prog: str) -> list[list[set]]:
    """Reachable cell contents per zone row and tape position."""
    _, _, w, h = lay.zone
    n_in = 4 * lay.k
    row0 = []
    for i in range(w):
        head = m.start if i == 0 else None
        syms = ("0", "1") if i < n_in else (prog[i],)
        row0.append({(s, head) for s in syms})
    rows = [row0]
    for _ in range(h - 1):
        cur = rows[-1]
        nxt = []
        for i in range(w):
            left = cur[i - 1] if i > 0 else {WALL}
            right = cur[i + 1] if i + 1 < w else {WALL}
            out = set()
            for a in left:
                for b in cur[i]:
                    for c in right:
                        if _heads(a, b, c) > 1:
                            continue
                        v = _next_cell(m, prog, a, b, c, i)
                        if v is not None:
                            out.add(v)
            nxt.append(out)
        rows.append(nxt)
    return rows


def _cell_variants(g: _Geometry, rows, x: int, y: int) -> list[tuple[dict, tuple]]:
    """All (payload per side, content) options for cell (x, y) ignoring letters."""
    m, lay = g.m, g.lay
    base = {s: None for s in SIDE_ORDER}
    outer = g.outer_sides(x, y)
    for s in outer:
        base[s] = 0
    if (x, y) in g.wire_at:
        wi, prev_side, next_side, first = g.wire_at[(x, y)]
        out = []
        for bit in (0, 1):
            p = dict(base)
            p[prev_side] = bit if first else ("w", bit)
            p[next_side] = ("w", bit)
            out.append((p, ("wire", wi, bit)))
        return out
    if (x, y) in g.free_bit:
        sides = g.free_bit[(x, y)]
        out = []
        for bits in _product((0, 1), len(sides)):
            p = dict(base)
            for s, bit in zip(sides, bits):
                p[s] = bit
            out.append((p, ("border", bits)))
        return out
    if g.zone is not None and (x, y) in lay.zone_cells():
        zx0, zy0, w, h = g.zone
        i, t = x - zx0, y - zy0
        cur = rows[t]
        left = cur[i - 1] if i > 0 else {WALL}
        right = cur[i + 1] if i + 1 < w else {WALL}
        out = []
        for a in sorted(left, key=repr):
            for b in sorted(cur[i], key=repr):
                for c in sorted(right, key=repr):
                    if _heads(a, b, c) > 1:
                        continue
                    p = dict(base)
                    p["left"] = None if a == WALL else ("h", a, b)
                    p["right"] = None if c == WALL else ("h", b, c)
                    if t == 0:
                        p["bottom"] = ("w", int(b[0])) if i < 4 * lay.k else None
                    else:
                        p["bottom"] = ("z", b)
                    if t == h - 1:
                        if b[1] is not None and b[1] != m.accept:
                            continue
                        p["top"] = None
                    else:
                        nxt = _next_cell(m, g.prog, a, b, c, i)
                        if nxt is None:
                            continue
                        p["top"] = ("z", nxt)
                    out.append((p, ("zone", a, b, c)))
        return out
    return [(base, ("fill",))]


def _product(vals, n):
    if n == 0:
        yield ()
        return
    for v in vals:
        for rest in _product(vals, n - 1):
            yield (v,) + rest


def _letter_block(m: CheckerMachine):
    if m.letters is None:
        return None
    return {f: iterate(m.letters, f, m.letter_iterations).cells for f in range(len(m.letters.alphabet))}


def compile(machine: CheckerMachine, layout: Layout) -> CompiledTileSet:
    n = layout.N
    if machine.letters is not None and n != machine.letters.m**machine.letter_iterations:
        raise ZoomMismatch(f"N={n} but the letter layer needs {machine.letters.m ** machine.letter_iterations}")
    g = _Geometry(machine, layout)
    rows = _zone_rows(machine, layout, g.prog) if layout.zone is not None else None
    blocks = _letter_block(machine)
    raw = []  # (colors dict, decode)
    for y in range(n):
        for x in range(n):
            coords = _coord_sides(x, y, n)
            outer = set(g.outer_sides(x, y))
            for payload, content in _cell_variants(g, rows, x, y):
                letter_opts = [None] if blocks is None else list(blocks)
                for f in letter_opts:
                    cols = {}
                    for s in SIDE_ORDER:
                        lf = None if (f is None or s in outer) else f
                        cols[s] = (coords[s], payload[s], lf)
                    own = None if f is None else int(blocks[f][y, x])
                    raw.append((cols, (x, y, content, (own, f))))
    names = sorted({repr(c[s]) for c, _ in raw for s in SIDE_ORDER})
    color_ids = {name: i for i, name in enumerate(names)}
    tiles, decode, lookup = [], [], {}
    for cols, dec in raw:
        ids = tuple(color_ids[repr(cols[s])] for s in SIDE_ORDER)
        label = repr(dec)
        tiles.append(Tile(ids[0], ids[1], ids[2], ids[3], label))
        decode.append(dec)
        lookup[ids] = len(tiles) - 1
    ts = TileSet(f"compiled[{machine.name},N={n},k={layout.k}]", tuple(names), tuple(tiles))
    return CompiledTileSet(ts, machine, layout, tuple(decode), lookup, color_ids)


def decode(cts: CompiledTileSet, index: int) -> tuple:
    return cts.decode_table[index]


def encode(cts: CompiledTileSet, decoded: tuple) -> int:
    return cts.decode_table.index(decoded)


def _norm_sides(sides, k: int) -> dict:
    if isinstance(sides, Mapping):
        items = [sides[s] for s in SIDE_ORDER]
    else:
        items = list(sides)
    if len(items) != 4:
        raise ValueError("need four side strings (left, right, top, bottom)")
    out = {}
    for s, v in zip(SIDE_ORDER, items):
        bits = tuple(int(c) for c in v) if not isinstance(v, int) else (v,)
        if len(bits) != k or any(b not in (0, 1) for b in bits):
            raise ValueError(f"side {s} must be a {k}-bit string")
        out[s] = bits
    return out


def assemble_macrotile(cts: CompiledTileSet, sides, letter: int | None = None) -> MacroTile:
    """Build the unique macro-tile with the given side bits (left, right, top, bottom)."""
    m, lay = cts.machine, cts.layout
    n = lay.N
    sd = _norm_sides(sides, lay.k)
    if m.letters is not None:
        if letter is None:
            raise ValueError("this tile set carries letters; pass letter=")
        if not 0 <= letter < len(m.letters.alphabet):
            raise ValueError(f"letter {letter} not in alphabet")
    run = None
    if lay.zone is not None:
        zx0, zy0, w, h = lay.zone
        tape = tape_input(lay, sd) + m.program
        run = run_machine(m, tape, w, h)
    g = _Geometry(m, lay)
    blocks = _letter_block(m)
    cells = []
    for y in range(n):
        for x in range(n):
            payload = {s: None for s in SIDE_ORDER}
            outer = g.outer_sides(x, y)
            for s in outer:
                payload[s] = 0
            if (x, y) in g.wire_at:
                wi, prev_side, next_side, first = g.wire_at[(x, y)]
                wire = lay.wires[wi]
                bit = sd[wire.side][wire.bit]
                payload[prev_side] = bit if first else ("w", bit)
                payload[next_side] = ("w", bit)
            elif (x, y) in g.free_bit:
                for s in g.free_bit[(x, y)]:
                    payload[s] = sd[s][lay.side_cells(s).index((x, y))]
            elif run is not None and (x, y) in lay.zone_cells():
                i, t = x - zx0, y - zy0
                row = run.rows[t]
                a = row[i - 1] if i > 0 else WALL
                b = row[i]
                c = row[i + 1] if i + 1 < w else WALL
                payload["left"] = None if a == WALL else ("h", a, b)
                payload["right"] = None if c == WALL else ("h", b, c)
                if t == 0:
                    payload["bottom"] = ("w", int(b[0])) if i < 4 * lay.k else None
                else:
                    payload["bottom"] = ("z", b)
                payload["top"] = None if t == h - 1 else ("z", run.rows[t + 1][i])
            coords = _coord_sides(x, y, n)
            ids = []
            for s in SIDE_ORDER:
                lf = None if (letter is None or s in outer) else letter
                ids.append(cts.color_ids[repr((coords[s], payload[s], lf))])
            cells.append(cts.lookup[tuple(ids)])
    return MacroTile(n, tuple(cells), cts.tileset)


def letter_projection(cts: CompiledTileSet, mt: MacroTile) -> list[list[int]]:
    """Own letters of a macro-tile body as rows [y][x]."""
    n = mt.N
    return [[cts.decode_table[mt.at(x, y)][3][0] for x in range(n)] for y in range(n)]


def encode_colors(n_colors: int, k: int) -> list[tuple[int, ...]]:
    """Color id -> k-bit big-endian string."""
    if n_colors > 2**k:
        raise ValueError(f"{n_colors} colors do not fit in {k} bits")
    return [tuple((c >> (k - 1 - i)) & 1 for i in range(k)) for c in range(n_colors)]


@dataclass(frozen=True)
class CompiledReport:
    total: bool
    report: SimulationReport | None
    detail: str = ""

    @property
    def injective(self) -> bool:
        return self.total and self.report.injective

    @property
    def match_equivalent(self) -> bool:
        return self.total and self.report.match_equivalent


def simulation_map(cts: CompiledTileSet, rho: TileSet) -> SimulationMap:
    codes = encode_colors(len(rho.colors), cts.layout.k)
    blocks = []
    for t in rho.tiles:
        letter = None
        if cts.machine.letters is not None:
            letter = int(t.label) if t.label is not None else 0
        sides = [codes[t.left], codes[t.right], codes[t.top], codes[t.bottom]]
        blocks.append(assemble_macrotile(cts, sides, letter))
    return SimulationMap(rho, cts.tileset, cts.N, tuple(blocks))


def simulate_check_compiled(cts: CompiledTileSet, rho: TileSet, window_tile_cap: int = 256) -> CompiledReport:
    try:
        sm = simulation_map(cts, rho)
    except (RejectedByProgram, TimeBudgetExceeded) as exc:
        return CompiledReport(False, None, f"S not total: {exc}")
    if len(cts.tileset.tiles) <= window_tile_cap:
        try:
            rep = check_simulation(sm, 2, node_cap=20_000)
            return CompiledReport(True, rep)
        except WindowSearchExploded:
            pass
    rep = check_simulation_partial(sm)
    return CompiledReport(True, rep, "window splitting skipped")


def check_simulation_partial(sm: SimulationMap) -> SimulationReport:
    """Conditions (1) and (2) only."""
    from .macro_sim import _match_equivalence

    injective = len({b.cells for b in sm.blocks}) == len(sm.blocks)
    return SimulationReport(injective, _match_equivalence(sm), None, 0, "skipped")


def fixed_point_program(pi: Mapping) -> str:
    """Self-referential program text; see :mod:`tileforge.fixed_point`."""
    from .fixed_point import fixed_point_program as build

    return build(pi)
