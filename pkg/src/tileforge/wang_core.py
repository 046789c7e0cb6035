"""Wang tiles, tile sets, finite tilings and exhaustive search.

Orientation: x grows to the right, y grows upward.  Two tiles at (x, y) and
(x + 1, y) match when right(x, y) == left(x + 1, y); tiles at (x, y) and
(x, y + 1) match when top(x, y) == bottom(x, y + 1).
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

HOLE = -1

SIDES = ("left", "right", "top", "bottom")


class TilingError(Exception):
    """Base class for domain errors raised by the workbench."""


class MalformedSpec(TilingError):
    pass


class DuplicateTile(TilingError):
    pass


class ColorOutOfRange(TilingError):
    pass


class NoSolution(TilingError):
    pass


class UnknownName(TilingError):
    pass


@dataclass(frozen=True)
class Tile:
    left: int
    right: int
    top: int
    bottom: int
    label: str | None = None

    def side(self, name: str) -> int:
        return getattr(self, name)


@dataclass(frozen=True)
class TileSet:
    name: str
    colors: tuple[str, ...]
    tiles: tuple[Tile, ...]
    parts: tuple[str | None, ...] = ()

    def __post_init__(self):
        if self.parts and len(self.parts) != len(self.tiles):
            raise MalformedSpec("parts must have one entry per tile")

    def __len__(self) -> int:
        return len(self.tiles)

    def part(self, i: int) -> str | None:
        return self.parts[i] if self.parts else None

    def index_of(self, label: str) -> int:
        for i, t in enumerate(self.tiles):
            if t.label == label:
                return i
        raise KeyError(label)


@dataclass(frozen=True)
class Region:
    x0: int
    y0: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError("region must be at least 1x1")

    def __contains__(self, p) -> bool:
        x, y = p
        return self.x0 <= x < self.x0 + self.w and self.y0 <= y < self.y0 + self.h

    def cells(self) -> Iterator[tuple[int, int]]:
        for y in range(self.y0, self.y0 + self.h):
            for x in range(self.x0, self.x0 + self.w):
                yield x, y


@dataclass(frozen=True)
class PeriodVector:
    dx: int
    dy: int

    def __post_init__(self):
        if self.dx == 0 and self.dy == 0:
            raise ValueError("period vector must be nonzero")


@dataclass(frozen=True)
class PatchTiling:
    """Tile indices on a rectangle, row-major from the bottom-left corner."""

    region: Region
    cells: tuple[int, ...]

    def __post_init__(self):
        if len(self.cells) != self.region.w * self.region.h:
            raise MalformedSpec("cell count does not match region")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], x0: int = 0, y0: int = 0) -> "PatchTiling":
        """Build from rows listed bottom row first."""
        h, w = len(rows), len(rows[0])
        return cls(Region(x0, y0, w, h), tuple(int(v) for row in rows for v in row))

    @property
    def w(self) -> int:
        return self.region.w

    @property
    def h(self) -> int:
        return self.region.h

    def at(self, x: int, y: int) -> int:
        """Tile at absolute coordinates (x, y)."""
        r = self.region
        return self.cells[(y - r.y0) * r.w + (x - r.x0)]

    def local(self, i: int, j: int) -> int:
        return self.cells[j * self.region.w + i]

    def rows(self) -> list[list[int]]:
        w = self.region.w
        return [list(self.cells[j * w:(j + 1) * w]) for j in range(self.region.h)]

    def holes(self) -> set[tuple[int, int]]:
        return {p for p, v in zip(self.region.cells(), self.cells) if v == HOLE}

    def replace(self, updates: Mapping[tuple[int, int], int]) -> "PatchTiling":
        cells = list(self.cells)
        r = self.region
        for (x, y), v in updates.items():
            cells[(y - r.y0) * r.w + (x - r.x0)] = v
        return PatchTiling(r, tuple(cells))

    def sub(self, region: Region) -> "PatchTiling":
        return PatchTiling(region, tuple(self.at(x, y) for x, y in region.cells()))


@dataclass(frozen=True)
class Violation:
    cell: tuple[int, int]
    neighbor: tuple[int, int]
    side: str


@dataclass(frozen=True)
class Count:
    """Result of a counting search; ``at_least`` is set when the cap was hit."""

    value: int
    at_least: bool = False

    def __str__(self) -> str:
        return f">={self.value}" if self.at_least else str(self.value)


# ---------------------------------------------------------------- tile sets


def validate_tileset(spec: Mapping) -> TileSet:
    """Parse and normalize the JSON tile-set description."""
    try:
        name = str(spec["name"])
        colors = list(spec["colors"])
        raw_tiles = list(spec["tiles"])
    except (KeyError, TypeError) as exc:
        raise MalformedSpec(f"missing field: {exc}") from None
    if not raw_tiles:
        raise MalformedSpec("tile list is empty")
    quads, labels, parts = [], [], []
    for k, t in enumerate(raw_tiles):
        try:
            q = tuple(int(t[s]) for s in ("l", "r", "t", "b"))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedSpec(f"tile {k}: missing side {exc}") from None
        for c in q:
            if not 0 <= c < len(colors):
                raise ColorOutOfRange(f"tile {k} uses color {c} of {len(colors)}")
        quads.append(q)
        labels.append(t.get("label"))
        part = t.get("part")
        if part not in (None, "A", "B"):
            raise MalformedSpec(f"tile {k}: part must be 'A' or 'B'")
        parts.append(part)
    seen = set()
    for q, lab in zip(quads, labels):
        if (q, lab) in seen:
            raise DuplicateTile(f"duplicate tile {q} label={lab!r}")
        seen.add((q, lab))
    used = sorted({c for q in quads for c in q})
    remap = {c: i for i, c in enumerate(used)}
    tiles = tuple(
        Tile(remap[q[0]], remap[q[1]], remap[q[2]], remap[q[3]], lab)
        for q, lab in zip(quads, labels)
    )
    return TileSet(
        name,
        tuple(str(colors[c]) for c in used),
        tiles,
        tuple(parts) if any(p is not None for p in parts) else (),
    )


def tileset_to_json(ts: TileSet) -> dict:
    tiles = []
    for i, t in enumerate(ts.tiles):
        d = {"l": t.left, "r": t.right, "t": t.top, "b": t.bottom}
        if t.label is not None:
            d["label"] = t.label
        if ts.part(i) is not None:
            d["part"] = ts.part(i)
        tiles.append(d)
    return {"name": ts.name, "colors": list(ts.colors), "tiles": tiles}


def patch_to_json(p: PatchTiling) -> dict:
    r = p.region
    return {"x0": r.x0, "y0": r.y0, "w": r.w, "h": r.h, "cells": list(p.cells)}


def patch_from_json(d: Mapping) -> PatchTiling:
    try:
        region = Region(int(d["x0"]), int(d["y0"]), int(d["w"]), int(d["h"]))
        cells = tuple(int(v) for v in d["cells"])
    except (KeyError, TypeError) as exc:
        raise MalformedSpec(f"missing field: {exc}") from None
    return PatchTiling(region, cells)


def _hash_rgb(i: int) -> bytes:
    if i == HOLE:
        return b"\x00\x00\x00"
    return hashlib.sha256(f"tile:{i}".encode()).digest()[:3]


def render_ppm(p: PatchTiling, scale: int = 1) -> bytes:
    """P6 image of a patch; tile colors come from a fixed hash of the index."""
    w, h = p.w * scale, p.h * scale
    out = bytearray(f"P6\n{w} {h}\n255\n".encode())
    rows = p.rows()
    for j in reversed(range(p.h)):
        line = b"".join(_hash_rgb(v) * scale for v in rows[j])
        out += line * scale
    return bytes(out)


# ---------------------------------------------------------------- checking


def check_patch(t: PatchTiling, ts: TileSet) -> list[Violation]:
    """All mismatched edges between adjacent non-hole cells."""
    tiles = ts.tiles
    out = []
    r = t.region
    rows = t.rows()
    for j in range(r.h):
        for i in range(r.w):
            v = rows[j][i]
            if v == HOLE:
                continue
            here = (r.x0 + i, r.y0 + j)
            if i + 1 < r.w and rows[j][i + 1] != HOLE:
                if tiles[v].right != tiles[rows[j][i + 1]].left:
                    out.append(Violation(here, (here[0] + 1, here[1]), "right"))
            if j + 1 < r.h and rows[j + 1][i] != HOLE:
                if tiles[v].top != tiles[rows[j + 1][i]].bottom:
                    out.append(Violation(here, (here[0], here[1] + 1), "top"))
    return out


# ---------------------------------------------------------------- search


def _index(ts: TileSet) -> dict:
    idx: dict = {}
    for k, t in enumerate(ts.tiles):
        for key in ((t.left, t.bottom), (t.left, None), (None, t.bottom), (None, None)):
            idx.setdefault(key, []).append(k)
    return idx


def solve(
    ts: TileSet,
    w: int,
    h: int,
    boundary: Mapping[str, Sequence[int | None]] | None = None,
    holes: Iterable[tuple[int, int]] = (),
    fixed: Mapping[tuple[int, int], int] | None = None,
    wrap: bool = False,
) -> Iterator[list[int]]:
    """Yield every tiling of a w x h box in canonical (lexicographic) order.

    Coordinates are local (0..w-1, 0..h-1).  ``boundary`` maps a side name to
    the required outward colors along it (None = free), listed bottom-to-top
    for left/right and left-to-right for top/bottom.  ``wrap`` imposes torus
    matching.  Solutions are flat row-major lists with HOLE at holes.
    """
    boundary = boundary or {}
    fixed = dict(fixed or {})
    holes = set(holes)
    tiles = ts.tiles
    idx = _index(ts)
    left_b = boundary.get("left")
    right_b = boundary.get("right")
    bottom_b = boundary.get("bottom")
    top_b = boundary.get("top")
    order = [j * w + i for j in range(h) for i in range(w) if (i, j) not in holes]
    cells = [HOLE] * (w * h)
    if not order:
        yield list(cells)
        return

    def candidates(pos: int) -> list[int]:
        i, j = pos % w, pos // w
        lc = None
        if i > 0:
            nb = cells[pos - 1]
            if nb != HOLE:
                lc = tiles[nb].right
        elif left_b is not None:
            lc = left_b[j]
        bc = None
        if j > 0:
            nb = cells[pos - w]
            if nb != HOLE:
                bc = tiles[nb].top
        elif bottom_b is not None:
            bc = bottom_b[i]
        cand = idx.get((lc, bc), [])
        if (i, j) in fixed:
            f = fixed[(i, j)]
            cand = [f] if f in cand else []
        # self_r / self_t: a 1-wide torus must match itself across the seam
        rc = tc = None
        self_r = self_t = False
        if i == w - 1:
            if not wrap:
                rc = right_b[j] if right_b is not None else None
            elif w == 1:
                self_r = True
            elif cells[pos - (w - 1)] != HOLE:
                rc = tiles[cells[pos - (w - 1)]].left
        if j == h - 1:
            if not wrap:
                tc = top_b[i] if top_b is not None else None
            elif h == 1:
                self_t = True
            elif cells[i] != HOLE:
                tc = tiles[cells[i]].bottom
        if rc is None and tc is None and not (self_r or self_t):
            return cand
        out = []
        for k in cand:
            t = tiles[k]
            if rc is not None and t.right != rc:
                continue
            if tc is not None and t.top != tc:
                continue
            if self_r and t.right != t.left:
                continue
            if self_t and t.top != t.bottom:
                continue
            out.append(k)
        return out

    n = len(order)
    stack: list[tuple[list[int], int]] = [(candidates(order[0]), 0)]
    while stack:
        cand, ptr = stack[-1]
        d = len(stack) - 1
        if ptr >= len(cand):
            stack.pop()
            cells[order[d]] = HOLE
            continue
        stack[-1] = (cand, ptr + 1)
        cells[order[d]] = cand[ptr]
        if d + 1 == n:
            yield list(cells)
            continue
        stack.append((candidates(order[d + 1]), 0))


def _boundary_local(r: Region, boundary):
    if boundary is None:
        return None
    out = {}
    for side, seq in boundary.items():
        n = r.h if side in ("left", "right") else r.w
        if len(seq) != n:
            raise ValueError(f"boundary {side} needs {n} entries")
        out[side] = list(seq)
    return out


def fill_region(
    ts: TileSet,
    r: Region,
    boundary: Mapping[str, Sequence[int | None]] | None = None,
    holes: Iterable[tuple[int, int]] = (),
    mode: str = "first",
    cap: int = 10**6,
    fixed: Mapping[tuple[int, int], int] | None = None,
):
    """Backtracking fill of a region.

    ``holes`` and ``fixed`` use absolute coordinates.  Mode ``first`` returns a
    PatchTiling (or raises NoSolution), ``count`` returns a Count, and
    ``enumerate`` returns a list of at most ``cap`` PatchTilings.
    """
    if mode not in ("first", "count", "enumerate"):
        raise ValueError(f"unknown mode {mode!r}")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    loc_holes = {(x - r.x0, y - r.y0) for x, y in holes if (x, y) in r}
    loc_fixed = {(x - r.x0, y - r.y0): v for (x, y), v in (fixed or {}).items() if (x, y) in r}
    gen = solve(ts, r.w, r.h, _boundary_local(r, boundary), loc_holes, loc_fixed)
    if mode == "first":
        for sol in gen:
            return PatchTiling(r, tuple(sol))
        raise NoSolution(f"no tiling of {r.w}x{r.h} for {ts.name}")
    if mode == "count":
        n = 0
        for _ in gen:
            n += 1
            if n >= cap:
                return Count(n, True)
        return Count(n)
    return [PatchTiling(r, tuple(sol)) for sol in itertools.islice(gen, cap)]


def torus_tiling(ts: TileSet, m: int) -> PatchTiling:
    """An m x m patch whose opposite borders match (periods (m,0), (0,m))."""
    if m < 1:
        raise ValueError("m must be >= 1")
    for sol in solve(ts, m, m, wrap=True):
        return PatchTiling(Region(0, 0, m, m), tuple(sol))
    raise NoSolution(f"{ts.name} has no torus tiling of size {m}")


def min_torus_period(ts: TileSet, m_max: int) -> int | None:
    for m in range(1, m_max + 1):
        try:
            torus_tiling(ts, m)
        except NoSolution:
            continue
        return m
    return None


def unroll(torus: PatchTiling, w: int, h: int) -> PatchTiling:
    """Repeat a torus patch periodically over a w x h box."""
    m_w, m_h = torus.w, torus.h
    cells = tuple(torus.local(i % m_w, j % m_h) for j in range(h) for i in range(w))
    return PatchTiling(Region(0, 0, w, h), cells)


def density_bounds(ts: TileSet, n: int) -> tuple[Fraction, Fraction]:
    """Exact min and max fraction of A-tiles over all n x n tilings."""
    if not ts.parts or any(p not in ("A", "B") for p in ts.parts):
        raise MalformedSpec("every tile must be tagged A or B")
    is_a = [p == "A" for p in ts.parts]
    lo = hi = None
    for sol in solve(ts, n, n):
        a = sum(is_a[v] for v in sol)
        lo = a if lo is None else min(lo, a)
        hi = a if hi is None else max(hi, a)
    if lo is None:
        raise NoSolution(f"no {n}x{n} tiling")
    return Fraction(lo, n * n), Fraction(hi, n * n)


# ---------------------------------------------------------------- builtins


def chessboard() -> TileSet:
    return TileSet(
        "chessboard",
        ("black", "white"),
        (Tile(0, 0, 0, 0, "black"), Tile(1, 1, 1, 1, "white")),
        ("A", "B"),
    )


def example1() -> TileSet:
    return TileSet("example1", ("white",), (Tile(0, 0, 0, 0, "white"),))


def _coordinate_tiles(n: int) -> tuple[tuple[str, ...], tuple[Tile, ...]]:
    colors = tuple(f"({i},{j})" for i in range(n) for j in range(n))
    tiles = []
    for i in range(n):
        for j in range(n):
            tiles.append(
                Tile(i * n + j, ((i + 1) % n) * n + j, i * n + (j + 1) % n, i * n + j, f"({i},{j})")
            )
    return colors, tuple(tiles)


def example2(n: int) -> TileSet:
    """N^2 coordinate tiles; tile (i, j) has left/bottom color (i, j)."""
    if n < 2:
        raise ValueError("N must be >= 2")
    colors, tiles = _coordinate_tiles(n)
    parts = tuple("A" if k == 0 else "B" for k in range(n * n))
    return TileSet(f"example2({n})", colors, tiles, parts)


def thue_morse_block(n: int) -> TileSet:
    """Coordinate tiles mod N whose labels carry the 2D Thue-Morse letter.

    Part A marks letter 1, so density experiments measure the share of ones.
    """
    if n < 2 or n & (n - 1):
        raise ValueError("N must be a power of two >= 2")
    colors, tiles = _coordinate_tiles(n)
    letters = [(bin(i).count("1") + bin(j).count("1")) % 2 for i in range(n) for j in range(n)]
    tiles = tuple(
        Tile(t.left, t.right, t.top, t.bottom, f"{t.label}:{b}") for t, b in zip(tiles, letters)
    )
    parts = tuple("A" if b else "B" for b in letters)
    return TileSet(f"thue_morse_block({n})", colors, tiles, parts)


def builtin(name: str) -> TileSet:
    """Look up a bundled tile set, e.g. 'chessboard' or 'example2(4)'."""
    name = name.strip().replace(" ", "")
    if name == "chessboard":
        return chessboard()
    if name == "example1":
        return example1()
    for prefix, fn in (("example2", example2), ("thue_morse_block", thue_morse_block)):
        if name.startswith(prefix + "(") and name.endswith(")"):
            try:
                return fn(int(name[len(prefix) + 1:-1]))
            except ValueError as exc:
                raise UnknownName(f"{name}: {exc}") from None
    raise UnknownName(name)
