"""Robustified tile sets, hole filling and rank-by-rank repair of sparse damage."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .islands import DirtySet, Island, Schedule, clean
from .wang_core import (
    HOLE,
    PatchTiling,
    Region,
    Tile,
    TileSet,
    TilingError,
    check_patch,
    fill_region,
    solve,
)


class NoWindows(TilingError):
    pass


class NoExtension(TilingError):
    pass


class ContextDamaged(TilingError):
    pass


class ResidualErrors(TilingError):
    pass


class SearchCap(TilingError):
    pass


@dataclass(frozen=True)
class RobustifiedSet:
    base: TileSet
    r: int
    tileset: TileSet
    windows: tuple[tuple[int, ...], ...]  # per derived tile, (2r+1)^2 base cells row-major
    c1: int = 2
    c2: int = 3

    @property
    def side(self) -> int:
        return 2 * self.r + 1

    def delta(self, k: int) -> int:
        """Base tile at the window center."""
        s = self.side
        return self.windows[k][self.r * s + self.r]

    def project(self, t: PatchTiling) -> PatchTiling:
        return PatchTiling(t.region, tuple(HOLE if v == HOLE else self.delta(v) for v in t.cells))


def robustify(mu: TileSet, r: int = 2, cap: int = 100_000) -> RobustifiedSet:
    """Tiles are the valid (2r+1)^2 windows of mu; sides carry the shared overlap."""
    if r < 0:
        raise ValueError("r must be >= 0")
    s = 2 * r + 1
    wins = []
    for sol in solve(mu, s, s):
        wins.append(tuple(sol))
        if len(wins) > cap:
            raise SearchCap(f"more than {cap} windows")
    if not wins:
        raise NoWindows(f"{mu.name} has no {s}x{s} tiling")

    def cols(w, lo, hi):
        return tuple(w[j * s + i] for j in range(s) for i in range(lo, hi))

    def rows(w, lo, hi):
        return tuple(w[j * s + i] for j in range(lo, hi) for i in range(s))

    sides = []
    for w in wins:
        sides.append(
            (
                ("h",) + cols(w, 0, s - 1),
                ("h",) + cols(w, 1, s),
                ("v",) + rows(w, 1, s),
                ("v",) + rows(w, 0, s - 1),
            )
        )
    names = sorted({c for sd in sides for c in sd})
    ids = {c: i for i, c in enumerate(names)}
    tiles = tuple(
        Tile(ids[sd[0]], ids[sd[1]], ids[sd[2]], ids[sd[3]], f"w{k}") for k, sd in enumerate(sides)
    )
    center = r * s + r
    parts = tuple(mu.part(w[center]) for w in wins) if mu.parts else ()
    ts = TileSet(f"robust({mu.name},{r})", tuple(repr(c) for c in names), tiles, parts)
    return RobustifiedSet(mu, r, ts, tuple(wins))


def induced_tiling(rs: RobustifiedSet, t: PatchTiling) -> PatchTiling:
    """Inner window of a hole-free base tiling read as derived tiles."""
    r, s = rs.r, rs.side
    lookup = {w: k for k, w in enumerate(rs.windows)}
    w, h = t.w - 2 * r, t.h - 2 * r
    if w < 1 or h < 1:
        raise ValueError("tiling too small for the window radius")
    cells = []
    for j in range(h):
        for i in range(w):
            win = tuple(t.local(i + a, j + b) for b in range(s) for a in range(s))
            cells.append(lookup[win])
    rg = t.region
    return PatchTiling(Region(rg.x0 + r, rg.y0 + r, w, h), tuple(cells))


def hole_extension_check(ts: TileSet, outer: int = 5, hole: int = 3, cap: int = 100_000) -> bool:
    """True iff every tiling of the outer square minus the centered hole extends in exactly one way."""
    if hole > outer or (outer - hole) % 2:
        raise ValueError("hole must be centered inside the outer square")
    m = (outer - hole) // 2
    inner = {(i, j) for i in range(m, m + hole) for j in range(m, m + hole)}
    seen = 0
    for sol in solve(ts, outer, outer, holes=inner):
        seen += 1
        if seen > cap:
            raise SearchCap(f"more than {cap} annulus tilings")
        fixed = {(i, j): sol[j * outer + i] for j in range(outer) for i in range(outer) if (i, j) not in inner}
        n = 0
        for _ in solve(ts, outer, outer, fixed=fixed):
            n += 1
            if n > 1:
                return False
        if n != 1:
            return False
    return True


def check_r_robust(rs: RobustifiedSet, cap: int = 100_000) -> bool:
    return hole_extension_check(rs.tileset, 5, 3, cap)


# ---------------------------------------------------------------- holes


@dataclass(frozen=True)
class HoleSpec:
    holes: tuple[Region, ...]
    c1: int = 2
    c2: int = 3

    def __post_init__(self):
        if not 1 <= len(self.holes) <= 2:
            raise ValueError("one or two holes")
        if not self.c1 < self.c2:
            raise ValueError("c1 < c2 is required")


def hole_diameter(h: Region) -> int:
    return max(h.w, h.h)


def neighborhood(h: Region, c: int) -> Region:
    """Concentric box of side about c * diameter around the hole."""
    m = math.ceil((c - 1) * hole_diameter(h) / 2)
    return Region(h.x0 - m, h.y0 - m, h.w + 2 * m, h.h + 2 * m)


def _clip(a: Region, b: Region) -> Region | None:
    x0, y0 = max(a.x0, b.x0), max(a.y0, b.y0)
    x1, y1 = min(a.x0 + a.w, b.x0 + b.w), min(a.y0 + a.h, b.y0 + b.h)
    if x0 >= x1 or y0 >= y1:
        return None
    return Region(x0, y0, x1 - x0, y1 - y0)


def _bbox(a: Region, b: Region) -> Region:
    x0, y0 = min(a.x0, b.x0), min(a.y0, b.y0)
    x1, y1 = max(a.x0 + a.w, b.x0 + b.w), max(a.y0 + a.h, b.y0 + b.h)
    return Region(x0, y0, x1 - x0, y1 - y0)


def _gap(a: Region, b: Region) -> int:
    dx = max(b.x0 - (a.x0 + a.w - 1), a.x0 - (b.x0 + b.w - 1), 0)
    dy = max(b.y0 - (a.y0 + a.h - 1), a.y0 - (b.y0 + b.h - 1), 0)
    return max(dx, dy)


def _boundary(t: PatchTiling, ts: TileSet, box: Region) -> dict:
    """Colors the cells just outside ``box`` impose on it (None where absent)."""
    tiles = ts.tiles

    def get(x, y):
        if (x, y) not in t.region:
            return None
        v = t.at(x, y)
        return None if v == HOLE else v

    def col(v, side):
        return None if v is None else getattr(tiles[v], side)

    ys = range(box.y0, box.y0 + box.h)
    xs = range(box.x0, box.x0 + box.w)
    return {
        "left": [col(get(box.x0 - 1, y), "right") for y in ys],
        "right": [col(get(box.x0 + box.w, y), "left") for y in ys],
        "bottom": [col(get(x, box.y0 - 1), "top") for x in xs],
        "top": [col(get(x, box.y0 + box.h), "bottom") for x in xs],
    }


def diff_mask(a: PatchTiling, b: PatchTiling) -> set:
    if a.region != b.region:
        raise ValueError("regions differ")
    return {(a.region.x0 + k % a.w, a.region.y0 + k // a.w) for k, (u, v) in enumerate(zip(a.cells, b.cells)) if u != v}


def _fill_one(t: PatchTiling, ts: TileSet, hole: Region, c1: int, c2: int) -> PatchTiling:
    ctx = _clip(neighborhood(hole, c2), t.region)
    sub = t.sub(ctx)
    stray = [(x, y) for (x, y) in sub.holes() if (x, y) not in hole]
    if stray:
        raise ContextDamaged(f"context of {hole} has holes at {sorted(stray)[:4]}")
    if check_patch(sub, ts):
        raise ContextDamaged(f"context of {hole} has color conflicts")
    limit = neighborhood(hole, c1)
    m_max = math.ceil((c1 - 1) * hole_diameter(hole) / 2)
    for m in range(m_max + 1):
        box = _clip(Region(hole.x0 - m, hole.y0 - m, hole.w + 2 * m, hole.h + 2 * m), t.region)
        try:
            filled = fill_region(ts, box, _boundary(t, ts, box))
        except TilingError:
            continue
        updates = {(x, y): filled.at(x, y) for x, y in box.cells()}
        out = t.replace(updates)
        changed = diff_mask(t, out)
        assert all(p in limit for p in changed), "fill escaped its neighborhood"
        return out
    raise NoExtension(f"hole {hole} cannot be filled within its {c1}-neighborhood")


def fill_hole(t: PatchTiling, ts: TileSet, spec: HoleSpec) -> PatchTiling:
    holes = list(spec.holes)
    if len(holes) == 2:
        a, b = holes
        if _gap(a, b) <= spec.c2 * max(hole_diameter(a), hole_diameter(b)):
            holes = [_bbox(a, b)]
    for h in holes:
        t = _fill_one(t, ts, h, spec.c1, spec.c2)
    return t


# ---------------------------------------------------------------- sparse damage


@dataclass(frozen=True)
class PatchResult:
    tiling: PatchTiling
    changed: np.ndarray  # [y, x] cells whose tile differs from the input
    touched: np.ndarray  # [y, x] union of rewritten squares
    max_rank: int

    @property
    def changed_fraction(self) -> float:
        return float(self.changed.mean()) if self.changed.size else 0.0

    def stats_line(self) -> str:
        return f"changed_fraction={self.changed_fraction:.6f} max_rank={self.max_rank}"


def _grid(t: PatchTiling) -> np.ndarray:
    return np.asarray(t.cells, dtype=np.int64).reshape(t.h, t.w)


def _ring_majority(g: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> int:
    """Most frequent non-hole value on the ring just outside [x0, x1) x [y0, y1); ties go to the smaller value."""
    h, w = g.shape
    vals = []
    for x in range(x0 - 1, x1 + 1):
        for y in (y0 - 1, y1):
            if 0 <= x < w and 0 <= y < h:
                vals.append(g[y, x])
    for y in range(y0, y1):
        for x in (x0 - 1, x1):
            if 0 <= x < w and 0 <= y < h:
                vals.append(g[y, x])
    vals = [v for v in vals if v != HOLE]
    if not vals:
        return 0
    u, c = np.unique(vals, return_counts=True)
    return int(u[np.argmax(c)])


def percolation_patch(E: DirtySet, t: PatchTiling, s: Schedule, ts: TileSet | None = None) -> PatchResult:
    """Repaint a square of radius gamma_k around each island, rank by rank, with the ring majority."""
    if t.region != E.window:
        raise ValueError("tiling and dirty set must share a window")
    d = clean(E, s)
    if not d.cleaned:
        raise ResidualErrors(f"{len(d.residual)} dirty cells survive every rank")
    gammas = s.gamma or tuple(2 * a for a in s.alpha)
    g = _grid(t)
    before = g.copy()
    touched = np.zeros_like(g, dtype=bool)
    r = t.region
    for k, isl in enumerate(d.islands):
        for island in isl:
            ax, ay = island.anchor
            ax, ay = ax - r.x0, ay - r.y0
            gm = gammas[k]
            x0, y0 = max(ax - gm, 0), max(ay - gm, 0)
            x1, y1 = min(ax + gm + 1, r.w), min(ay + gm + 1, r.h)
            g[y0:y1, x0:x1] = _ring_majority(g, x0, y0, x1, y1)
            touched[y0:y1, x0:x1] = True
    out = PatchTiling(r, tuple(int(v) for v in g.ravel()))
    if ts is not None and check_patch(out, ts):
        raise ResidualErrors("repainted tiling still has color conflicts")
    return PatchResult(out, g != before, touched, d.max_rank)


def correct_errors(t: PatchTiling, s: Schedule, rs: RobustifiedSet, E: DirtySet | None = None) -> PatchTiling:
    """Fill each island's bounding box with fill_hole, lowest rank first."""
    if E is None:
        E = DirtySet(t.region, frozenset(t.holes()))
    bad = [k for k in range(s.K) if not s.beta[k] > 4 * rs.c2 * s.alpha[k]]
    if bad:
        raise ValueError(f"beta_k > 4 c2 alpha_k fails at ranks {[k + 1 for k in bad]}")
    d = clean(E, s)
    if not d.cleaned:
        raise ResidualErrors(f"{len(d.residual)} dirty cells survive every rank")
    ts = rs.tileset
    for k, isl in enumerate(d.islands):
        for i, island in enumerate(isl):
            box = _island_box(island)
            sub = t.sub(_clip(neighborhood(box, rs.c1), t.region))
            if not sub.holes() and not check_patch(sub, ts):
                continue
            # cells of the box that are not holes but clash are cleared so the fill can repair them
            try:
                before = t
                t = _fill_one(_clear(t, box), ts, box, rs.c1, rs.c2)
            except NoExtension as exc:
                raise NoExtension(f"rank {k + 1} island {i}: {exc}") from None
            radius = 2 * rs.c1 * s.alpha[k]
            for x, y in diff_mask(before, t):
                if min(max(abs(x - px), abs(y - py)) for px, py in island.points) > radius:
                    raise AssertionError(f"change at {(x, y)} outside the {radius}-neighborhood")
    return t


def _island_box(island: Island) -> Region:
    xs = [p[0] for p in island.points]
    ys = [p[1] for p in island.points]
    return Region(min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1)


def _clear(t: PatchTiling, box: Region) -> PatchTiling:
    box = _clip(box, t.region)
    return t.replace({p: HOLE for p in box.cells()})
