"""Macro-tiles, macro-colors and finite-window checks of the simulation relation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .wang_core import (
    PatchTiling,
    Region,
    TileSet,
    TilingError,
    check_patch,
    solve,
    tileset_to_json,
    validate_tileset,
)


class WindowSearchExploded(TilingError):
    pass


class MacroTileInvalid(TilingError):
    pass


@dataclass(frozen=True)
class MacroTile:
    N: int
    cells: tuple[int, ...]
    tileset: TileSet = field(compare=False, repr=False)

    def __post_init__(self):
        if len(self.cells) != self.N * self.N:
            raise MacroTileInvalid("body must have N*N cells")

    @property
    def body(self) -> PatchTiling:
        return PatchTiling(Region(0, 0, self.N, self.N), self.cells)

    def at(self, i: int, j: int) -> int:
        return self.cells[j * self.N + i]


def make_macrotile(body: PatchTiling, ts: TileSet) -> MacroTile:
    if body.w != body.h:
        raise MacroTileInvalid("macro-tile must be square")
    if check_patch(body, ts):
        raise MacroTileInvalid("macro-tile body has color conflicts")
    return MacroTile(body.w, body.cells, ts)


def macro_colors(mt: MacroTile) -> tuple[tuple[int, ...], ...]:
    """(left, right, top, bottom); vertical sides bottom-to-top, horizontal left-to-right."""
    t = mt.tileset.tiles
    n = mt.N
    left = tuple(t[mt.at(0, j)].left for j in range(n))
    right = tuple(t[mt.at(n - 1, j)].right for j in range(n))
    top = tuple(t[mt.at(i, n - 1)].top for i in range(n))
    bottom = tuple(t[mt.at(i, 0)].bottom for i in range(n))
    return left, right, top, bottom


@dataclass(frozen=True)
class SimulationMap:
    rho: TileSet
    tau: TileSet
    N: int
    blocks: tuple[MacroTile, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.rho.tiles):
            raise MacroTileInvalid("simulation map must be total on rho")


@dataclass(frozen=True)
class SimulationReport:
    injective: bool
    match_equivalent: bool
    unique_splitting: bool | None  # None when the window check was skipped
    tilings_checked: int = 0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.injective and self.match_equivalent and bool(self.unique_splitting)


def _match_equivalence(sm: SimulationMap) -> bool:
    colors = [macro_colors(b) for b in sm.blocks]
    rho = sm.rho.tiles
    for a, b in itertools.product(range(len(rho)), repeat=2):
        if (rho[a].right == rho[b].left) != (colors[a][1] == colors[b][0]):
            return False
        if (rho[a].top == rho[b].bottom) != (colors[a][2] == colors[b][3]):
            return False
    return True


def block_offsets(sm: SimulationMap, cells: list[int], size: int) -> list[tuple[int, int]]:
    """Grid offsets for which every fully contained N x N block is in the map's range."""
    n = sm.N
    rng = {b.cells for b in sm.blocks}
    out = []
    for ox, oy in itertools.product(range(n), repeat=2):
        ok = True
        for by in range(oy, size - n + 1, n):
            for bx in range(ox, size - n + 1, n):
                blk = tuple(cells[(by + j) * size + bx + i] for j in range(n) for i in range(n))
                if blk not in rng:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append((ox, oy))
    return out


def check_simulation(sm: SimulationMap, window: int = 2, node_cap: int = 100_000) -> SimulationReport:
    """Injectivity, match equivalence and unique splitting on (k N)^2 windows."""
    if window < 2:
        raise ValueError("window must be >= 2")
    injective = len({b.cells for b in sm.blocks}) == len(sm.blocks)
    match_eq = _match_equivalence(sm)
    size = window * sm.N
    count = 0
    unique = True
    detail = ""
    for sol in solve(sm.tau, size, size):
        count += 1
        if count > node_cap:
            raise WindowSearchExploded(f"more than {node_cap} window tilings")
        offs = block_offsets(sm, sol, size)
        if len(offs) != 1:
            unique = False
            detail = f"window tiling #{count} admits offsets {offs}"
            break
    return SimulationReport(injective, match_eq, unique, count, detail)


def enumerate_macrotiles(ts: TileSet, N: int, cap: int = 10_000) -> tuple[list[MacroTile], bool]:
    """All valid N x N blocks in canonical order; the flag reports a hit cap."""
    if N < 1:
        raise ValueError("N must be >= 1")
    out = []
    for sol in solve(ts, N, N):
        if len(out) >= cap:
            return out, True
        out.append(MacroTile(N, tuple(sol), ts))
    return out, False


def lift(sm: SimulationMap, rho_patch: PatchTiling) -> PatchTiling:
    """Replace each rho tile by its macro-tile body."""
    n = sm.N
    w, h = rho_patch.w * n, rho_patch.h * n
    cells = [0] * (w * h)
    for bj in range(rho_patch.h):
        for bi in range(rho_patch.w):
            blk = sm.blocks[rho_patch.local(bi, bj)]
            for j in range(n):
                row = (bj * n + j) * w + bi * n
                cells[row:row + n] = blk.cells[j * n:(j + 1) * n]
    r = rho_patch.region
    return PatchTiling(Region(r.x0 * n, r.y0 * n, w, h), tuple(cells))


def project(sm: SimulationMap, tau_patch: PatchTiling, offset: tuple[int, int] = (0, 0)) -> PatchTiling:
    """Recognize blocks by exact body equality and read back the rho tiles."""
    n = sm.N
    ox, oy = offset
    lookup = {b.cells: k for k, b in enumerate(sm.blocks)}
    bw, bh = (tau_patch.w - ox) // n, (tau_patch.h - oy) // n
    out = []
    for bj in range(bh):
        for bi in range(bw):
            blk = tuple(
                tau_patch.local(ox + bi * n + i, oy + bj * n + j) for j in range(n) for i in range(n)
            )
            if blk not in lookup:
                raise MacroTileInvalid(f"block ({bi},{bj}) is not in the range of the map")
            out.append(lookup[blk])
    return PatchTiling(Region(0, 0, bw, bh), tuple(out))


def example2_map(n: int) -> SimulationMap:
    """Example 2: the single rho tile goes to the canonical coordinate block."""
    from .wang_core import Tile, example2

    tau = example2(n)
    rho = TileSet("single", ("c",), (Tile(0, 0, 0, 0, "x"),))
    block = tuple(i * n + j for j in range(n) for i in range(n))
    return SimulationMap(rho, tau, n, (MacroTile(n, block, tau),))


def example1_map(n: int) -> SimulationMap:
    from .wang_core import example1

    tau = example1()
    rho = example1()
    return SimulationMap(rho, tau, n, (MacroTile(n, (0,) * (n * n), tau),))


def simulation_to_json(sm: SimulationMap) -> dict:
    return {
        "rho": tileset_to_json(sm.rho),
        "tau": tileset_to_json(sm.tau),
        "N": sm.N,
        "map": [list(b.cells) for b in sm.blocks],
    }


def simulation_from_json(d: dict) -> SimulationMap:
    rho = validate_tileset(d["rho"])
    tau = validate_tileset(d["tau"])
    n = int(d["N"])
    blocks = tuple(make_macrotile(PatchTiling(Region(0, 0, n, n), tuple(c)), tau) for c in d["map"])
    return SimulationMap(rho, tau, n, blocks)
