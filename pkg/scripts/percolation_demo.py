"""Damage a chessboard tiling at rate eps and repair it by percolation patching."""

import argparse

from tileforge.islands import island_schedule, sample_bernoulli
from tileforge.patcher import percolation_patch
from tileforge.wang_core import HOLE, PatchTiling, Region, check_patch, chessboard

ap = argparse.ArgumentParser()
ap.add_argument("--eps", type=float, default=0.001)
ap.add_argument("--size", type=int, default=512)
ap.add_argument("--seed", type=int, default=11)
a = ap.parse_args()

win = Region(0, 0, a.size, a.size)
E = sample_bernoulli(a.eps, win, a.seed)
t = PatchTiling(win, tuple(HOLE if p in E.points else 1 for p in win.cells()))
res = percolation_patch(E, t, island_schedule(4), chessboard())
print(res.stats_line())
print(f"violations after repair: {len(check_patch(res.tiling, chessboard()))}")
