"""Compile the EQ1 checker at its smallest layout and list accepted side quadruples."""

import argparse
import itertools

from tileforge.tile_compiler import RejectedByProgram, assemble_macrotile, compile, eq1, plan_layout, smallest_feasible_N

ap = argparse.ArgumentParser()
ap.add_argument("--k", type=int, default=1)
a = ap.parse_args()

m = eq1()
n = smallest_feasible_N(m, a.k)
cts = compile(m, plan_layout(n, a.k, m))
print(f"N={n} k={a.k} tiles={len(cts.tileset.tiles)} colors={len(cts.tileset.colors)}")
for q in itertools.product(["".join(b) for b in itertools.product("01", repeat=a.k)], repeat=4):
    try:
        assemble_macrotile(cts, q)
        print("accepted", q)
    except RejectedByProgram:
        pass
