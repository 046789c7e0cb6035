"""Thue-Morse shift-mismatch sweep: print the fraction for every shift."""

import argparse

from tileforge.substitution import tm_mismatch_fractions

ap = argparse.ArgumentParser()
ap.add_argument("--size", type=int, default=4096)
ap.add_argument("--tmax", type=int, default=8)
a = ap.parse_args()

fr = tm_mismatch_fractions(a.size, a.tmax)
print("dx,dy,fraction")
for (dx, dy), f in sorted(fr.items()):
    print(f"{dx},{dy},{f:.6f}")
print(f"# min {min(fr.values()):.6f} max {max(fr.values()):.6f}")
