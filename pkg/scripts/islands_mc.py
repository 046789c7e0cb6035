"""Monte Carlo over fault sets: soundness and the rank at which cleaning stops."""

import argparse
from collections import Counter

from tileforge.islands import check_decomposition, clean, island_schedule, sample_bernoulli
from tileforge.wang_core import Region

ap = argparse.ArgumentParser()
ap.add_argument("--eps", type=float, default=0.0005)
ap.add_argument("--size", type=int, default=512)
ap.add_argument("--trials", type=int, default=50)
ap.add_argument("--seed", type=int, default=7)
ap.add_argument("--ranks", type=int, default=3)
a = ap.parse_args()

s = island_schedule(a.ranks)
win = Region(0, 0, a.size, a.size)
sound, ranks = 0, Counter()
for t in range(a.trials):
    E = sample_bernoulli(a.eps, win, a.seed + t)
    d = clean(E, s)
    sound += not check_decomposition(E, d)
    ranks[d.max_rank if d.cleaned else "residual"] += 1
print(f"sound {sound}/{a.trials}")
for r, c in sorted(ranks.items(), key=str):
    print(f"rank {r}: {c}")
