"""Islands and bi-islands of dirty sets, cleaning, schedules and Monte Carlo.

Distances are l-infinity throughout.  A set is an (alpha, beta)-island when its
diameter is at most alpha and no other dirty point lies within beta of it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .wang_core import Region, TilingError

Point = tuple[int, int]

CLEAN = "clean"  # the window holds every dirty point; outside is clean
WINDOWED = "windowed"  # outside is unknown; components near the border stay unclassified


class ExtendedRequiresBiIslands(TilingError):
    pass


class ComponentTooLarge(TilingError):
    pass


@dataclass(frozen=True)
class Schedule:
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    mode: str = "island"
    gamma: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.alpha) != len(self.beta):
            raise ValueError("alpha and beta must have equal length")
        if self.mode not in ("island", "bi"):
            raise ValueError("mode must be 'island' or 'bi'")
        if any(a > b for a, b in zip(self.alpha, self.beta)):
            raise ValueError("alpha_k <= beta_k is required")
        if self.gamma is not None and any(g < a for g, a in zip(self.gamma, self.alpha)):
            raise ValueError("gamma_k >= alpha_k is required")

    @property
    def K(self) -> int:
        return len(self.alpha)

    def truncate(self, K: int) -> "Schedule":
        g = self.gamma[:K] if self.gamma is not None else None
        return Schedule(self.alpha[:K], self.beta[:K], self.mode, g)


def island_schedule(K: int, alpha1: int = 1, factor: int = 8) -> Schedule:
    """alpha_1 = 1, beta_k = 2 alpha_k, alpha_n = factor * sum_{k<n} beta_k + 1."""
    alpha, beta = [alpha1], [2 * alpha1]
    for _ in range(K - 1):
        alpha.append(factor * sum(beta) + 1)
        beta.append(2 * alpha[-1])
    return Schedule(tuple(alpha), tuple(beta), "island" if factor == 8 else "bi")


def bi_island_schedule(K: int, Q: int = 16, c: float = 2.5) -> Schedule:
    """alpha_k = 26 L_{k-1}, beta_k = 2 L_k for the powers zoom schedule."""
    from .zoom_geometry import ZoomSchedule, zoom_values

    z = ZoomSchedule.powers(Q, c)
    L = [zoom_values(z, k)[1] for k in range(K + 1)]
    return Schedule(tuple(26 * L[k - 1] for k in range(1, K + 1)), tuple(2 * L[k] for k in range(1, K + 1)), "bi")


@dataclass(frozen=True)
class ScheduleReport:
    inequality: tuple[bool, ...]  # coef * sum_{k<n} beta_k < alpha_n <= beta_n
    growth_ratio: tuple[float, ...]  # log beta_{k+1} / log beta_k, for display
    growth_bound: int
    growth_below: tuple[bool, ...] = ()  # beta_{k+1} < beta_k ** bound, in integers


    @property
    def inequality_ok(self) -> bool:
        return all(self.inequality)

    @property
    def growth_ok(self) -> bool:
        # the first ratio is skipped: a finite prefix never affects convergence
        return all(self.growth_below[1:])

    @property
    def ok(self) -> bool:
        return self.inequality_ok and self.growth_ok


def validate_schedule(s: Schedule) -> ScheduleReport:
    coef, bound = (8, 2) if s.mode == "island" else (12, 3)
    ineq = []
    for n in range(s.K):
        ineq.append(coef * sum(s.beta[:n]) < s.alpha[n] <= s.beta[n])
    ratios, below = [], []
    for k in range(s.K - 1):
        lo, hi = s.beta[k], s.beta[k + 1]
        ratios.append(math.log(hi) / math.log(lo) if lo > 1 else math.inf)
        below.append(lo > 1 and hi < lo**bound)
    return ScheduleReport(tuple(ineq), tuple(ratios), bound, tuple(below))


# ---------------------------------------------------------------- geometry


def dist(p: Point, q: Point) -> int:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def diameter(pts: Iterable[Point]) -> int:
    pts = list(pts)
    if len(pts) < 2:
        return 0
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return max(max(xs) - min(xs), max(ys) - min(ys))


def set_dist(a: Iterable[Point], b: Iterable[Point]) -> int:
    b = list(b)
    return min(dist(p, q) for p in a for q in b)


def components(points: Sequence[Point], beta: int) -> list[list[Point]]:
    """Connected components under the link 'distance <= beta', via grid buckets."""
    pts = sorted(set(points))
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    size = max(beta, 1)
    buckets: dict = {}
    for i, (x, y) in enumerate(pts):
        buckets.setdefault((x // size, y // size), []).append(i)
    for (bx, by), members in buckets.items():
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                other = buckets.get((bx + dx, by + dy))
                if not other:
                    continue
                for i in members:
                    for j in other:
                        if i < j and dist(pts[i], pts[j]) <= beta:
                            ri, rj = find(i), find(j)
                            if ri != rj:
                                parent[max(ri, rj)] = min(ri, rj)
    groups: dict = {}
    for i in range(len(pts)):
        groups.setdefault(find(i), []).append(pts[i])
    return sorted(groups.values())


def find_split(pts: Sequence[Point], alpha: int, cap: int = 4096) -> tuple[list[Point], list[Point]] | None:
    """Split into two parts of diameter <= alpha, or None.

    Axis-threshold splits are tried first.  The exact fallback anchors an
    alpha x alpha box at the lower-left corner of the first part: any valid
    split has one, and the box never hurts the complement's diameter.
    """
    pts = sorted(pts)
    if diameter(pts) <= alpha:
        return list(pts), []
    for axis in (0, 1):
        order = sorted(pts, key=lambda p: (p[axis], p))
        for i in range(1, len(order)):
            if order[i][axis] == order[i - 1][axis]:
                continue
            a, b = order[:i], order[i:]
            if diameter(a) <= alpha and diameter(b) <= alpha:
                return a, b
    if len(pts) > cap:
        raise ComponentTooLarge(f"component of {len(pts)} points exceeds split cap {cap}")
    xs = sorted({p[0] for p in pts})
    ys = sorted({p[1] for p in pts})
    for x0 in xs:
        for y0 in ys:
            a = [p for p in pts if x0 <= p[0] <= x0 + alpha and y0 <= p[1] <= y0 + alpha]
            b = [p for p in pts if not (x0 <= p[0] <= x0 + alpha and y0 <= p[1] <= y0 + alpha)]
            if a and b and diameter(b) <= alpha:
                return a, b
    return None


# ---------------------------------------------------------------- decomposition


@dataclass(frozen=True)
class DirtySet:
    window: Region
    points: frozenset
    policy: str = CLEAN

    def __post_init__(self):
        if any(p not in self.window for p in self.points):
            raise ValueError("dirty points must lie inside the window")
        if self.policy not in (CLEAN, WINDOWED):
            raise ValueError(f"unknown boundary policy {self.policy!r}")

    def sorted_points(self) -> list[Point]:
        return sorted(self.points)

    def to_json(self) -> dict:
        r = self.window
        return {"window": [r.x0, r.y0, r.w, r.h], "points": [list(p) for p in self.sorted_points()]}

    @classmethod
    def from_json(cls, d: dict, policy: str = CLEAN) -> "DirtySet":
        r = Region(*d["window"])
        return cls(r, frozenset((int(x), int(y)) for x, y in d["points"]), policy)


@dataclass(frozen=True)
class Island:
    rank: int
    points: tuple[Point, ...]
    split: tuple[tuple[Point, ...], tuple[Point, ...]] | None = None

    @property
    def anchor(self) -> Point:
        """Center of the bounding box (rounded down)."""
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return (min(xs) + max(xs)) // 2, (min(ys) + max(ys)) // 2


@dataclass
class Decomposition:
    window: Region
    schedule: Schedule
    islands: list[list[Island]]  # islands[k-1] holds rank k
    residual: frozenset
    affected: list[np.ndarray]  # per rank, [y, x] masks of beta_k-neighborhoods
    flagged: list[tuple[int, tuple[Point, ...]]] = field(default_factory=list)
    levels: list[int] = field(default_factory=list)  # |E_k| for k = 0..K

    @property
    def cleaned(self) -> bool:
        return not self.residual

    @property
    def max_rank(self) -> int:
        ranks = [k + 1 for k, isl in enumerate(self.islands) if isl]
        return max(ranks) if ranks else 0


def _context_inside(comp: Sequence[Point], r: Region, beta: int) -> bool:
    xs = [p[0] for p in comp]
    ys = [p[1] for p in comp]
    return (
        min(xs) - beta >= r.x0
        and min(ys) - beta >= r.y0
        and max(xs) + beta < r.x0 + r.w
        and max(ys) + beta < r.y0 + r.h
    )


def find_rank_islands(E: DirtySet, alpha: int, beta: int, mode: str = "island", rank: int = 1):
    """Classify beta-linkage components; returns (islands, survivors, flagged)."""
    if alpha > beta:
        raise ValueError("alpha <= beta is required")
    islands, survivors, flagged = [], [], []
    for comp in components(list(E.points), beta):
        if E.policy == WINDOWED and not _context_inside(comp, E.window, beta):
            survivors.extend(comp)
            continue
        if mode == "island":
            if diameter(comp) <= alpha:
                islands.append(Island(rank, tuple(comp)))
            else:
                survivors.extend(comp)
            continue
        try:
            split = find_split(comp, alpha)
        except ComponentTooLarge:
            flagged.append(tuple(comp))
            survivors.extend(comp)
            continue
        if split is None:
            survivors.extend(comp)
        else:
            islands.append(Island(rank, tuple(comp), (tuple(split[0]), tuple(split[1]))))
    return islands, survivors, flagged


def _box_mask(r: Region, pts: Iterable[Point], rad: int, mask: np.ndarray) -> None:
    for x, y in pts:
        x0 = max(x - rad - r.x0, 0)
        x1 = min(x + rad - r.x0 + 1, r.w)
        y0 = max(y - rad - r.y0, 0)
        y1 = min(y + rad - r.y0 + 1, r.h)
        if x0 < x1 and y0 < y1:
            mask[y0:y1, x0:x1] = True


def _bbox_mask(r: Region, pts: Sequence[Point], rad: int, mask: np.ndarray) -> None:
    """Neighborhood of a set of small diameter, drawn point by point up to 64 points."""
    if len(pts) <= 64:
        _box_mask(r, pts, rad, mask)
        return
    for p in pts:
        _box_mask(r, [p], rad, mask)


def clean(E: DirtySet, s: Schedule) -> Decomposition:
    current = E
    all_islands, affected, flagged, levels = [], [], [], [len(E.points)]
    r = E.window
    for k in range(s.K):
        isl, surv, flag = find_rank_islands(current, s.alpha[k], s.beta[k], s.mode, rank=k + 1)
        mask = np.zeros((r.h, r.w), dtype=bool)
        for i in isl:
            _bbox_mask(r, i.points, s.beta[k], mask)
        all_islands.append(isl)
        affected.append(mask)
        flagged.extend((k + 1, f) for f in flag)
        current = DirtySet(r, frozenset(surv), E.policy)
        levels.append(len(surv))
    return Decomposition(r, s, all_islands, current.points, affected, flagged, levels)


def check_decomposition(E: DirtySet, d: Decomposition) -> list[str]:
    """Definitional soundness check, written without the component machinery."""
    errors = []
    s = d.schedule
    remaining = set(E.points)
    for k, isl in enumerate(d.islands):
        alpha, beta = s.alpha[k], s.beta[k]
        for a_i, I in enumerate(isl):
            X = set(I.points)
            if not X <= remaining:
                errors.append(f"rank {k + 1} island {a_i} uses points outside E_{k}")
            if I.split is None:
                if diameter(X) > alpha:
                    errors.append(f"rank {k + 1} island {a_i} has diameter {diameter(X)} > {alpha}")
            else:
                x0, x1 = set(I.split[0]), set(I.split[1])
                if x0 | x1 != X or x0 & x1:
                    errors.append(f"rank {k + 1} bi-island {a_i} split is not a partition")
                if diameter(x0) > alpha or diameter(x1) > alpha:
                    errors.append(f"rank {k + 1} bi-island {a_i} part diameter exceeds {alpha}")
                if x1 and set_dist(x0, x1) > beta:
                    errors.append(f"rank {k + 1} bi-island {a_i} parts are farther than {beta}")
            others = remaining - X
            for p in X:
                for q in others:
                    if dist(p, q) <= beta:
                        errors.append(f"rank {k + 1} island {a_i} is not {beta}-isolated: {p} ~ {q}")
                        break
        for a_i in range(len(isl)):
            for b_i in range(a_i + 1, len(isl)):
                if set_dist(isl[a_i].points, isl[b_i].points) <= beta:
                    errors.append(f"rank {k + 1} islands {a_i}, {b_i} are within {beta}")
        for I in isl:
            remaining -= set(I.points)
    if remaining != set(d.residual):
        errors.append("residual differs from E minus all islands")
    return errors


def neighborhoods_density(d: Decomposition, gammas: Sequence[int], extended: bool = False) -> Fraction:
    """Exact covered fraction of the window by gamma_k-neighborhoods of rank-k islands."""
    if extended and d.schedule.mode != "bi":
        raise ExtendedRequiresBiIslands("extended neighborhoods are defined for bi-islands")
    r = d.window
    mask = np.zeros((r.h, r.w), dtype=bool)
    for k, isl in enumerate(d.islands):
        g = gammas[k]
        for I in isl:
            if not extended:
                _bbox_mask(r, I.points, g, mask)
                continue
            # column x is covered between the lowest and highest cell within g of the set
            xs = [p[0] for p in I.points]
            for x in range(max(min(xs) - g, r.x0), min(max(xs) + g + 1, r.x0 + r.w)):
                near = [py for px, py in I.points if abs(px - x) <= g]
                y0 = max(min(near) - g - r.y0, 0)
                y1 = min(max(near) + g - r.y0 + 1, r.h)
                if y0 < y1:
                    mask[y0:y1, x - r.x0] = True
    return Fraction(int(mask.sum()), r.w * r.h)


def density_bound(s: Schedule, gammas: Sequence[int]) -> float:
    """4 * sum_k ((alpha_k + 2 gamma_k) / beta_k)^2."""
    return 4 * sum(((a + 2 * g) / b) ** 2 for a, b, g in zip(s.alpha, s.beta, gammas))


# ---------------------------------------------------------------- sampling


def sample_bernoulli(eps: float, window: Region, seed: int, policy: str = CLEAN) -> DirtySet:
    """Each cell is dirty independently with probability eps.

    Uses numpy's Philox counter-based bit generator keyed by the seed, so the
    stream does not depend on platform or thread count.
    """
    if not 0 <= eps <= 1:
        raise ValueError("eps must be in [0, 1]")
    rng = np.random.Generator(np.random.Philox(key=seed))
    u = rng.random((window.h, window.w))
    ys, xs = np.nonzero(u < eps)
    pts = frozenset(zip((xs + window.x0).tolist(), (ys + window.y0).tolist()))
    return DirtySet(window, pts, policy)


@dataclass(frozen=True)
class TrialStats:
    trial: int
    seed: int
    cleaned: bool
    max_rank: int
    survivors: int
    levels: tuple[int, ...]
    sound: bool


def run_trial(eps: float, s: Schedule, window: Region, trial: int, seed: int, policy: str = CLEAN) -> TrialStats:
    E = sample_bernoulli(eps, window, seed, policy)
    d = clean(E, s)
    sound = not check_decomposition(E, d)
    return TrialStats(trial, seed, d.cleaned, d.max_rank, len(d.residual), tuple(d.levels), sound)


@dataclass(frozen=True)
class MonteCarloStats:
    trials: tuple[TrialStats, ...]
    area: int

    @property
    def cleaned(self) -> int:
        return sum(t.cleaned for t in self.trials)

    def survival(self) -> list[float]:
        """Estimated P(x in E_k) for k = 0..K."""
        K = len(self.trials[0].levels)
        n = len(self.trials) * self.area
        return [sum(t.levels[k] for t in self.trials) / n for k in range(K)]

    def csv(self) -> str:
        lines = ["trial,seed,cleaned,max_rank,survivors"]
        for t in self.trials:
            lines.append(f"{t.trial},{t.seed},{int(t.cleaned)},{t.max_rank},{t.survivors}")
        return "\n".join(lines) + "\n"


def monte_carlo_sparsity(
    eps: float, s: Schedule, window: Region, trials: int, seed: int, jobs: int = 1, policy: str = CLEAN
) -> MonteCarloStats:
    """Trial t uses seed + t; results are gathered in trial order."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    args = [(eps, s, window, t, seed + t, policy) for t in range(trials)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            res = list(ex.map(lambda a: run_trial(*a), args))
    else:
        res = [run_trial(*a) for a in args]
    return MonteCarloStats(tuple(res), window.w * window.h)
