"""Substitution rules, Thue-Morse words and patterns, aperiodicity measurement."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .wang_core import PeriodVector, Region, TilingError


class LetterNotInAlphabet(TilingError):
    pass


class SizeCap(TilingError):
    pass


class OutOfDomain(TilingError):
    pass


class SearchCap(TilingError):
    pass


@dataclass(frozen=True)
class SubstitutionRule:
    """Letters are the integers 0..len(alphabet)-1; ``alphabet`` holds display names.

    ``table[a]`` is an m x m matrix indexed [row][col] with row 0 at the bottom.
    """

    alphabet: tuple
    m: int
    table: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be >= 2")
        if len(self.table) != len(self.alphabet):
            raise ValueError("table must be total on the alphabet")
        for mat in self.table:
            if len(mat) != self.m or any(len(r) != self.m for r in mat):
                raise ValueError("each image must be m x m")
            for r in mat:
                for v in r:
                    if not 0 <= v < len(self.alphabet):
                        raise LetterNotInAlphabet(v)

    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    def compose(self, other: "SubstitutionRule") -> "SubstitutionRule":
        """The rule a -> self(other(a))."""
        tab = tuple(
            tuple(tuple(int(v) for v in row) for row in apply(self, LetterPattern(np.array(other.table[a]))).cells)
            for a in range(len(other.alphabet))
        )
        return SubstitutionRule(self.alphabet, self.m * other.m, tab)


@dataclass(frozen=True, eq=False)
class LetterPattern:
    cells: np.ndarray  # [row, col] = [y, x]
    anchor: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.cells.ndim != 2 or self.cells.size == 0:
            raise ValueError("pattern must be a nonempty 2D array")

    def __eq__(self, other) -> bool:
        return isinstance(other, LetterPattern) and np.array_equal(self.cells, other.cells)

    __hash__ = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    def tolist(self) -> list[list[int]]:
        return self.cells.tolist()


def thue_morse_rule() -> SubstitutionRule:
    return SubstitutionRule((0, 1), 2, (((0, 1), (1, 0)), ((1, 0), (0, 1))))


def chessboard_rule() -> SubstitutionRule:
    """Both letters map to the same 2 x 2 chessboard block."""
    return SubstitutionRule((0, 1), 2, (((0, 1), (1, 0)), ((0, 1), (1, 0))))


def rule_from_json(d: Mapping) -> SubstitutionRule:
    alphabet = tuple(d["alphabet"])
    pos = {str(a): i for i, a in enumerate(alphabet)}
    table = [None] * len(alphabet)
    for key, mat in d["table"].items():
        if str(key) not in pos:
            raise LetterNotInAlphabet(key)
        try:
            table[pos[str(key)]] = tuple(tuple(pos[str(v)] for v in row) for row in mat)
        except KeyError as exc:
            raise LetterNotInAlphabet(exc.args[0]) from None
    if any(t is None for t in table):
        raise ValueError("table must be total on the alphabet")
    return SubstitutionRule(alphabet, int(d["m"]), tuple(table))


def rule_to_json(s: SubstitutionRule) -> dict:
    return {
        "alphabet": list(s.alphabet),
        "m": s.m,
        "table": {str(a): [[s.alphabet[v] for v in row] for row in s.table[i]] for i, a in enumerate(s.alphabet)},
    }


def apply(s: SubstitutionRule, p: LetterPattern) -> LetterPattern:
    cells = p.cells
    if cells.min() < 0 or cells.max() >= len(s.alphabet):
        raise LetterNotInAlphabet("pattern uses a letter outside the alphabet")
    h, w = cells.shape
    m = s.m
    out = s.array()[cells].transpose(0, 2, 1, 3).reshape(h * m, w * m)
    return LetterPattern(out, (p.anchor[0] * m, p.anchor[1] * m))


def iterate(s: SubstitutionRule, a: int, n: int, cap: int = 1 << 13) -> LetterPattern:
    if n < 0:
        raise ValueError("n must be >= 0")
    if s.m**n > cap:
        raise SizeCap(f"side {s.m}**{n} exceeds cap {cap}")
    if not 0 <= a < len(s.alphabet):
        raise LetterNotInAlphabet(a)
    p = LetterPattern(np.array([[a]], dtype=np.int64))
    for _ in range(n):
        p = apply(s, p)
    return p


# ---------------------------------------------------------------- Thue-Morse

_FLIP = str.maketrans("01", "10")


def tm_words(n: int) -> tuple[str, str]:
    """(a_n, b_n) with a_0 = 0, b_0 = 1, a_{n+1} = a_n b_n, b_{n+1} = b_n a_n."""
    if not 0 <= n <= 30:
        raise ValueError("n must be in [0, 30]")
    a = "0"
    for _ in range(n):
        a = a + a.translate(_FLIP)
    return a, a.translate(_FLIP)


def shift_agreement(w, u: int) -> tuple[int, int]:
    """Counts of i in [1, |w| - u] with w(i) == w(i+u) and with w(i) != w(i+u)."""
    arr = np.frombuffer(w.encode(), dtype=np.uint8) if isinstance(w, str) else np.asarray(w)
    if not 1 <= u < len(arr):
        raise ValueError("need 1 <= u < |w|")
    diff = int(np.count_nonzero(arr[:-u] != arr[u:]))
    return len(arr) - u - diff, diff


def tm1(x):
    """One-dimensional Thue-Morse bit: parity of the binary digit sum."""
    if isinstance(x, (int, np.integer)):
        return bin(int(x)).count("1") & 1
    return (np.bitwise_count(np.asarray(x, dtype=np.uint64)) & 1).astype(np.uint8)


def tm_cell(x, y):
    return tm1(x) ^ tm1(y)


def tm_window(x0: int, y0: int, w: int, h: int) -> np.ndarray:
    """Thue-Morse letters on a window as an array indexed [y - y0, x - x0]."""
    tx = tm1(np.arange(x0, x0 + w))
    ty = tm1(np.arange(y0, y0 + h))
    return ty[:, None] ^ tx[None, :]


def aperiodicity_measure(p, T: PeriodVector, window: Region, domain: Region | None = None) -> float:
    """Exact fraction of window cells x with p(x) != p(x + T).

    ``p`` is a LetterPattern (its domain is its array placed at the anchor) or a
    vectorized function f(X, Y) -> letters over nonnegative coordinates.
    """
    sx = window.x0 + min(0, T.dx)
    sy = window.y0 + min(0, T.dy)
    ex = window.x0 + window.w + max(0, T.dx)
    ey = window.y0 + window.h + max(0, T.dy)
    if isinstance(p, LetterPattern):
        ax, ay = p.anchor
        h, w = p.cells.shape
        if sx < ax or sy < ay or ex > ax + w or ey > ay + h:
            raise OutOfDomain("window shifted by T leaves the pattern")
        arr = p.cells[sy - ay:ey - ay, sx - ax:ex - ax]
    else:
        if sx < 0 or sy < 0:
            raise OutOfDomain("generators are defined on nonnegative coordinates")
        X, Y = np.meshgrid(np.arange(sx, ex), np.arange(sy, ey))
        arr = p(X, Y)
    ox, oy = window.x0 - sx, window.y0 - sy
    a = arr[oy:oy + window.h, ox:ox + window.w]
    b = arr[oy + T.dy:oy + T.dy + window.h, ox + T.dx:ox + T.dx + window.w]
    return int(np.count_nonzero(a != b)) / (window.w * window.h)


def tm_mismatch_fractions(size: int = 4096, radius: int = 8, margin: int | None = None) -> dict:
    """Mismatch fraction for every nonzero |T|_inf <= radius on a size^2 window."""
    margin = radius if margin is None else margin
    full = tm_window(0, 0, size + 2 * margin, size + 2 * margin)
    pat = LetterPattern(full)
    win = Region(margin, margin, size, size)
    out = {}
    for dx in range(-radius, radius + 1):
        for dy in range(-radius, radius + 1):
            if dx == 0 and dy == 0:
                continue
            out[(dx, dy)] = aperiodicity_measure(pat, PeriodVector(dx, dy), win)
    return out


def folklore_lemma_holds(n: int) -> bool:
    """Every shift u <= 2^n / 4 of a_n keeps and changes at least 2^(n-2) positions."""
    a, _ = tm_words(n)
    arr = np.frombuffer(a.encode(), dtype=np.uint8)
    bound = 2 ** n / 4
    for u in range(1, int(bound) + 1):
        agree, disagree = shift_agreement(arr, u)
        if agree < bound or disagree < bound:
            return False
    return True


# ---------------------------------------------------------------- compatibility


@dataclass(frozen=True)
class Certificate:
    offsets: tuple[tuple[int, int], ...]
    chain: tuple[LetterPattern, ...]  # X_1 .. X_d, each an s-preimage of the previous


@dataclass(frozen=True)
class Refutation:
    depth: int
    nodes: int


def _preimage_candidates(s: SubstitutionRule, cand: np.ndarray, off: tuple[int, int]) -> np.ndarray | None:
    """Per-cell letter sets of preimages (bitmasks) whose image fits ``cand`` at offset."""
    h, w = cand.shape
    m = s.m
    ox, oy = off
    ph, pw = -(-(oy + h) // m), -(-(ox + w) // m)
    img = s.array()
    out = np.zeros((ph, pw), dtype=np.int64)
    for j in range(ph):
        for i in range(pw):
            mask = 0
            for a in range(len(s.alphabet)):
                ok = True
                for r in range(m):
                    y = j * m + r - oy
                    if not 0 <= y < h:
                        continue
                    for c in range(m):
                        x = i * m + c - ox
                        if 0 <= x < w and not (cand[y, x] >> int(img[a, r, c])) & 1:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    mask |= 1 << a
            if mask == 0:
                return None
            out[j, i] = mask
    return out


def _crop_image(s: SubstitutionRule, x: LetterPattern, off: tuple[int, int], shape: tuple[int, int]) -> LetterPattern:
    big = apply(s, LetterPattern(x.cells)).cells
    ox, oy = off
    h, w = shape
    return LetterPattern(big[oy:oy + h, ox:ox + w].copy())


def check_compatible(p: LetterPattern, s: SubstitutionRule, depth: int, node_cap: int = 200_000):
    """Search a chain X_d -> ... -> X_1 -> p of s-preimages restricted to the window.

    Candidate letter sets are propagated level by level (cells of a preimage
    constrain only their own block), so the search branches only on offsets.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    full = (1 << len(s.alphabet)) - 1
    start = np.left_shift(np.int64(1), p.cells.astype(np.int64))
    if np.any(start & full == 0):
        raise LetterNotInAlphabet("pattern uses a letter outside the alphabet")
    nodes = 0
    offsets = list(itertools.product(range(s.m), repeat=2))
    offsets = [(ox, oy) for oy, ox in offsets]  # x varies fastest

    def search(cand: np.ndarray, level: int):
        nonlocal nodes
        if level == depth:
            return []
        for off in offsets:
            nodes += 1
            if nodes > node_cap:
                raise SearchCap(f"more than {node_cap} nodes")
            nxt = _preimage_candidates(s, cand, off)
            if nxt is None:
                continue
            rest = search(nxt, level + 1)
            if rest is not None:
                return [(off, nxt)] + rest
        return None

    found = search(start, 0)
    if found is None:
        return Refutation(depth, nodes)
    # pick the lowest letter at the top level, then rebuild the chain downward
    top = found[-1][1]
    letters = np.zeros_like(top)
    for a in reversed(range(len(s.alphabet))):
        letters = np.where((top >> a) & 1 == 1, a, letters)
    chain = [LetterPattern(letters)]
    shapes = [p.cells.shape] + [c.shape for _, c in found[:-1]]
    for (off, _), shape in zip(reversed(found), reversed(shapes)):
        chain.append(_crop_image(s, chain[-1], off, shape))
    assert chain[-1] == p
    chain = chain[:-1][::-1]
    return Certificate(tuple(off for off, _ in found), tuple(chain))


def render_pattern_ppm(p: LetterPattern, palette: Sequence[tuple[int, int, int]] | None = None) -> bytes:
    palette = palette or [(255, 255, 255), (0, 0, 0), (200, 40, 40), (40, 40, 200)]
    h, w = p.cells.shape
    pal = np.array(palette, dtype=np.uint8)
    img = pal[p.cells[::-1] % len(pal)]
    return f"P6\n{w} {h}\n255\n".encode() + img.tobytes()
