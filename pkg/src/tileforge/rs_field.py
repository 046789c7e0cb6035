"""Finite fields, Reed-Solomon checksums, streaming evaluation and erasure decoding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .wang_core import TilingError


class DimensionMismatch(TilingError):
    pass


class DuplicatePoint(TilingError):
    pass


class TooManyErasures(TilingError):
    pass


class InconsistentData(TilingError):
    pass


# ---------------------------------------------------------------- GF(2)[x]


def clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    d = p.bit_length() - 1
    if d < 1:
        return False
    for q in range(2, 1 << (d // 2 + 1)):
        if poly_mod(p, q) == 0:
            return False
    return True


def smallest_irreducible(t: int) -> int:
    for p in range(1 << t, 1 << (t + 1)):
        if is_irreducible(p):
            return p
    raise AssertionError("unreachable")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


# ---------------------------------------------------------------- fields


class Field:
    """GF(2^t) with exp/log tables, or GF(p) with modular arithmetic."""

    def __init__(self, kind: str, t: int = 0, poly: int = 0, p: int = 0):
        self.kind = kind
        if kind == "binary":
            if not is_irreducible(poly) or poly.bit_length() - 1 != t:
                raise ValueError(f"{poly:#x} is not an irreducible polynomial of degree {t}")
            self.t, self.poly, self.q = t, poly, 1 << t
            self._build_tables()
        elif kind == "prime":
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            self.p = self.q = p
        else:
            raise ValueError(kind)

    def __repr__(self) -> str:
        if self.kind == "binary":
            return f"GF(2^{self.t}, poly={self.poly:#x})"
        return f"GF({self.p})"

    def _build_tables(self):
        q = self.q
        # the canonical polynomial need not be primitive, so look for a generator
        for g in range(2, q) if q > 2 else [1]:
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = poly_mod(clmul(x, g), self.poly)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                break
        self.generator = g
        self.exp = exp + exp
        self.log = [0] * q
        for i, v in enumerate(exp):
            self.log[v] = i

    def add(self, a: int, b: int) -> int:
        return a ^ b if self.kind == "binary" else (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return a ^ b if self.kind == "binary" else (a - b) % self.p

    def neg(self, a: int) -> int:
        return a if self.kind == "binary" else (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        if self.kind == "prime":
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "prime":
            return pow(a, self.p - 2, self.p)
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r

    def elements(self) -> range:
        return range(self.q)

    @property
    def width(self) -> int:
        """Bytes used to serialize one element."""
        return max(1, (self.q - 1).bit_length() + 7 >> 3)


@lru_cache(maxsize=None)
def build_field(t: int) -> Field:
    """GF(2^t) over the lexicographically smallest irreducible polynomial."""
    if not 1 <= t <= 16:
        raise ValueError("t must be in [1, 16]")
    return Field("binary", t=t, poly=smallest_irreducible(t))


@lru_cache(maxsize=None)
def prime_field(p: int) -> Field:
    return Field("prime", p=p)


# ---------------------------------------------------------------- codes


@dataclass(frozen=True)
class RSCode:
    field: Field
    points: tuple[int, ...]
    checks: tuple[int, ...]
    d: int

    def __post_init__(self):
        allpts = self.points + self.checks
        if len(set(allpts)) != len(allpts):
            raise DuplicatePoint("evaluation and checksum points must be distinct")
        if any(not 0 <= x < self.field.q for x in allpts):
            raise ValueError("points must be field elements")
        if self.d > self.n:
            raise ValueError("d must not exceed n")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def D(self) -> int:
        return len(self.checks)

    def to_json(self) -> dict:
        t = self.field.t if self.field.kind == "binary" else None
        return {"t": t, "n": self.n, "D": self.D, "d": self.d, "points": list(self.points + self.checks)}


def make_code(f: Field, n: int, D: int, d: int | None = None) -> RSCode:
    """Evaluation points 0..n-1 and checksum points n..n+D-1."""
    if n + D > f.q:
        raise ValueError("n + D must not exceed the field size")
    return RSCode(f, tuple(range(n)), tuple(range(n, n + D)), n if d is None else d)


def code_from_json(d: Mapping) -> RSCode:
    f = build_field(int(d["t"]))
    n, D = int(d["n"]), int(d["D"])
    pts = tuple(int(x) for x in d.get("points", range(n + D)))
    if len(pts) != n + D:
        raise DimensionMismatch("points must list n + D elements")
    return RSCode(f, pts[:n], pts[n:], int(d.get("d", n)))


def lagrange_eval(f: Field, xs: Sequence[int], ys: Sequence[int], a: int) -> int:
    """Value at a of the degree < len(xs) interpolant (direct Lagrange form)."""
    total = 0
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if j != i:
                num = f.mul(num, f.sub(a, xj))
                den = f.mul(den, f.sub(xi, xj))
        total = f.add(total, f.mul(yi, f.div(num, den)))
    return total


def rs_checksums(code: RSCode, values: Sequence[int]) -> list[int]:
    if len(values) != code.n:
        raise DimensionMismatch(f"expected {code.n} values, got {len(values)}")
    return [lagrange_eval(code.field, code.points, values, a) for a in code.checks]


def barycentric_weights(f: Field, xs: Sequence[int]) -> list[int]:
    w = []
    for i, xi in enumerate(xs):
        den = 1
        for j, xj in enumerate(xs):
            if j != i:
                den = f.mul(den, f.sub(xi, xj))
        w.append(f.inv(den))
    return w


class ChecksumStream:
    """Left-to-right checksum evaluation with two field elements per checksum point.

    For each checksum point a the state is q_i(a) = prod_{j<=i} (a - x_j) and the
    weighted sum sum_{j<=i} eta_j w_j / (a - x_j), where the barycentric
    weights w_j depend only on the code's points (fixed in advance).  After the
    last point the product of the two is exactly P(a).
    """

    def __init__(self, code: RSCode):
        self.code = code
        self.f = code.field
        self.weights = barycentric_weights(self.f, code.points)
        self.i = 0
        self.state = [[1, 0] for _ in code.checks]  # (q_i(a), sum) per point
        self.seen: set[int] = set()

    def push(self, x: int, eta: int) -> None:
        if self.i >= self.code.n:
            raise DimensionMismatch("more values than evaluation points")
        if x in self.seen:
            raise DuplicatePoint(x)
        if x != self.code.points[self.i]:
            raise DimensionMismatch(f"point {x} arrives out of code order")
        f = self.f
        w = self.weights[self.i]
        for st, a in zip(self.state, self.code.checks):
            diff = f.sub(a, x)
            st[0] = f.mul(st[0], diff)
            st[1] = f.add(st[1], f.div(f.mul(eta, w), diff))
        self.seen.add(x)
        self.i += 1

    def state_size(self) -> int:
        return sum(len(st) for st in self.state)

    def result(self) -> list[int]:
        if self.i != self.code.n:
            raise DimensionMismatch(f"stream has {self.i} of {self.code.n} values")
        return [self.f.mul(q, s) for q, s in self.state]


def rs_stream_checksums(code: RSCode, stream: Iterable[tuple[int, int]]) -> list[int]:
    st = ChecksumStream(code)
    for x, eta in stream:
        st.push(x, eta)
    return st.result()


def newton_checksums(code: RSCode, values: Sequence[int]) -> list[int]:
    """Reference: the incremental p_i, q_i recurrence with full polynomials.

    p_{i+1} = p_i + (eta_{i+1} - p_i(x_{i+1})) q_i / q_i(x_{i+1}),
    q_{i+1} = q_i (x - x_{i+1}).  Polynomials are coefficient lists, low first.
    """
    f = code.field

    def ev(poly, x):
        r = 0
        for c in reversed(poly):
            r = f.add(f.mul(r, x), c)
        return r

    p, q = [0], [1]
    for x, eta in zip(code.points, values):
        c = f.div(f.sub(eta, ev(p, x)), ev(q, x))
        p = [f.add(pc, f.mul(c, qc)) for pc, qc in zip(p + [0] * (len(q) - len(p)), q)]
        q = [f.sub(lo, f.mul(x, hi)) for lo, hi in zip([0] + q, q + [0])]
    return [ev(p, a) for a in code.checks]


def rs_erasure_decode(code: RSCode, known: Mapping[int, int], checksums: Sequence[int]) -> list[int]:
    """Recover all n values from the non-erased ones plus the D checksums.

    ``known`` maps positions 0..n-1 to values.  Uses n of the available points
    to interpolate and every remaining point to verify consistency.
    """
    f = code.field
    if len(checksums) != code.D:
        raise DimensionMismatch(f"expected {code.D} checksums")
    erased = [i for i in range(code.n) if i not in known]
    if len(erased) > code.D:
        raise TooManyErasures(f"{len(erased)} erasures exceed D={code.D}")
    xs = [code.points[i] for i in sorted(known)] + list(code.checks)
    ys = [known[i] for i in sorted(known)] + list(checksums)
    base_x, base_y = xs[:code.n], ys[:code.n]
    for x, y in zip(xs[code.n:], ys[code.n:]):
        if lagrange_eval(f, base_x, base_y, x) != y:
            raise InconsistentData("points do not lie on one polynomial of degree < n")
    out = [known.get(i) for i in range(code.n)]
    for i in erased:
        out[i] = lagrange_eval(f, base_x, base_y, code.points[i])
    return out


def to_hex(f: Field, values: Sequence[int]) -> str:
    return b"".join(v.to_bytes(f.width, "big") for v in values).hex()


def from_hex(f: Field, s: str) -> list[int]:
    raw = bytes.fromhex(s.strip())
    w = f.width
    if len(raw) % w:
        raise DimensionMismatch("hex length is not a multiple of the element width")
    vals = [int.from_bytes(raw[i:i + w], "big") for i in range(0, len(raw), w)]
    if any(v >= f.q for v in vals):
        raise ValueError("value outside the field")
    return vals


# ---------------------------------------------------------------- parameters


@dataclass(frozen=True)
class FamilyReport:
    per_level: tuple[bool, ...]
    eps_sum: float
    eps_target: float

    @property
    def ok(self) -> bool:
        return all(self.per_level) and self.eps_sum < self.eps_target


def validate_family_parameters(Ns: Sequence[int], eps: Sequence[float], target: float = 0.01) -> FamilyReport:
    """Check 4 log2 N_{k+1} <= eps_k N_k^2 per level and the sum of eps_k."""
    levels = []
    for k in range(min(len(Ns) - 1, len(eps))):
        levels.append(4 * math.log2(Ns[k + 1]) <= eps[k] * Ns[k] ** 2 * (1 + 1e-12))
    return FamilyReport(tuple(levels), float(sum(eps)), target)


# ---------------------------------------------------------------- seeded checks


@dataclass(frozen=True)
class RoundtripReport:
    trials: int
    stream_mismatches: int
    decode_failures: int

    @property
    def ok(self) -> bool:
        return self.stream_mismatches == 0 and self.decode_failures == 0


def roundtrip(t: int, n: int, D: int, trials: int, seed: int = 0, erasures: int | None = None) -> RoundtripReport:
    """Random data per trial: direct vs streaming checksums, then decode after erasing D values."""
    f = build_field(t)
    code = make_code(f, n, D)
    e = D if erasures is None else erasures
    rng = np.random.Generator(np.random.Philox(key=seed))
    mism = fails = 0
    for _ in range(trials):
        vals = [int(v) for v in rng.integers(0, f.q, size=n)]
        direct = rs_checksums(code, vals)
        streamed = rs_stream_checksums(code, zip(code.points, vals))
        if to_hex(f, direct) != to_hex(f, streamed):
            mism += 1
        gone = set(int(i) for i in rng.choice(n, size=e, replace=False))
        known = {i: v for i, v in enumerate(vals) if i not in gone}
        try:
            if rs_erasure_decode(code, known, direct) != vals:
                fails += 1
        except TilingError:
            fails += 1
    return RoundtripReport(trials, mism, fails)
