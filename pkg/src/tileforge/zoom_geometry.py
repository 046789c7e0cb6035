"""Arithmetic of variable zoom: zones of responsibility, delegated bits,
check groups, checksum routes, field budgets and forbidden-factor scans."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .wang_core import TilingError


class NoDelegatedBit(TilingError):
    pass


@dataclass(frozen=True)
class ZoomSchedule:
    """fixed(N): N_k = N.  powers(Q, c): N_k = Q ** floor(c ** k)."""

    kind: str
    N: int = 0
    Q: int = 0
    c: float = 0.0

    @classmethod
    def fixed(cls, N: int) -> "ZoomSchedule":
        if N < 2:
            raise ValueError("N must be >= 2")
        return cls("fixed", N=N)

    @classmethod
    def powers(cls, Q: int, c: float) -> "ZoomSchedule":
        if Q < 2 or c < 1:
            raise ValueError("need Q >= 2 and c >= 1")
        return cls("powers", Q=Q, c=c)

    def exponent(self, k: int) -> int:
        # exact floor of c**k for rational c given as a float literal like 2.5
        from fractions import Fraction

        return math.floor(Fraction(str(self.c)) ** k)

    def N_k(self, k: int) -> int:
        if self.kind == "fixed":
            return self.N
        return self.Q ** self.exponent(k)


def zoom_values(sched: ZoomSchedule, k: int) -> tuple[int, int]:
    """(N_k, L_k) with L_k = N_0 N_1 ... N_{k-1}."""
    L = 1
    for j in range(k):
        L *= sched.N_k(j)
    return sched.N_k(k), L


@dataclass(frozen=True)
class MacroCoord:
    """A level-k macro-tile at position (i, j) inside its father (i horizontal,
    j vertical) whose zone of responsibility starts at ``origin``."""

    k: int
    i: int
    j: int
    origin: int


def responsibility_zone(sched: ZoomSchedule, k: int, index: int) -> tuple[int, int]:
    """Half-open interval of omega indices served by horizontal macro index ``index``."""
    L = zoom_values(sched, k)[1]
    return index * L, (index + 1) * L


def delegated_bit(sched: ZoomSchedule, mc: MacroCoord) -> int | None:
    """The omega index carried by a macro-tile: origin + vertical position, if below L_k."""
    L = zoom_values(sched, mc.k)[1]
    if mc.j < L:
        return mc.origin + mc.j
    return None


def default_group_length(k: int) -> int:
    """floor(log log log max(k, 27)), at least 1 (natural logarithms)."""
    v = math.log(math.log(math.log(max(k, 27))))
    return max(1, math.floor(v))


def check_group(sched: ZoomSchedule, mc: MacroCoord, length_fn: Callable[[int], int] = default_group_length) -> tuple[int, int]:
    b = delegated_bit(sched, mc)
    if b is None:
        raise NoDelegatedBit(f"vertical position {mc.j} has no delegated bit at level {mc.k}")
    L = zoom_values(sched, mc.k)[1]
    end = min(b + length_fn(mc.k), mc.origin + L)
    return b, end


def checksum_routes(N: int, i: int) -> frozenset:
    """Cells (x, y) of row i and column i in an N x N grid."""
    if not 0 <= i < N:
        raise ValueError("need 0 <= i < N")
    return frozenset({(x, i) for x in range(N)} | {(i, y) for y in range(N)})


def _clog(n: int) -> int:
    """Bits needed to write numbers below n."""
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


@dataclass(frozen=True)
class FieldBudget:
    sizes: dict
    budget: int

    @property
    def total(self) -> int:
        return sum(self.sizes.values())

    @property
    def fits(self) -> bool:
        return self.total <= self.budget

    def field_fits(self, name: str) -> bool:
        return self.sizes[name] <= self.budget


def consciousness_budget(sched: ZoomSchedule, k: int, D: int, field_size: int | None = None, const: int = 1) -> FieldBudget:
    """Bit sizes of the conscious fields of a level-k macro-tile against one tape row.

    A: level number and coordinates, ceil(log k) + 2 ceil(log N_k).
    B: the delegated bit.  C, D: one bit each.
    E: D checksums with their row/column copies, D * 2 ceil(log q) * const.
    F: the check group.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    Nk = sched.N_k(k)
    Nprev = sched.N_k(k - 1)
    q = field_size if field_size is not None else 2 ** _clog(Nprev + D)
    sizes = {
        "A": _clog(k) + 2 * _clog(Nk),
        "B": 1,
        "C": 1,
        "D": 1,
        "E": D * 2 * _clog(q) * const,
        "F": default_group_length(k),
    }
    return FieldBudget(sizes, Nprev)


@dataclass(frozen=True)
class ForbiddenFactorSource:
    """Explicit or generated families of forbidden strings.

    ``alpha`` and ``c`` describe a complexity-style family only as metadata.
    """

    strings: tuple[str, ...] = ()
    generator: Callable[[int], Iterable[str]] | None = None
    alpha: float | None = None
    c: float | None = None

    def enumerate(self, budget: int) -> Iterator[str]:
        n = 0
        for s in self.strings:
            if n >= budget:
                return
            n += 1
            yield s
        if self.generator is not None:
            for s in self.generator(budget - n):
                if n >= budget:
                    return
                n += 1
                yield s


def runs_source(symbol: str, min_len: int, max_len: int) -> ForbiddenFactorSource:
    return ForbiddenFactorSource(tuple(symbol * j for j in range(min_len, max_len + 1)))


def scan_forbidden(omega: str, source: ForbiddenFactorSource, budget: int = 10_000) -> list[tuple[int, str]]:
    """Every (offset, string) occurrence of an enumerated source string in omega."""
    out = []
    for s in source.enumerate(budget):
        if not s:
            continue
        start = omega.find(s)
        while start != -1:
            out.append((start, s))
            start = omega.find(s, start + 1)
    return sorted(out)
