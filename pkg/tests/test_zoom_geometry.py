import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tileforge.substitution import tm_words
from tileforge.zoom_geometry import (
    ForbiddenFactorSource,
    MacroCoord,
    NoDelegatedBit,
    ZoomSchedule,
    check_group,
    checksum_routes,
    consciousness_budget,
    default_group_length,
    delegated_bit,
    responsibility_zone,
    runs_source,
    scan_forbidden,
    zoom_values,
)

P = ZoomSchedule.powers(16, 2.5)
F4 = ZoomSchedule.fixed(4)


def test_zoom_values_powers():
    assert [zoom_values(P, k)[0] for k in range(3)] == [16, 256, 16**6]
    assert zoom_values(P, 1)[1] == 16 and zoom_values(P, 2)[1] == 4096


def test_fixed_zoom():
    assert zoom_values(F4, 3)[1] == 64


def test_L_below_N():
    assert all(zoom_values(P, k)[1] < zoom_values(P, k)[0] for k in range(7))


def test_premise_chain_for_bi_islands():
    L = [zoom_values(P, k)[1] for k in range(7)]
    for k in range(2, 7):
        assert 12 * sum(2 * L[j] for j in range(1, k)) < 26 * L[k - 1]


def test_delegation_examples():
    assert delegated_bit(F4, MacroCoord(1, 2, 1, 8)) == 9
    assert delegated_bit(P, MacroCoord(1, 0, 200, 0)) is None
    assert delegated_bit(P, MacroCoord(2, 3, 0, 4096)) == 4096


def test_responsibility_zone_examples():
    assert responsibility_zone(F4, 2, 3) == (48, 64)
    assert responsibility_zone(F4, 0, 5) == (5, 6)


def test_zones_nest():
    for k in range(0, 4):
        for idx in range(0, 40):
            lo, hi = responsibility_zone(F4, k, idx)
            flo, fhi = responsibility_zone(F4, k + 1, idx // 4)
            assert flo <= lo and hi <= fhi


@given(st.integers(0, 4), st.integers(0, 3), st.integers(0, 3), st.integers(0, 50))
def test_delegated_bit_inside_zone(k, i, j, idx):
    lo, hi = responsibility_zone(F4, k, idx)
    b = delegated_bit(F4, MacroCoord(k, i, j, lo))
    if b is not None:
        assert lo <= b < hi


def test_delegation_injective_within_father():
    bits = [delegated_bit(F4, MacroCoord(2, 0, j, 0)) for j in range(4)]
    assert len(set(bits)) == 4


def test_check_group_examples():
    assert check_group(F4, MacroCoord(2, 0, 5, 0), lambda k: 3) == (5, 8)
    assert check_group(F4, MacroCoord(1, 0, 3, 0), lambda k: 4) == (3, 4)
    with pytest.raises(NoDelegatedBit):
        check_group(P, MacroCoord(1, 0, 100, 0))


def test_default_group_length_monotone():
    vals = [default_group_length(k) for k in range(101)]
    assert vals == sorted(vals) and min(vals) >= 1


def test_checksum_routes():
    assert len(checksum_routes(4, 0)) == 7
    assert len(checksum_routes(1, 0)) == 1
    for n in range(1, 65, 9):
        for i in range(n):
            assert len(checksum_routes(n, i)) == 2 * n - 1
    for i, j in itertools.combinations(range(6), 2):
        assert checksum_routes(6, i) & checksum_routes(6, j) == {(i, j), (j, i)}


def test_budget_examples():
    b = consciousness_budget(P, 2, 6)
    assert b.fits and b.budget == 256
    tiny = consciousness_budget(F4, 2, 6)
    assert not tiny.fits and not tiny.field_fits("A")
    assert consciousness_budget(P, 2, 12).sizes["E"] == 2 * b.sizes["E"]


def test_forbidden_scan():
    assert scan_forbidden(tm_words(10)[0], ForbiddenFactorSource(("000", "111"))) == []
    assert scan_forbidden("0" * 8, ForbiddenFactorSource(("000",))) == [(k, "000") for k in range(6)]
    assert scan_forbidden("0101", ForbiddenFactorSource(())) == []
    assert scan_forbidden("00100", runs_source("0", 2, 3)) == [(0, "00"), (3, "00")]
