import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tileforge.substitution import (
    Certificate,
    LetterNotInAlphabet,
    LetterPattern,
    Refutation,
    SizeCap,
    aperiodicity_measure,
    apply,
    check_compatible,
    chessboard_rule,
    folklore_lemma_holds,
    iterate,
    rule_from_json,
    rule_to_json,
    shift_agreement,
    thue_morse_rule,
    tm1,
    tm_cell,
    tm_window,
    tm_words,
)
from tileforge.wang_core import PeriodVector, Region

TM = thue_morse_rule()

# Frozen oracle for three substitution steps of 0, bottom row first; row y is a_3 xor (parity of y).
TM3_ROWS = [
    "01101001",
    "10010110",
    "10010110",
    "01101001",
    "10010110",
    "01101001",
    "01101001",
    "10010110",
]


def pat(rows):
    return LetterPattern(np.array(rows, dtype=np.int64))


def test_apply_examples():
    assert apply(chessboard_rule(), pat([[0]])).tolist() == [[0, 1], [1, 0]]
    assert apply(TM, pat([[1]])).tolist() == [[1, 0], [0, 1]]


def test_apply_twice_equals_composed_rule():
    s2 = TM.compose(TM)
    assert apply(TM, apply(TM, pat([[0]]))) == apply(s2, pat([[0]]))


def test_iterate_examples():
    assert iterate(TM, 0, 1).tolist() == [[0, 1], [1, 0]]
    assert iterate(chessboard_rule(), 1, 0).tolist() == [[1]]
    assert iterate(TM, 0, 3).tolist() == [[int(c) for c in row] for row in TM3_ROWS]


def test_iterate_errors():
    with pytest.raises(SizeCap):
        iterate(TM, 0, 20)
    with pytest.raises(LetterNotInAlphabet):
        iterate(TM, 2, 1)


def test_tm_words():
    assert tm_words(3)[0] == "01101001"
    assert tm_words(0) == ("0", "1")
    a4, b4 = tm_words(4)
    assert tm_words(5)[0] == a4 + b4


@pytest.mark.parametrize("n", range(0, 21, 4))
def test_tm_words_complement_and_length(n):
    a, b = tm_words(n)
    assert len(a) == 2**n
    assert b == a.translate(str.maketrans("01", "10"))


def test_shift_agreement_examples():
    assert shift_agreement("01101001", 2) == (2, 4)
    assert shift_agreement("0000", 1) == (3, 0)


@given(st.text(alphabet="01", min_size=2, max_size=40), st.integers(1, 39))
def test_shift_agreement_matches_direct_count(w, u):
    u = min(u, len(w) - 1)
    agree = sum(w[i] == w[i + u] for i in range(len(w) - u))
    assert shift_agreement(w, u) == (agree, len(w) - u - agree)


def test_folklore_lemma_small():
    assert all(folklore_lemma_holds(n) for n in range(0, 11))


def test_tm_cell_examples():
    assert tm_cell(0, 0) == 0
    assert tm_cell(1, 2) == 0 == iterate(TM, 0, 2).cells[2, 1]
    assert np.array_equal(tm_window(0, 0, 8, 8), iterate(TM, 0, 3).cells)


def test_tm_cell_xor_structure_sampled():
    rng = np.random.Generator(np.random.Philox(key=3))
    x = rng.integers(0, 2**14, size=10**6)
    y = rng.integers(0, 2**14, size=10**6)
    bits = lambda v: np.array([bin(int(a)).count("1") & 1 for a in v[:2000]])
    # the vectorised bit count agrees with Python's on a prefix, and the cell is their xor everywhere
    assert np.array_equal(tm1(x[:2000]), bits(x))
    assert np.array_equal(tm_cell(x, y), tm1(x) ^ tm1(y))


def test_aperiodicity_examples():
    const = pat([[1] * 20] * 20)
    assert aperiodicity_measure(const, PeriodVector(1, 0), Region(0, 0, 10, 10)) == 0
    chess = iterate(chessboard_rule(), 0, 4)
    assert aperiodicity_measure(chess, PeriodVector(1, 1), Region(0, 0, 8, 8)) == 0
    v = aperiodicity_measure(tm_cell, PeriodVector(1, 0), Region(0, 0, 4096, 4096))
    assert v >= 0.24


def test_tm_mismatch_separable_oracle():
    # for T = (dx, 0) the mismatch count equals cx (H - cy) + cy (W - cx) with cx the 1D mismatches
    size = 256
    for dx, dy in [(1, 0), (3, 0), (0, 5), (2, 7), (-4, 1)]:
        xs = np.arange(8, 8 + size)
        cx = int(np.count_nonzero(tm1(xs) != tm1(xs + dx)))
        cy = int(np.count_nonzero(tm1(xs) != tm1(xs + dy)))
        expected = (cx * (size - cy) + cy * (size - cx)) / size**2
        got = aperiodicity_measure(tm_cell, PeriodVector(dx, dy), Region(8, 8, size, size))
        assert got == pytest.approx(expected, abs=0)


def test_compatibility_certificate_for_iterate():
    p = iterate(TM, 0, 3)
    cert = check_compatible(p, TM, 3)
    assert isinstance(cert, Certificate)
    assert cert.offsets == ((0, 0), (0, 0), (0, 0))
    assert [x.tolist() for x in cert.chain] == [iterate(TM, 0, 2).tolist(), iterate(TM, 0, 1).tolist(), [[0]]]


def test_all_zero_pattern_refuted():
    assert isinstance(check_compatible(pat([[0] * 4] * 4), TM, 1), Refutation)


def test_chessboard_certificate():
    chess = iterate(chessboard_rule(), 0, 3)
    assert isinstance(check_compatible(chess, chessboard_rule(), 5), Certificate)


@given(st.integers(0, 1), st.integers(2, 4), st.integers(0, 7), st.integers(0, 7), st.integers(2, 6))
def test_subwindows_of_iterates_are_compatible(a, n, x0, y0, size):
    big = iterate(TM, a, n + 1).cells
    x0, y0 = x0 % (big.shape[1] - size + 1), y0 % (big.shape[0] - size + 1)
    sub = LetterPattern(big[y0:y0 + size, x0:x0 + size].copy())
    assert isinstance(check_compatible(sub, TM, 2), Certificate)


def test_rule_json_roundtrip():
    assert rule_from_json(rule_to_json(TM)) == TM
    bad = {"alphabet": ["0", "1"], "m": 2, "table": {"0": [["0", "2"], ["1", "0"]], "1": [["1", "0"], ["0", "1"]]}}
    with pytest.raises(LetterNotInAlphabet):
        rule_from_json(bad)
