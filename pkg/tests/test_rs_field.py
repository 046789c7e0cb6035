import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tileforge.rs_field import (
    ChecksumStream,
    DimensionMismatch,
    DuplicatePoint,
    InconsistentData,
    RSCode,
    TooManyErasures,
    build_field,
    from_hex,
    is_irreducible,
    make_code,
    newton_checksums,
    prime_field,
    roundtrip,
    rs_checksums,
    rs_erasure_decode,
    rs_stream_checksums,
    smallest_irreducible,
    to_hex,
    validate_family_parameters,
)

GF256 = build_field(8)


def test_field_polynomials():
    assert build_field(1).poly == 0b10
    assert build_field(4).poly == 0b10011
    assert build_field(8).poly == 0x11B


def test_smallest_irreducible_by_exhaustion():
    # oracle: trial division by every lower-degree polynomial, written out separately
    def divides(d, p):
        while p.bit_length() >= d.bit_length():
            p ^= d << (p.bit_length() - d.bit_length())
        return p == 0

    def irreducible(p):
        return all(not divides(d, p) for d in range(2, 1 << ((p.bit_length() - 1) // 2 + 1)) if d.bit_length() <= (p.bit_length() + 1) // 2)

    for t in range(2, 9):
        first = next(p for p in range(1 << t, 1 << (t + 1)) if irreducible(p))
        assert smallest_irreducible(t) == first
        assert is_irreducible(first)


def test_inverses_sampled_gf256():
    rng = np.random.Generator(np.random.Philox(key=1))
    for g in rng.integers(1, 256, size=1000):
        assert GF256.mul(int(g), GF256.inv(int(g))) == 1


def test_field_axioms_gf16_exhaustive():
    f = build_field(4)
    el = list(f.elements())
    for a, b in itertools.product(el, repeat=2):
        assert f.mul(a, b) == f.mul(b, a)
        assert f.sub(f.add(a, b), b) == a
        if b:
            assert f.mul(f.div(a, b), b) == a
    for a, b, c in itertools.product(el[:8], repeat=3):
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))


def test_prime_field_example():
    f = prime_field(5)
    code = RSCode(f, (1, 2), (3,), 2)
    assert rs_checksums(code, [1, 2]) == [3]


def test_constant_values_give_constant_checksums():
    code = make_code(GF256, 10, 4)
    assert rs_checksums(code, [7] * 10) == [7] * 4


@given(st.lists(st.integers(0, 255), min_size=12, max_size=12), st.lists(st.integers(0, 255), min_size=12, max_size=12))
def test_checksums_are_linear(a, b):
    code = make_code(GF256, 12, 3)
    s = [GF256.add(x, y) for x, y in zip(a, b)]
    ca, cb = rs_checksums(code, a), rs_checksums(code, b)
    assert rs_checksums(code, s) == [GF256.add(x, y) for x, y in zip(ca, cb)]


def test_stream_matches_direct_and_newton():
    rng = np.random.Generator(np.random.Philox(key=9))
    code = make_code(GF256, 20, 6)
    for _ in range(200):
        vals = [int(v) for v in rng.integers(0, 256, size=20)]
        direct = rs_checksums(code, vals)
        assert to_hex(GF256, rs_stream_checksums(code, zip(code.points, vals))) == to_hex(GF256, direct)
        assert newton_checksums(code, vals) == direct


def test_single_value_stream():
    code = make_code(GF256, 1, 3)
    assert rs_stream_checksums(code, [(0, 42)]) == [42, 42, 42]


def test_stream_state_is_two_per_point():
    code = make_code(GF256, 5, 3)
    st_ = ChecksumStream(code)
    for x in code.points:
        st_.push(x, 1)
        assert st_.state_size() == 2 * code.D


def test_stream_errors():
    code = make_code(GF256, 3, 2)
    st_ = ChecksumStream(code)
    st_.push(0, 1)
    with pytest.raises(DuplicatePoint):
        st_.push(0, 1)
    with pytest.raises(DimensionMismatch):
        st_.result()


def test_decode_examples():
    code = make_code(GF256, 20, 6)
    rng = np.random.Generator(np.random.Philox(key=2))
    vals = [int(v) for v in rng.integers(0, 256, size=20)]
    cs = rs_checksums(code, vals)
    assert rs_erasure_decode(code, dict(enumerate(vals)), cs) == vals
    for _ in range(100):
        gone = set(int(i) for i in rng.choice(20, size=6, replace=False))
        known = {i: v for i, v in enumerate(vals) if i not in gone}
        assert rs_erasure_decode(code, known, cs) == vals
    with pytest.raises(TooManyErasures):
        rs_erasure_decode(code, {i: vals[i] for i in range(13)}, cs)


def test_decode_detects_corruption():
    code = make_code(GF256, 8, 3)
    vals = list(range(8))
    cs = rs_checksums(code, vals)
    known = {i: v for i, v in enumerate(vals) if i != 0}
    known[5] ^= 1
    with pytest.raises(InconsistentData):
        rs_erasure_decode(code, known, cs)


def test_low_degree_polynomials_agree_rarely():
    # two distinct polynomials of degree < d share at most d - 1 roots of their difference
    f = build_field(3)
    for d in (1, 2, 3):
        for a in itertools.product(range(8), repeat=d):
            for b in itertools.product(range(8), repeat=d):
                if a >= b:
                    continue
                agree = 0
                for x in f.elements():
                    va = vb = 0
                    for c in reversed(a):
                        va = f.add(f.mul(va, x), c)
                    for c in reversed(b):
                        vb = f.add(f.mul(vb, x), c)
                    agree += va == vb
                assert agree <= d - 1


def test_hex_roundtrip():
    f = build_field(12)
    vals = [0, 1, 4095, 77]
    assert from_hex(f, to_hex(f, vals)) == vals
    assert to_hex(GF256, [1, 255]) == "01ff"


def test_roundtrip_report():
    assert roundtrip(8, 20, 6, 20, seed=5).ok
    assert roundtrip(8, 20, 6, 3, seed=5, erasures=7).decode_failures == 3


def test_family_parameters():
    import math

    Ns = [2 ** (k + 10) for k in range(8)]
    eps = [4 * math.log2(Ns[k + 1]) / Ns[k] ** 2 for k in range(7)]
    assert all(validate_family_parameters(Ns, eps).per_level)
    slow = validate_family_parameters([k + 2 for k in range(6)], [0.001] * 5)
    assert not slow.per_level[0]
    empty = validate_family_parameters([], [])
    assert empty.ok and empty.per_level == ()
