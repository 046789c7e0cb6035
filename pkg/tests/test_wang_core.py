import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tileforge.wang_core import (
    HOLE,
    ColorOutOfRange,
    Count,
    DuplicateTile,
    MalformedSpec,
    NoSolution,
    PatchTiling,
    Region,
    Tile,
    TileSet,
    UnknownName,
    builtin,
    check_patch,
    chessboard,
    density_bounds,
    example1,
    example2,
    fill_region,
    min_torus_period,
    patch_from_json,
    patch_to_json,
    render_ppm,
    tileset_to_json,
    thue_morse_block,
    torus_tiling,
    unroll,
    validate_tileset,
)


def brute_count(ts, w, h):
    """Independent oracle: try every assignment and test each edge directly."""
    n = 0
    for cells in itertools.product(range(len(ts.tiles)), repeat=w * h):
        ok = True
        for j in range(h):
            for i in range(w):
                t = ts.tiles[cells[j * w + i]]
                if i + 1 < w and t.right != ts.tiles[cells[j * w + i + 1]].left:
                    ok = False
                if j + 1 < h and t.top != ts.tiles[cells[(j + 1) * w + i]].bottom:
                    ok = False
        n += ok
    return n


def test_validate_chessboard_spec():
    ts = validate_tileset(tileset_to_json(chessboard()))
    assert len(ts.tiles) == 2 and len(ts.colors) == 2


def test_color_out_of_range():
    spec = {"name": "bad", "colors": ["a", "b"], "tiles": [{"l": 0, "r": 0, "t": 5, "b": 0}]}
    with pytest.raises(ColorOutOfRange):
        validate_tileset(spec)


def test_duplicate_tile_rejected():
    spec = {"name": "dup", "colors": ["a"], "tiles": [{"l": 0, "r": 0, "t": 0, "b": 0}, {"l": 0, "r": 0, "t": 0, "b": 0}]}
    with pytest.raises(DuplicateTile):
        validate_tileset(spec)


def test_malformed_spec():
    with pytest.raises(MalformedSpec):
        validate_tileset({"colors": ["a"]})


def test_example2_has_sixteen_tiles():
    assert len(validate_tileset(tileset_to_json(example2(4))).tiles) == 16


def test_builtins():
    assert len(builtin("chessboard").tiles) == 2
    assert len(builtin("example2(4)").tiles) == 16
    assert len(builtin("example1").tiles) == 1
    with pytest.raises(UnknownName):
        builtin("penrose")


def test_check_patch_examples():
    ts = chessboard()
    assert check_patch(PatchTiling.from_rows([[0, 0]]), ts) == []
    v = check_patch(PatchTiling.from_rows([[0, 1]]), ts)
    assert len(v) == 1 and v[0].side == "right"


def test_translated_example2_patch_is_valid():
    ts = example2(4)
    torus = torus_tiling(ts, 4)
    big = unroll(torus, 8, 8)
    shifted = PatchTiling(Region(0, 0, 3, 3), tuple(big.local(1 + i, j) for j in range(3) for i in range(3)))
    assert check_patch(shifted, ts) == []


def test_fill_counts_match_brute_force():
    assert fill_region(chessboard(), Region(0, 0, 2, 2), mode="count").value == 2 == brute_count(chessboard(), 2, 2)
    assert fill_region(example2(2), Region(0, 0, 2, 2), mode="count").value == 4 == brute_count(example2(2), 2, 2)
    assert fill_region(example1(), Region(3, -2, 3, 2), mode="count").value == 1


def test_count_cap_reports_lower_bound():
    c = fill_region(chessboard(), Region(0, 0, 1, 1), mode="count", cap=1)
    assert c == Count(1, True) and str(c) == ">=1"


def test_fill_with_boundary_and_holes():
    ts = chessboard()
    p = fill_region(ts, Region(0, 0, 2, 1), boundary={"left": [1]})
    assert p.cells == (1, 1)
    with pytest.raises(NoSolution):
        fill_region(ts, Region(0, 0, 2, 1), boundary={"left": [0], "right": [1]})
    # a hole separates the two constraints
    p = fill_region(ts, Region(0, 0, 3, 1), boundary={"left": [0], "right": [1]}, holes={(1, 0)})
    assert p.cells == (0, HOLE, 1)


def test_fixed_cells_use_absolute_coordinates():
    p = fill_region(example2(3), Region(10, 10, 3, 3), fixed={(10, 10): 4})
    assert p.at(10, 10) == 4


def test_torus_examples():
    assert torus_tiling(chessboard(), 1).cells == (0,)
    canon = torus_tiling(example2(4), 4)
    assert canon.rows() == [[0, 4, 8, 12], [1, 5, 9, 13], [2, 6, 10, 14], [3, 7, 11, 15]]
    with pytest.raises(NoSolution):
        torus_tiling(example2(4), 3)


def test_min_torus_period():
    assert min_torus_period(chessboard(), 4) == 1
    assert min_torus_period(example2(4), 6) == 4
    assert min_torus_period(example2(3), 6) == 3


def test_density_bounds_examples():
    assert density_bounds(chessboard(), 2) == (Fraction(0), Fraction(1))
    assert density_bounds(example2(2), 2) == (Fraction(1, 4), Fraction(1, 4))
    assert density_bounds(example2(2), 3) == (Fraction(1, 9), Fraction(4, 9))


def test_density_bounds_exhaustive_oracle():
    ts = thue_morse_block(2)
    for n in (1, 2, 3):
        vals = []
        for p in fill_region(ts, Region(0, 0, n, n), mode="enumerate"):
            vals.append(Fraction(sum(ts.part(v) == "A" for v in p.cells), n * n))
        assert density_bounds(ts, n) == (min(vals), max(vals))


def test_json_roundtrips():
    p = PatchTiling.from_rows([[0, HOLE], [1, 1]], x0=2, y0=-1)
    assert patch_from_json(json.loads(json.dumps(patch_to_json(p)))) == p
    ts = example2(3)
    assert validate_tileset(json.loads(json.dumps(tileset_to_json(ts)))).tiles == ts.tiles


def test_ppm_header():
    data = render_ppm(PatchTiling.from_rows([[0, 1]]), scale=2)
    assert data.startswith(b"P6\n4 2\n255\n") and len(data) == len(b"P6\n4 2\n255\n") + 4 * 2 * 3


def test_rows_are_bottom_up():
    p = PatchTiling.from_rows([[0, 1], [2, 3]])
    assert p.at(0, 0) == 0 and p.at(0, 1) == 2


tilesets = st.lists(
    st.tuples(*[st.integers(0, 1)] * 4), min_size=1, max_size=4, unique=True
).map(lambda ts: TileSet("rnd", ("a", "b"), tuple(Tile(*t) for t in ts)))


@given(tilesets, st.integers(1, 3), st.integers(1, 3))
def test_count_equals_brute_force(ts, w, h):
    if len(ts.tiles) ** (w * h) > 5000:
        w, h = min(w, 2), min(h, 2)
    assert fill_region(ts, Region(0, 0, w, h), mode="count").value == brute_count(ts, w, h)


@given(tilesets, st.integers(1, 4), st.integers(1, 4))
def test_every_solution_is_valid(ts, w, h):
    for p in fill_region(ts, Region(0, 0, w, h), mode="enumerate", cap=50):
        assert check_patch(p, ts) == []


@given(tilesets, st.integers(1, 3))
def test_torus_unrolls_to_valid_squares(ts, m):
    try:
        t = torus_tiling(ts, m)
    except NoSolution:
        return
    assert check_patch(t, ts) == []
    big = unroll(t, 2 * m, 2 * m)
    assert check_patch(big, ts) == []
