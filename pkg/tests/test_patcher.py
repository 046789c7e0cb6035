import pytest

from tileforge.islands import DirtySet, Schedule, island_schedule, sample_bernoulli
from tileforge.patcher import (
    ContextDamaged,
    HoleSpec,
    NoWindows,
    ResidualErrors,
    check_r_robust,
    correct_errors,
    diff_mask,
    fill_hole,
    hole_extension_check,
    induced_tiling,
    neighborhood,
    percolation_patch,
    robustify,
)
from tileforge.wang_core import (
    HOLE,
    PatchTiling,
    Region,
    Tile,
    TileSet,
    check_patch,
    chessboard,
    example2,
    fill_region,
)


def solid(w, h, v=0):
    return PatchTiling(Region(0, 0, w, h), (v,) * (w * h))


def punch(t, cells):
    return t.replace({p: HOLE for p in cells})


def test_robustify_counts():
    assert len(robustify(chessboard(), 2).tileset.tiles) == 2
    assert len(robustify(example2(3), 2).tileset.tiles) == 9


def test_no_windows():
    # horizontal neighbours can never match, so no 5x5 window exists
    ts = TileSet("stuck", ("a", "b"), (Tile(0, 1, 0, 0),))
    with pytest.raises(NoWindows):
        robustify(ts, 2)


def test_projection_of_derived_patches_is_valid():
    rs = robustify(example2(3), 2)
    for p in fill_region(rs.tileset, Region(0, 0, 3, 3), mode="enumerate"):
        assert check_patch(rs.project(p), rs.base) == []


def test_base_tilings_induce_derived_tilings():
    for mu in (chessboard(), example2(3)):
        rs = robustify(mu, 2)
        for base in fill_region(mu, Region(0, 0, 7, 7), mode="enumerate", cap=20):
            ind = induced_tiling(rs, base)
            assert check_patch(ind, rs.tileset) == []
            assert rs.project(ind) == base.sub(Region(2, 2, 3, 3))


def test_robustness():
    assert check_r_robust(robustify(chessboard(), 2))
    assert check_r_robust(robustify(example2(3), 2))


def test_raw_chessboard_fails_empty_context_check():
    # with no surrounding cells the hole can be filled black or white
    assert not hole_extension_check(chessboard(), 3, 3)


def test_fill_black_hole():
    t = solid(9, 9)
    h = Region(3, 3, 3, 3)
    out = fill_hole(punch(t, h.cells()), chessboard(), HoleSpec((h,)))
    assert out == t and diff_mask(punch(t, h.cells()), out) == set(h.cells())


def test_damaged_context():
    rows = [[0] * 4 + [1] * 5 for _ in range(9)]
    t = PatchTiling.from_rows(rows)
    h = Region(3, 3, 3, 3)
    with pytest.raises(ContextDamaged):
        fill_hole(punch(t, h.cells()), chessboard(), HoleSpec((h,)))


def test_robust_example2_hole_confined():
    rs = robustify(example2(3), 2)
    good = induced_tiling(rs, fill_region(example2(3), Region(0, 0, 24, 24)))
    h = Region(9, 9, 4, 4)
    bad = punch(good, h.cells())
    out = fill_hole(bad, rs.tileset, HoleSpec((h,)))
    assert out == good
    assert diff_mask(bad, out) <= set(neighborhood(h, 2).cells())


def test_two_holes_far_apart_and_close():
    t = solid(40, 12, 1)
    a, b = Region(2, 2, 2, 2), Region(30, 5, 3, 3)
    bad = punch(punch(t, a.cells()), b.cells())
    assert fill_hole(bad, chessboard(), HoleSpec((a, b))) == t
    c = Region(6, 2, 2, 2)
    bad = punch(punch(t, a.cells()), c.cells())
    assert fill_hole(bad, chessboard(), HoleSpec((a, c))) == t


def test_percolation_examples():
    r = Region(0, 0, 64, 64)
    t = solid(64, 64, 1)
    empty = DirtySet(r, frozenset())
    res = percolation_patch(empty, t, island_schedule(3), chessboard())
    assert res.tiling == t and not res.changed.any()
    one = DirtySet(r, frozenset({(10, 10)}))
    res = percolation_patch(one, punch(t, [(10, 10)]), island_schedule(3), chessboard())
    assert res.tiling == t and res.changed.sum() == 1
    assert res.touched.sum() == 25


def test_percolation_changes_stay_in_squares():
    r = Region(0, 0, 128, 128)
    E = sample_bernoulli(0.002, r, 3)
    t = punch(solid(128, 128, 0), E.points)
    res = percolation_patch(E, t, island_schedule(3), chessboard())
    assert not (res.changed & ~res.touched).any()
    assert check_patch(res.tiling, chessboard()) == []


def test_percolation_residual():
    r = Region(0, 0, 16, 16)
    E = DirtySet(r, frozenset((x, 0) for x in range(16)))
    with pytest.raises(ResidualErrors):
        percolation_patch(E, punch(solid(16, 16), E.points), Schedule((1,), (2,)))


def test_correct_errors_examples():
    rs = robustify(chessboard(), 2)
    s = Schedule((1,), (13,))
    t = solid(30, 30)
    assert correct_errors(t, s, rs) == t
    bad = punch(t, [(15, 15)])
    out = correct_errors(bad, s, rs)
    assert out == t and diff_mask(bad, out) <= set(Region(13, 13, 5, 5).cells())


def test_correct_errors_two_islands_independent():
    rs = robustify(chessboard(), 2)
    t = solid(200, 40, 1)
    holes = [(20, 20), (120, 20)]
    bad = punch(t, holes)
    out = correct_errors(bad, Schedule((1,), (13,)), rs)
    assert out == t and diff_mask(bad, out) == set(holes)
    assert correct_errors(out, Schedule((1,), (13,)), rs, DirtySet(t.region, frozenset(holes))) == out


def test_correct_errors_requires_wide_beta():
    rs = robustify(chessboard(), 2)
    with pytest.raises(ValueError):
        correct_errors(solid(10, 10), Schedule((1,), (2,)), rs)
