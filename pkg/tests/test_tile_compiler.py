import itertools
import json
from pathlib import Path

import pytest

from tileforge.macro_sim import lift, macro_colors
from tileforge.substitution import chessboard_rule, iterate, thue_morse_rule
from tileforge.tile_compiler import (
    LayoutInfeasible,
    RejectedByProgram,
    TimeBudgetExceeded,
    ZoomMismatch,
    CheckerMachine,
    accept_all,
    add_substitution_layer,
    assemble_macrotile,
    compile,
    decode,
    encode,
    eq1,
    letter_projection,
    machine_from_json,
    plan_layout,
    reject_all,
    run_machine,
    simulate_check_compiled,
    simulation_map,
    smallest_feasible_N,
)
from tileforge.wang_core import PatchTiling, Tile, TileSet, check_patch

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def eq1_16():
    m = eq1()
    return compile(m, plan_layout(16, 1, m))


def two_tiles():
    return TileSet("rho", ("0", "1"), (Tile(0, 0, 0, 0, "zero"), Tile(1, 1, 1, 1, "one")))


def test_layout_matches_golden():
    lay = plan_layout(16, 1, eq1())
    assert lay.to_json() == json.loads((GOLDEN / "layout_eq1_N16_k1.json").read_text())
    assert len(lay.wires) == 4 and lay.zone[2:] == (8, 6)
    assert lay.wires_disjoint()


def test_layout_infeasible():
    with pytest.raises(LayoutInfeasible):
        plan_layout(4, 3, eq1())
    with pytest.raises(LayoutInfeasible):
        plan_layout(13, 1, eq1())


@pytest.mark.parametrize("k", [1, 2])
def test_layouts_stay_inside_and_disjoint(k):
    m = eq1()
    n = smallest_feasible_N(m, k)
    for N in (n, n + 1, n + 5):
        lay = plan_layout(N, k, m)
        assert lay.wires_disjoint()
        cells = [c for w in lay.wires for c in w.path]
        assert all(0 <= x < N and 0 <= y < N for x, y in cells)
        for w in lay.wires:
            # consecutive cells are grid neighbours and the path ends under the zone
            assert all(abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1 for a, b in zip(w.path, w.path[1:]))
            assert w.path[-1][1] == lay.zone[1] - 1


def test_eq1_accepts_exactly_equal_quadruples(eq1_16):
    acc = []
    for q in itertools.product("01", repeat=4):
        try:
            mt = assemble_macrotile(eq1_16, q)
        except RejectedByProgram:
            continue
        assert check_patch(mt.body, eq1_16.tileset) == []
        acc.append(q)
    assert acc == [("0",) * 4, ("1",) * 4]


def test_rejected_quadruple(eq1_16):
    with pytest.raises(RejectedByProgram):
        assemble_macrotile(eq1_16, ["1", "0", "1", "1"])


def test_side_bits_are_centered(eq1_16):
    c0 = (16 - 1) // 2
    ids = eq1_16.color_ids
    for b in (0, 1):
        mt = assemble_macrotile(eq1_16, [str(b)] * 4)
        names = {v: k for k, v in ids.items()}
        for side in macro_colors(mt):
            payload = [eval(names[c])[1] for c in side]  # (coords, payload, letter)
            assert payload == [b if i == c0 else 0 for i in range(16)]


def test_wire_cells_carry_equal_bits(eq1_16):
    mt = assemble_macrotile(eq1_16, ["1"] * 4)
    lay = eq1_16.layout
    for w in lay.wires:
        for x, y in w.path:
            dec = decode(eq1_16, mt.at(x, y))
            assert dec[2][0] == "wire" and dec[2][2] == 1


def test_decode_encode_identity(eq1_16):
    seen = set()
    for i in range(len(eq1_16.tileset.tiles)):
        d = decode(eq1_16, i)
        assert encode(eq1_16, d) == i
        seen.add(d)
    assert len(seen) == len(eq1_16.tileset.tiles)


def test_reject_all_is_not_total():
    m = reject_all()
    cts = compile(m, plan_layout(16, 1, m))
    for q in itertools.product("01", repeat=4):
        with pytest.raises(RejectedByProgram):
            assemble_macrotile(cts, q)
    rep = simulate_check_compiled(cts, two_tiles())
    assert not rep.total and "not total" in rep.detail


def test_time_budget():
    slow = CheckerMachine("SLOW", ("a", "acc"), "a", "acc", ((("a", "0"), ("a", "0", 0)), (("a", "1"), ("a", "1", 0))))
    with pytest.raises(TimeBudgetExceeded):
        run_machine(slow, "0000", 8, 6)


def test_simulation_conditions(eq1_16):
    rep = simulate_check_compiled(eq1_16, two_tiles())
    assert rep.total and rep.injective and rep.match_equivalent
    one = TileSet("one", ("0",), (Tile(0, 0, 0, 0, "zero"),))
    assert simulate_check_compiled(eq1_16, one).match_equivalent


def test_lift_two_by_two(eq1_16):
    sm = simulation_map(eq1_16, two_tiles())
    for cells in ([[0, 0], [0, 0]], [[1, 1], [1, 1]]):
        tau = lift(sm, PatchTiling.from_rows(cells))
        assert tau.w == 32 and check_patch(tau, eq1_16.tileset) == []


@pytest.mark.parametrize("k", [0, 1, 2])
def test_bundled_machines_assemble_cleanly(k):
    for m in (eq1(), accept_all()):
        n = smallest_feasible_N(m, k)
        cts = compile(m, plan_layout(n, k, m))
        ok = 0
        for q in itertools.product(range(2**k), repeat=4):
            sides = [format(v, f"0{k}b") if k else "" for v in q]
            try:
                mt = assemble_macrotile(cts, sides)
            except RejectedByProgram:
                continue
            assert check_patch(mt.body, cts.tileset) == []
            ok += 1
        # EQ1 wants all 4k tape bits equal: two quadruples, or the single empty one when k = 0
        expected = (2 if k else 1) if m.name == "EQ1" else 2 ** (4 * k)
        assert ok == expected


def test_compile_is_deterministic():
    m = eq1()
    a = compile(m, plan_layout(14, 1, m))
    b = compile(m, plan_layout(14, 1, m))
    assert a.tileset == b.tileset


@pytest.mark.parametrize("rule,iters", [(chessboard_rule(), 1), (thue_morse_rule(), 2)])
def test_letter_layer_projects_to_blocks(rule, iters):
    m = add_substitution_layer(accept_all(), rule, iters)
    N = rule.m**iters
    cts = compile(m, plan_layout(N, 0, m))
    rho = TileSet("letters", ("c",), tuple(Tile(0, 0, 0, 0, str(a)) for a in range(2)))
    for a in range(2):
        mt = assemble_macrotile(cts, ["", "", "", ""], a)
        assert letter_projection(cts, mt) == iterate(rule, a, iters).tolist()
    rep = simulate_check_compiled(cts, rho)
    assert rep.report.ok


def test_zoom_mismatch():
    with pytest.raises(ZoomMismatch):
        add_substitution_layer(accept_all(), thue_morse_rule(), 2, N=8)
    m = add_substitution_layer(accept_all(), thue_morse_rule(), 2)
    with pytest.raises(ZoomMismatch):
        plan_layout(8, 0, m)


def test_machine_json_roundtrip():
    m = eq1()
    assert machine_from_json(json.loads(json.dumps(m.to_json()))) == m
