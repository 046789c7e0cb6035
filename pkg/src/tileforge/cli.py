"""The ``tileforge`` command line.

Every subcommand prints its primary result on stdout.  With ``--out PATH`` the
artifact (json, ppm or csv) is written to PATH and a run manifest to
PATH.manifest.json; without it the manifest goes to stderr as one JSON line.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from . import islands as isl
from . import macro_sim as ms
from . import patcher as pt
from . import rs_field as rs
from . import substitution as sb
from . import tile_compiler as tc
from . import wang_core as wc
from . import zoom_geometry as zg

FORMATS = ("json", "ppm", "csv")
# flags that never change results and are left out of the manifest
_VOLATILE = {"out", "jobs", "func", "command", "action"}


class UsageError(Exception):
    pass


@dataclass
class Result:
    text: str
    json: object = None
    csv: str | None = None
    ppm: bytes | None = None
    inputs: list = field(default_factory=list)
    sidecars: dict = field(default_factory=dict)  # suffix -> JSON object written next to --out

    def artifact(self, fmt: str) -> bytes:
        if fmt == "json":
            obj = self.json if self.json is not None else {"result": self.text}
            return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()
        if fmt == "csv":
            if self.csv is None:
                raise UsageError("this command has no csv output")
            return self.csv.encode()
        if self.ppm is None:
            raise UsageError("this command has no ppm output")
        return self.ppm


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _read_json(path: str, res_inputs: list):
    with open(path, "rb") as fh:
        raw = fh.read()
    res_inputs.append((os.path.basename(path), _sha256(raw)))
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise wc.MalformedSpec(f"{path}: {exc}") from None


def manifest(args: argparse.Namespace, res: Result, outputs: dict) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in _VOLATILE}
    return {
        "subcommand": " ".join(x for x in (args.command, getattr(args, "action", None)) if x),
        "flags": flags,
        "seed": args.seed,
        "inputs": dict(sorted(res.inputs)),
        "outputs": outputs,
        "version": __version__,
    }


def _tileset(args, inputs) -> wc.TileSet:
    if getattr(args, "file", None):
        return wc.validate_tileset(_read_json(args.file, inputs))
    return wc.builtin(args.set)


# ---------------------------------------------------------------- handlers


def cmd_tileset(args) -> Result:
    res = Result("")
    ts = _tileset(args, res.inputs)
    res.json = wc.tileset_to_json(ts)
    if args.action == "show":
        res.text = json.dumps(res.json, sort_keys=True)
    else:
        res.text = f"OK {ts.name}: {len(ts.tiles)} tiles, {len(ts.colors)} colors"
    return res


def cmd_tile(args) -> Result:
    res = Result("")
    ts = _tileset(args, res.inputs)
    if args.action == "fill":
        r = wc.Region(0, 0, args.w, args.h)
        if args.count:
            c = wc.fill_region(ts, r, mode="count", cap=args.cap)
            res.text = str(c)
            res.json = {"count": c.value, "at_least": c.at_least}
            return res
        p = wc.fill_region(ts, r)
        res.text = json.dumps(p.rows())
        res.json = wc.patch_to_json(p)
        res.ppm = wc.render_ppm(p, args.scale)
        return res
    if args.action == "check":
        p = wc.patch_from_json(_read_json(args.patch, res.inputs))
        v = wc.check_patch(p, ts)
        res.json = {"violations": [[list(x.cell), list(x.neighbor), x.side] for x in v]}
        res.text = "VALID" if not v else f"INVALID {len(v)}"
        res.csv = "x,y,nx,ny,side\n" + "".join(f"{a[0]},{a[1]},{b[0]},{b[1]},{s}\n" for a, b, s in res.json["violations"])
        if v:
            raise _Domain(res)
        return res
    if args.action == "torus":
        p = wc.torus_tiling(ts, args.m)
        res.text = json.dumps(p.rows())
        res.json = wc.patch_to_json(p)
        res.ppm = wc.render_ppm(p, args.scale)
        return res
    if args.action == "period":
        m = wc.min_torus_period(ts, args.max)
        res.text = "none" if m is None else str(m)
        res.json = {"period": m}
        return res
    lo, hi = wc.density_bounds(ts, args.n)
    res.text = f"{lo} {hi}"
    res.json = {"min": str(lo), "max": str(hi)}
    return res


class _Domain(Exception):
    """Domain failure that still carries a result to report."""

    def __init__(self, res: Result):
        super().__init__(res.text)
        self.res = res


def cmd_simcheck(args) -> Result:
    res = Result("")
    if args.action == "example2":
        sm = ms.example2_map(args.n)
    elif args.action == "example1":
        sm = ms.example1_map(args.n)
    else:
        sm = ms.simulation_from_json(_read_json(args.sim, res.inputs))
    rep = ms.check_simulation(sm, args.window, args.node_cap)
    res.json = {
        "injective": rep.injective,
        "match_equivalent": rep.match_equivalent,
        "unique_splitting": rep.unique_splitting,
        "tilings_checked": rep.tilings_checked,
        "detail": rep.detail,
    }
    res.text = f"injective={rep.injective} match_equivalent={rep.match_equivalent} unique={rep.unique_splitting}"
    return res


def _machine(args, inputs) -> tc.CheckerMachine:
    bundled = tc.bundled_machines()
    if args.machine in bundled:
        m = bundled[args.machine]
    elif os.path.exists(args.machine):
        m = tc.machine_from_json(_read_json(args.machine, inputs))
    else:
        raise wc.UnknownName(f"unknown machine {args.machine!r}")
    if args.letters:
        rule = {"chessboard": sb.chessboard_rule, "thue_morse": sb.thue_morse_rule}[args.letters]()
        m = tc.add_substitution_layer(m, rule, args.iterations, args.N)
    return m


def cmd_compile(args) -> Result:
    res = Result("")
    m = _machine(args, res.inputs)
    if args.action == "smallest":
        n = tc.smallest_feasible_N(m, args.k)
        res.text = str(n)
        res.json = {"N": n}
        return res
    lay = tc.plan_layout(args.N, args.k, m)
    cts = tc.compile(m, lay)
    if args.action == "build":
        res.json = wc.tileset_to_json(cts.tileset)
        res.sidecars["layout"] = {"layout": lay.to_json(), "machine": m.to_json()}
        res.text = f"{len(cts.tileset.tiles)} tiles, zone {lay.zone}"
        return res
    if args.action == "assemble":
        mt = tc.assemble_macrotile(cts, args.sides, args.letter)
        res.json = wc.patch_to_json(mt.body)
        res.ppm = wc.render_ppm(mt.body, args.scale)
        res.text = "ACCEPT"
        return res
    # accepted side quadruples
    rows = []
    for q in itertools.product(range(2**args.k), repeat=4):
        sides = [format(v, f"0{args.k}b") if args.k else "" for v in q]
        try:
            tc.assemble_macrotile(cts, sides, 0 if m.letters else None)
            ok = True
        except (tc.RejectedByProgram, tc.TimeBudgetExceeded):
            ok = False
        rows.append((sides, ok))
    res.json = {"accepted": [s for s, ok in rows if ok]}
    res.csv = "left,right,top,bottom,accepted\n" + "".join(",".join(s) + f",{int(ok)}\n" for s, ok in rows)
    res.text = f"{sum(ok for _, ok in rows)}/{len(rows)} accepted"
    return res


def _rule(name: str) -> sb.SubstitutionRule:
    rules = {"thue_morse": sb.thue_morse_rule, "chessboard": sb.chessboard_rule}
    if name not in rules:
        raise wc.UnknownName(f"unknown rule {name!r}")
    return rules[name]()


def cmd_subst(args) -> Result:
    res = Result("")
    if args.action == "lemma":
        bad = [n for n in range(0, args.n + 1) if not sb.folklore_lemma_holds(n)]
        res.text = "PASS" if not bad else f"FAIL {bad}"
        res.json = {"n_max": args.n, "failures": bad}
        if bad:
            raise _Domain(res)
        return res
    if args.action == "sweep":
        fr = sb.tm_mismatch_fractions(args.size, args.radius)
        res.json = {f"{dx},{dy}": v for (dx, dy), v in sorted(fr.items())}
        res.csv = "dx,dy,mismatch\n" + "".join(f"{dx},{dy},{v:.8f}\n" for (dx, dy), v in sorted(fr.items()))
        res.text = f"min={min(fr.values()):.6f} max={max(fr.values()):.6f}"
        return res
    if args.action == "iterate":
        p = sb.iterate(_rule(args.rule), args.letter, args.n)
        res.json = {"cells": p.cells.tolist()}
        res.ppm = sb.render_pattern_ppm(p)
        res.text = "\n".join("".join(str(v) for v in row) for row in p.cells[::-1].tolist())
        return res
    cells = _read_json(args.pattern, res.inputs)
    p = sb.LetterPattern(np.asarray(cells["cells"], dtype=np.int64))
    out = sb.check_compatible(p, _rule(args.rule), args.depth)
    if isinstance(out, sb.Certificate):
        res.text = "COMPATIBLE"
        res.json = {"offsets": [list(o) for o in out.offsets], "chain": [x.cells.tolist() for x in out.chain]}
        return res
    res.text = "INCOMPATIBLE"
    res.json = {"depth": out.depth, "nodes": out.nodes}
    raise _Domain(res)


def cmd_rs(args) -> Result:
    res = Result("")
    if args.action == "roundtrip":
        rep = rs.roundtrip(args.t, args.n, args.D, args.trials, args.seed)
        res.json = {"trials": rep.trials, "stream_mismatches": rep.stream_mismatches, "decode_failures": rep.decode_failures}
        res.text = "OK" if rep.ok else "FAIL"
        if not rep.ok:
            raise _Domain(res)
        return res
    if args.action == "checksums":
        f = rs.build_field(args.t)
        vals = rs.from_hex(f, args.data)
        code = rs.make_code(f, len(vals), args.D)
        cs = rs.rs_checksums(code, vals)
        res.text = rs.to_hex(f, cs)
        res.json = {"code": code.to_json(), "checksums": res.text}
        return res
    if args.action == "decode":
        f = rs.build_field(args.t)
        vals = rs.from_hex(f, args.data)
        erased = set(args.erased)
        code = rs.make_code(f, len(vals), args.D)
        known = {i: v for i, v in enumerate(vals) if i not in erased}
        out = rs.rs_erasure_decode(code, known, rs.from_hex(f, args.checksums))
        res.text = rs.to_hex(f, out)
        res.json = {"values": res.text}
        return res
    Ns = [int(x) for x in args.Ns.split(",")]
    eps = [float(x) for x in args.eps.split(",")]
    rep = rs.validate_family_parameters(Ns, eps, args.target)
    res.json = {"per_level": list(rep.per_level), "eps_sum": rep.eps_sum, "ok": rep.ok}
    res.text = "OK" if rep.ok else "FAIL"
    return res


def _schedule(args) -> isl.Schedule:
    if args.schedule == "island":
        return isl.island_schedule(args.K)
    return isl.bi_island_schedule(args.K, args.Q, args.c)


def cmd_islands(args) -> Result:
    res = Result("")
    s = _schedule(args)
    if args.action == "schedule":
        rep = isl.validate_schedule(s)
        res.json = {
            "alpha": list(s.alpha),
            "beta": list(s.beta),
            "inequality": list(rep.inequality),
            "growth_ratio": [str(x) for x in rep.growth_ratio],
            "ok": rep.ok,
        }
        res.csv = "k,alpha,beta\n" + "".join(f"{k + 1},{a},{b}\n" for k, (a, b) in enumerate(zip(s.alpha, s.beta)))
        res.text = "OK" if rep.ok else "FAIL"
        return res
    win = wc.Region(0, 0, args.size, args.size)
    if args.action == "mc":
        st = isl.monte_carlo_sparsity(args.eps, s, win, args.trials, args.seed, args.jobs, args.policy)
        bad = sum(not t.sound for t in st.trials)
        res.csv = st.csv()
        res.json = {
            "cleaned": st.cleaned,
            "trials": len(st.trials),
            "unsound": bad,
            "survival": st.survival(),
            "rows": [[t.trial, t.seed, t.cleaned, t.max_rank, t.survivors] for t in st.trials],
        }
        res.text = f"cleaned {st.cleaned}/{len(st.trials)} unsound {bad}"
        return res
    if args.dirty:
        E = isl.DirtySet.from_json(_read_json(args.dirty, res.inputs), args.policy)
    else:
        E = isl.sample_bernoulli(args.eps, win, args.seed, args.policy)
    d = isl.clean(E, s)
    errs = isl.check_decomposition(E, d)
    res.json = {
        "levels": d.levels,
        "islands": [[[list(p) for p in i.points] for i in rank] for rank in d.islands],
        "residual": sorted(list(p) for p in d.residual),
        "errors": errs,
    }
    res.csv = "rank,islands,remaining\n" + "".join(
        f"{k + 1},{len(d.islands[k])},{d.levels[k + 1]}\n" for k in range(s.K)
    )
    res.text = f"cleaned={d.cleaned} max_rank={d.max_rank} sound={not errs}"
    return res


def _mask_ppm(mask) -> bytes:
    h, w = mask.shape
    img = np.where(mask[::-1, :, None], np.array([220, 30, 30], np.uint8), np.array([250, 250, 250], np.uint8))
    return f"P6\n{w} {h}\n255\n".encode() + img.astype(np.uint8).tobytes()


def cmd_patch(args) -> Result:
    res = Result("")
    if args.action == "percolation":
        ts = wc.chessboard()
        s = isl.island_schedule(args.K)
        if args.tiling:
            t = wc.patch_from_json(_read_json(args.tiling, res.inputs))
            E = isl.DirtySet.from_json(_read_json(args.dirty, res.inputs)) if args.dirty else isl.DirtySet(t.region, frozenset(t.holes()))
        else:
            win = wc.Region(0, 0, args.size, args.size)
            E = isl.sample_bernoulli(args.eps, win, args.seed)
            t = wc.PatchTiling(win, tuple(wc.HOLE if p in E.points else 1 for p in win.cells()))
        out = pt.percolation_patch(E, t, s, ts)
        res.json = {"tiling": wc.patch_to_json(out.tiling), "changed_fraction": out.changed_fraction, "max_rank": out.max_rank}
        res.ppm = _mask_ppm(out.changed)
        res.text = out.stats_line()
        return res
    ts = _tileset(args, res.inputs)
    if args.action == "holes":
        t = wc.patch_from_json(_read_json(args.tiling, res.inputs))
        holes = tuple(wc.Region(*args.hole[i:i + 4]) for i in range(0, len(args.hole), 4))
        out = pt.fill_hole(t, ts, pt.HoleSpec(holes, args.c1, args.c2))
        changed = pt.diff_mask(t, out)
        res.json = {"tiling": wc.patch_to_json(out), "changed": sorted(list(p) for p in changed)}
        res.ppm = wc.render_ppm(out, args.scale)
        res.text = f"changed={len(changed)}"
        return res
    # correct: a clean base tiling is robustified, damaged at random and repaired
    rset = pt.robustify(ts, args.r)
    n = args.size
    base = wc.fill_region(ts, wc.Region(0, 0, n + 2 * args.r, n + 2 * args.r))
    good = pt.induced_tiling(rset, base)
    good = wc.PatchTiling(wc.Region(0, 0, n, n), good.cells)
    E = isl.sample_bernoulli(args.eps, good.region, args.seed)
    bad = good.replace({p: wc.HOLE for p in E.points})
    s = isl.Schedule(tuple(args.alpha), tuple(args.beta))
    out = pt.correct_errors(bad, s, rset, E)
    v = wc.check_patch(out, rset.tileset)
    res.json = {"tiling": wc.patch_to_json(out), "holes": len(E.points), "violations": len(v)}
    res.ppm = wc.render_ppm(rset.project(out), args.scale)
    res.text = f"holes={len(E.points)} violations={len(v)} restored={out == good}"
    return res


def _zsched(args) -> zg.ZoomSchedule:
    if args.kind == "fixed":
        return zg.ZoomSchedule.fixed(args.N)
    return zg.ZoomSchedule.powers(args.Q, args.c)


def cmd_zoom(args) -> Result:
    res = Result("")
    sch = _zsched(args)
    if args.action == "values":
        rows = [(k,) + zg.zoom_values(sch, k) for k in range(args.kmax + 1)]
        res.json = [{"k": k, "N_k": str(n), "L_k": str(l)} for k, n, l in rows]
        res.csv = "k,N_k,L_k\n" + "".join(f"{k},{n},{l}\n" for k, n, l in rows)
        res.text = "\n".join(json.dumps(r, sort_keys=True) for r in res.json)
        return res
    if args.action == "delegate":
        mc = zg.MacroCoord(args.k, args.i, args.j, args.origin)
        b = zg.delegated_bit(sch, mc)
        res.json = {"bit": b}
        res.text = json.dumps(res.json)
        return res
    b = zg.consciousness_budget(sch, args.k, args.D)
    res.json = {"sizes": b.sizes, "total": b.total, "budget": b.budget, "fits": b.fits}
    res.text = json.dumps(res.json, sort_keys=True)
    return res


# ---------------------------------------------------------------- parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for all randomness (default 0)")
    p.add_argument("--out", default=argparse.SUPPRESS, help="artifact path; a manifest is written next to it")
    p.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS, help="artifact format (default json)")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker threads (results do not depend on it)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="tileforge", parents=[common], description="Wang tile workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def group(name, func, help_):
        g = sub.add_parser(name, help=help_)
        gs = g.add_subparsers(dest="action", required=True)
        g.set_defaults(func=func)
        return gs

    def leaf(gs, name, help_=None):
        return gs.add_parser(name, parents=[common], help=help_)

    def set_args(p):
        p.add_argument("--set", default="chessboard", help="bundled tile set, e.g. example2(3)")
        p.add_argument("--file", help="tile set JSON (overrides --set)")

    gs = group("tileset", cmd_tileset, "show or validate tile sets")
    for a in ("show", "validate"):
        set_args(leaf(gs, a))

    gs = group("tile", cmd_tile, "fill, check and analyse tilings")
    p = leaf(gs, "fill")
    set_args(p)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.add_argument("--cap", type=int, default=10**6)
    p.add_argument("--scale", type=int, default=8)
    p = leaf(gs, "check")
    set_args(p)
    p.add_argument("--patch", required=True)
    p = leaf(gs, "torus")
    set_args(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--scale", type=int, default=8)
    p = leaf(gs, "period")
    set_args(p)
    p.add_argument("--max", type=int, default=8)
    p = leaf(gs, "density")
    set_args(p)
    p.add_argument("--n", type=int, default=4)

    gs = group("simcheck", cmd_simcheck, "check simulation conditions")
    for a in ("example2", "example1", "file"):
        p = leaf(gs, a)
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--window", type=int, default=2)
        p.add_argument("--node-cap", type=int, default=100_000)
        if a == "file":
            p.add_argument("--sim", required=True)

    gs = group("compile", cmd_compile, "compile checker machines into tile sets")
    for a in ("build", "assemble", "accepted", "smallest"):
        p = leaf(gs, a)
        p.add_argument("--machine", default="EQ1", help="EQ1, REJECT-ALL, ACCEPT-ALL or a JSON file")
        p.add_argument("--N", type=int, default=16)
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--letters", choices=("chessboard", "thue_morse"))
        p.add_argument("--iterations", type=int, default=1)
        if a == "assemble":
            p.add_argument("--sides", nargs=4, required=True, metavar=("L", "R", "T", "B"))
            p.add_argument("--letter", type=int)
            p.add_argument("--scale", type=int, default=8)

    gs = group("subst", cmd_subst, "substitutions and Thue-Morse")
    p = leaf(gs, "lemma")
    p.add_argument("--n", type=int, default=16)
    p = leaf(gs, "sweep")
    p.add_argument("--size", type=int, default=4096)
    p.add_argument("--radius", type=int, default=8)
    p = leaf(gs, "iterate")
    p.add_argument("--rule", default="thue_morse")
    p.add_argument("--letter", type=int, default=0)
    p.add_argument("--n", type=int, default=3)
    p = leaf(gs, "compat")
    p.add_argument("--rule", default="thue_morse")
    p.add_argument("--pattern", required=True)
    p.add_argument("--depth", type=int, default=3)

    gs = group("rs", cmd_rs, "Reed-Solomon checksums")
    p = leaf(gs, "roundtrip")
    for name, d in (("--t", 8), ("--n", 20), ("--D", 6), ("--trials", 200)):
        p.add_argument(name, type=int, default=d)
    for a in ("checksums", "decode"):
        p = leaf(gs, a)
        p.add_argument("--t", type=int, default=8)
        p.add_argument("--D", type=int, default=6)
        p.add_argument("--data", required=True, help="hex values")
        if a == "decode":
            p.add_argument("--checksums", required=True)
            p.add_argument("--erased", type=int, nargs="*", default=[])
    p = leaf(gs, "family")
    p.add_argument("--Ns", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--target", type=float, default=0.01)

    gs = group("islands", cmd_islands, "island decompositions")
    for a in ("schedule", "mc", "clean"):
        p = leaf(gs, a)
        p.add_argument("--schedule", choices=("island", "bi"), default="island")
        p.add_argument("--K", type=int, default=4)
        p.add_argument("--Q", type=int, default=16)
        p.add_argument("--c", type=float, default=2.5)
        if a != "schedule":
            p.add_argument("--eps", type=float, default=0.0005)
            p.add_argument("--size", type=int, default=512)
            p.add_argument("--policy", choices=(isl.CLEAN, isl.WINDOWED), default=isl.CLEAN)
        if a == "mc":
            p.add_argument("--trials", type=int, default=50)
        if a == "clean":
            p.add_argument("--dirty")

    gs = group("patch", cmd_patch, "repair damaged tilings")
    p = leaf(gs, "percolation")
    p.add_argument("--tiling")
    p.add_argument("--dirty")
    p.add_argument("--eps", type=float, default=0.001)
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--K", type=int, default=4)
    p = leaf(gs, "holes")
    set_args(p)
    p.add_argument("--tiling", required=True)
    p.add_argument("--hole", type=int, nargs="+", required=True, metavar="X0 Y0 W H")
    p.add_argument("--c1", type=int, default=2)
    p.add_argument("--c2", type=int, default=3)
    p.add_argument("--scale", type=int, default=8)
    p = leaf(gs, "correct")
    set_args(p)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--eps", type=float, default=0.002)
    p.add_argument("--alpha", type=int, nargs="+", default=[1, 20])
    p.add_argument("--beta", type=int, nargs="+", default=[13, 400])
    p.add_argument("--scale", type=int, default=4)

    gs = group("zoom", cmd_zoom, "zoom schedule arithmetic")
    for a in ("values", "delegate", "budget"):
        p = leaf(gs, a)
        p.add_argument("--kind", choices=("fixed", "powers"), default="powers")
        p.add_argument("--N", type=int, default=4)
        p.add_argument("--Q", type=int, default=16)
        p.add_argument("--c", type=float, default=2.5)
        if a == "values":
            p.add_argument("--kmax", type=int, default=4)
        else:
            p.add_argument("--k", type=int, default=1)
        if a == "delegate":
            p.add_argument("--i", type=int, default=0)
            p.add_argument("--j", type=int, default=0)
            p.add_argument("--origin", type=int, default=0)
        if a == "budget":
            p.add_argument("--D", type=int, default=6)
    return parser


def _defaults(args: argparse.Namespace) -> argparse.Namespace:
    for k, v in (("seed", 0), ("out", None), ("format", "json"), ("jobs", 1)):
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return args


def _finish(args, res: Result) -> None:
    outputs = {}
    if args.out:
        data = res.artifact(args.format)
        with open(args.out, "wb") as fh:
            fh.write(data)
        outputs[os.path.basename(args.out)] = _sha256(data)
        for suffix, obj in sorted(res.sidecars.items()):
            side = (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()
            with open(f"{args.out}.{suffix}.json", "wb") as fh:
                fh.write(side)
            outputs[f"{os.path.basename(args.out)}.{suffix}.json"] = _sha256(side)
    print(res.text)
    man = json.dumps(manifest(args, res, outputs), sort_keys=True, default=_jsonable)
    if args.out:
        with open(args.out + ".manifest.json", "w") as fh:
            fh.write(man + "\n")
    else:
        print(man, file=sys.stderr)


def _jsonable(o):
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(type(o).__name__)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        args = _defaults(args)
        res = args.func(args)
        _finish(args, res)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except _Domain as exc:
        _finish(args, exc.res)
        return 1
    except (wc.TilingError, ValueError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
