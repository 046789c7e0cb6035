"""Self-referential programs built with the GetText / Execute construction.

A program text is a DATA line holding a quoted copy of the code, followed by
the code itself.  GETTEXT rebuilds the whole text from that line, so every
program can read itself.  The tiny language has four statements::

    X = GETTEXT
    X = APPLY <transformer json> X
    EXEC X
    # comment

EXEC runs a program text recursively, or a machine description (JSON object)
on the empty tape for a fixed number of steps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .tile_compiler import BLANK, CheckerMachine, machine_from_json


class ProgramError(Exception):
    pass


def _compose(code: str) -> str:
    return "DATA " + json.dumps(code) + "\n" + code


def get_text(text: str) -> str:
    first, _, _ = text.partition("\n")
    if not first.startswith("DATA "):
        raise ProgramError("program must start with a DATA line")
    return _compose(json.loads(first[5:]))


def apply_transformer(pi: Mapping, text: str) -> str:
    kind = pi.get("kind")
    if kind == "identity":
        return text
    if kind == "append_comment":
        return text + "# " + str(pi["comment"]) + "\n"
    if kind == "constant":
        q = pi["program"]
        return q if isinstance(q, str) else json.dumps(q, sort_keys=True)
    raise ProgramError(f"unknown transformer {kind!r}")


def fixed_point_program(pi: Mapping) -> str:
    """The text p with p = Execute(pi(GetText())) built in."""
    apply_transformer(pi, "")  # reject unknown kinds early
    code = "X = GETTEXT\nX = APPLY " + json.dumps(pi, sort_keys=True) + " X\nEXEC X\n"
    return _compose(code)


@dataclass(frozen=True)
class TapeResult:
    tape: str
    head: int
    state: str
    halted: bool
    steps: int


def run_on_empty(m: CheckerMachine, steps: int) -> TapeResult:
    """Run on an unbounded blank tape; missing transitions halt."""
    tape: dict[int, str] = {}
    pos, q = 0, m.start
    done = 0
    halted = q == m.accept
    while done < steps and not halted:
        sym = tape.get(pos, BLANK)
        tr = m.lookup(q, sym, BLANK)
        if tr is None:
            halted = True
            break
        q, tape[pos], mv = tr[0], tr[1], tr[2]
        pos += mv
        done += 1
        halted = q == m.accept
    if tape:
        lo, hi = min(tape), max(tape)
        s = "".join(tape.get(i, BLANK) for i in range(lo, hi + 1)).strip(BLANK)
    else:
        s = ""
    return TapeResult(s, pos, q, halted, done)


@dataclass(frozen=True)
class ExecResult:
    value: TapeResult | None
    diverged: bool
    depth: int


def execute(text: str, fuel: int = 64, steps: int = 1000) -> ExecResult:
    """Interpret a program text; recursion deeper than ``fuel`` counts as divergence."""
    depth = 0
    while True:
        if depth >= fuel:
            return ExecResult(None, True, depth)
        stripped = text.lstrip()
        if stripped.startswith("{"):
            m = machine_from_json(json.loads(stripped))
            return ExecResult(run_on_empty(m, steps), False, depth)
        regs: dict[str, str] = {}
        target = None
        for line in text.splitlines()[1:]:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("EXEC "):
                target = regs[line[5:].strip()]
                break
            name, eq, rhs = line.partition("=")
            if not eq:
                raise ProgramError(f"bad statement {line!r}")
            name, rhs = name.strip(), rhs.strip()
            if rhs == "GETTEXT":
                regs[name] = get_text(text)
            elif rhs.startswith("APPLY "):
                body = rhs[6:]
                arg = body.rsplit(" ", 1)
                regs[name] = apply_transformer(json.loads(arg[0]), regs[arg[1]])
            else:
                raise ProgramError(f"bad statement {line!r}")
        if target is None:
            return ExecResult(None, False, depth)
        text = target
        depth += 1
