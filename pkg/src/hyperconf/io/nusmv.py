"""NuSMV emission of symbolic transition systems.

Uses the INIT/TRANS constraint style: every guarded direction becomes one
parenthesised TRANS disjunct that fixes the next value of every variable.
"""
from __future__ import annotations

import re

from .. import boolexpr as bx
from ..errors import Deadlock
from ..model import SymbolicTS

DIALECT = "NuSMV 2.x, INIT/TRANS constraint style"

NUSMV_KEYWORDS = frozenset("""
    MODULE DEFINE MDEFINE CONSTANTS VAR IVAR FROZENVAR INIT TRANS INVAR SPEC CTLSPEC LTLSPEC
    PSLSPEC COMPUTE NAME INVARSPEC FAIRNESS JUSTICE COMPASSION ISA ASSIGN CONSTRAINT SIMPWFF
    CTLWFF LTLWFF PSLWFF COMPWFF IN MIN MAX MIRROR PRED PREDICATES process array of boolean
    integer real word word1 bool signed unsigned extend resize sizeof uwconst swconst EX AX EF
    AF EG AG E F O G H X Y Z A U S V T BU EBF ABF EBG ABG case esac mod next init union in xor
    xnor self TRUE FALSE count abs max min typeof
""".split())


def sanitize(name: str) -> str:
    s = re.sub(r"[^A-Za-z0-9_]", "_", name)
    s = re.sub(r"_+", "_", s).rstrip("_")
    if not s or s[0].isdigit() or s in NUSMV_KEYWORDS:
        s = "v_" + s
    return s


def identifier_map(names) -> dict:
    """Deterministic, collision-free NuSMV identifiers for ``names`` in order."""
    out = {}
    used = set()
    for n in names:
        base = sanitize(n)
        ident = base
        k = 2
        while ident in used:
            ident = f"{base}_{k}"
            k += 1
        used.add(ident)
        out[n] = ident
    return out


def emit_expr(f: bx.BoolFormula, ids) -> str:
    if isinstance(f, bx.Var):
        return ids[f.name]
    if isinstance(f, bx.Const):
        return "TRUE" if f.value else "FALSE"
    if isinstance(f, bx.Not):
        return "!" + _wrap(f.arg, ids)
    if isinstance(f, bx.And):
        return " & ".join(_wrap(a, ids) for a in f.args)
    if isinstance(f, bx.Or):
        return " | ".join(_wrap(a, ids) for a in f.args)
    if isinstance(f, bx.Implies):
        return f"{_wrap(f.left, ids)} -> {_wrap(f.right, ids)}"
    if isinstance(f, bx.Iff):
        return f"{_wrap(f.left, ids)} <-> {_wrap(f.right, ids)}"
    raise TypeError(f"not a boolean formula: {f!r}")


def _wrap(f, ids) -> str:
    text = emit_expr(f, ids)
    return text if isinstance(f, (bx.Var, bx.Const)) else f"({text})"


def _update(x: str, pos, neg, ident: str) -> str:
    if x in pos:
        return f"next({ident})"
    if x in neg:
        return f"!next({ident})"
    return f"(next({ident}) <-> {ident})"


def emit_nusmv(t: SymbolicTS, stutter: bool = False) -> str:
    """Render ``t`` as a NuSMV module.

    A reachable deadlock raises ``Deadlock`` unless ``stutter`` is set, in
    which case an identity disjunct is added for states where no guard holds.
    """
    directions = [(d.name, d.guard, d.pos, d.neg) for d in t.directions]
    if stutter:
        idle = bx.neg(bx.disj(*(d.guard for d in t.directions)))
        if idle != bx.FALSE:
            directions.append(("stutter", idle, frozenset(), frozenset()))
    else:
        dead = t.find_deadlock()
        if dead is not None:
            raise Deadlock(dead)
    ids = identifier_map(t.vars)
    lines = [f"-- dialect: {DIALECT}"]
    renamed = [(x, i) for x, i in ids.items() if x != i]
    for src, new in sorted(dict(t.meta.get("renaming", {})).items()):
        lines.append(f"-- source proposition {src} renamed to {new}")
    for x, i in renamed:
        lines.append(f"-- identifier {x} emitted as {i}")
    lines.append("MODULE main")
    lines.extend(f"VAR {ids[x]} : boolean;" for x in t.vars)
    init = " & ".join(ids[x] if x in t.init else "!" + ids[x] for x in t.vars) or "TRUE"
    lines.append("INIT")
    lines.append(f"  {init}")
    lines.append("TRANS")
    for k, (name, guard, pos, neg) in enumerate(directions):
        parts = []
        if guard != bx.TRUE or not t.vars:
            parts.append(_wrap(guard, ids))
        parts.extend(_update(x, pos, neg, ids[x]) for x in t.vars)
        joiner = "  " if k == 0 else "  | "
        lines.append(f"{joiner}({' & '.join(parts)}) -- {name}")
    if not directions:
        lines.append("  FALSE")
    return "\n".join(lines) + "\n"
