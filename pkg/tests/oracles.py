"""Test-only reference implementations, written independently of the package code."""
from __future__ import annotations

import re

from hyperconf import boolexpr as bx
from hyperconf import ltl
from hyperconf.model import GuardedDirection, SymbolicTS


# ---------------------------------------------------------------------------
# LTL on finite prefixes: informative good-prefix rules over NNF


def prefix_satisfies(f: ltl.LtlBody, word, i: int = 0) -> bool:
    """Whether ``word[i:]`` settles the co-safety NNF body ``f`` as true.

    Positions past the end of the word are unknown, so atoms and negated
    atoms there are not satisfied.
    """
    n = len(word)
    if isinstance(f, ltl.BoolConst):
        return f.value
    if isinstance(f, ltl.Atom):
        return i < n and f.key in word[i]
    if isinstance(f, ltl.Not):
        assert isinstance(f.arg, ltl.Atom), "expects NNF"
        return i < n and f.arg.key not in word[i]
    if isinstance(f, ltl.And):
        return all(prefix_satisfies(a, word, i) for a in f.args)
    if isinstance(f, ltl.Or):
        return any(prefix_satisfies(a, word, i) for a in f.args)
    if isinstance(f, ltl.Next):
        return prefix_satisfies(f.arg, word, i + 1)
    if isinstance(f, ltl.Until):
        # past the word every position looks alike except for X-depth, so a
        # small overhang is enough
        for j in range(i, max(i, n) + 8):
            if prefix_satisfies(f.right, word, j):
                return True
            if not prefix_satisfies(f.left, word, j):
                return False
        return False
    raise TypeError(f"unexpected node {f!r}")


# ---------------------------------------------------------------------------
# LTL on lasso words u v^omega, full semantics on the raw AST


def lasso_satisfies(f: ltl.LtlBody, stem, loop) -> bool:
    word = list(stem) + list(loop)
    size = len(word)

    def nxt(i):
        return i + 1 if i + 1 < size else len(stem)

    def holds(g) -> list:
        if isinstance(g, ltl.BoolConst):
            return [g.value] * size
        if isinstance(g, ltl.Atom):
            return [g.key in word[i] for i in range(size)]
        if isinstance(g, ltl.Not):
            return [not v for v in holds(g.arg)]
        if isinstance(g, ltl.And):
            parts = [holds(a) for a in g.args]
            return [all(p[i] for p in parts) for i in range(size)]
        if isinstance(g, ltl.Or):
            parts = [holds(a) for a in g.args]
            return [any(p[i] for p in parts) for i in range(size)]
        if isinstance(g, ltl.Implies):
            a, b = holds(g.left), holds(g.right)
            return [(not a[i]) or b[i] for i in range(size)]
        if isinstance(g, ltl.Iff):
            a, b = holds(g.left), holds(g.right)
            return [a[i] == b[i] for i in range(size)]
        if isinstance(g, ltl.Next):
            a = holds(g.arg)
            return [a[nxt(i)] for i in range(size)]
        if isinstance(g, (ltl.Until, ltl.Eventually)):
            a = holds(g.left) if isinstance(g, ltl.Until) else [True] * size
            b = holds(g.right if isinstance(g, ltl.Until) else g.arg)
            out = list(b)
            changed = True
            while changed:  # least fixpoint
                changed = False
                for i in range(size):
                    if not out[i] and a[i] and out[nxt(i)]:
                        out[i] = changed = True
            return out
        if isinstance(g, ltl.Globally):
            a = holds(g.arg)
            out = list(a)
            changed = True
            while changed:  # greatest fixpoint
                changed = False
                for i in range(size):
                    if out[i] and not out[nxt(i)]:
                        out[i] = False
                        changed = True
            return out
        raise TypeError(f"unexpected node {g!r}")

    return holds(f)[0]


def dfa_accepts_lasso(d, stem, loop) -> bool:
    q = d.init
    seen = set()
    if q in d.accepting:
        return True
    for letter in stem:
        q = d.step(q, letter)
        if q in d.accepting:
            return True
    i = 0
    while (q, i) not in seen:
        seen.add((q, i))
        q = d.step(q, loop[i])
        if q in d.accepting:
            return True
        i = (i + 1) % len(loop)
    return False


# ---------------------------------------------------------------------------
# NuSMV re-parser for the INIT/TRANS subset we emit


_TOKEN = re.compile(r"\s*(<->|->|next|TRUE|FALSE|[A-Za-z_][A-Za-z0-9_]*|[!&|()])")


def _parse_expr(text: str) -> bx.BoolFormula:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad token at {text[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    k = 0

    def peek():
        return toks[k] if k < len(toks) else None

    def take(expected=None):
        nonlocal k
        t = toks[k]
        if expected and t != expected:
            raise ValueError(f"expected {expected}, found {t}")
        k += 1
        return t

    def iff():
        left = imp()
        while peek() == "<->":
            take()
            left = bx.Iff(left, imp())
        return left

    def imp():
        left = disj()
        if peek() == "->":
            take()
            return bx.Implies(left, imp())
        return left

    def disj():
        parts = [conj()]
        while peek() == "|":
            take()
            parts.append(conj())
        return parts[0] if len(parts) == 1 else bx.Or(tuple(parts))

    def conj():
        parts = [unary()]
        while peek() == "&":
            take()
            parts.append(unary())
        return parts[0] if len(parts) == 1 else bx.And(tuple(parts))

    def unary():
        if peek() == "!":
            take()
            return bx.Not(unary())
        if peek() == "(":
            take()
            e = iff()
            take(")")
            return e
        t = take()
        if t == "TRUE":
            return bx.TRUE
        if t == "FALSE":
            return bx.FALSE
        if t == "next":
            take("(")
            name = take()
            take(")")
            return bx.Var(("next", name))
        return bx.Var(t)

    e = iff()
    if k != len(toks):
        raise ValueError(f"trailing tokens {toks[k:]}")
    return e


def parse_nusmv(text: str) -> SymbolicTS:
    """Recover a symbolic system from emitted INIT/TRANS text.

    Each TRANS disjunct splits into a guard (conjuncts over current-state
    variables) and per-variable next-state constraints.
    """
    lines = [l for l in text.splitlines() if l.strip() and not l.lstrip().startswith("--")]
    assert lines[0] == "MODULE main"
    names = []
    i = 1
    while lines[i].startswith("VAR "):
        m = re.fullmatch(r"VAR (\w+) : boolean;", lines[i])
        names.append(m.group(1))
        i += 1
    assert lines[i] == "INIT"
    init_expr = _parse_expr(lines[i + 1])
    lits = list(init_expr.args) if isinstance(init_expr, bx.And) else [init_expr]
    init = {l.name for l in lits if isinstance(l, bx.Var)}
    assert lines[i + 2] == "TRANS"
    dirs = []
    for k, line in enumerate(lines[i + 3:]):
        body = re.sub(r"\s*--.*$", "", line).strip()
        if body.startswith("|"):
            body = body[1:].strip()
        e = _parse_expr(body)
        conjuncts = list(e.args) if isinstance(e, bx.And) else [e]
        guard, pos, neg = [], set(), set()
        for c in conjuncts:
            if isinstance(c, bx.Var) and isinstance(c.name, tuple):
                pos.add(c.name[1])
            elif isinstance(c, bx.Not) and isinstance(c.arg, bx.Var) and isinstance(c.arg.name, tuple):
                neg.add(c.arg.name[1])
            elif isinstance(c, bx.Iff) and isinstance(c.left, bx.Var) and isinstance(c.left.name, tuple):
                pass  # frame condition
            else:
                guard.append(c)
        dirs.append(GuardedDirection(f"t{k}", bx.conj(*guard), pos, neg))
    return SymbolicTS(tuple(names), init, tuple(dirs))


def bisimilar(a: SymbolicTS, b: SymbolicTS, rename) -> bool:
    """Whether the reachable parts of ``a`` and ``b`` coincide under ``rename`` (a -> b names)."""
    from hyperconf.model import sts_successors

    def conv(v):
        return frozenset(rename[x] for x in v)

    seen = set()
    todo = [frozenset(a.init)]
    if conv(todo[0]) != frozenset(b.init):
        return False
    while todo:
        v = todo.pop()
        if v in seen:
            continue
        seen.add(v)
        sa = sts_successors(a, v)
        sb = sts_successors(b, conv(v))
        if {conv(x) for x in sa} != {frozenset(x) for x in sb}:
            return False
        todo.extend(sa)
    return True
