"""Propositional formulas over hashable variable names.

Guards of symbolic directions, conditions of STRIPS effects and the edge
labels of tracking automata all use this representation.  Variable names
are plain strings for system variables and ``(prop, path_var)`` tuples for
indexed atoms.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Hashable, Iterable, Mapping, Sequence


class BoolFormula:
    __slots__ = ()

    def __and__(self, other):
        return conj(self, other)

    def __or__(self, other):
        return disj(self, other)

    def __invert__(self):
        return neg(self)


@dataclass(frozen=True)
class Var(BoolFormula):
    name: Hashable


@dataclass(frozen=True)
class Const(BoolFormula):
    value: bool


@dataclass(frozen=True)
class Not(BoolFormula):
    arg: BoolFormula


@dataclass(frozen=True)
class And(BoolFormula):
    args: tuple


@dataclass(frozen=True)
class Or(BoolFormula):
    args: tuple


@dataclass(frozen=True)
class Implies(BoolFormula):
    left: BoolFormula
    right: BoolFormula


@dataclass(frozen=True)
class Iff(BoolFormula):
    left: BoolFormula
    right: BoolFormula


TRUE = Const(True)
FALSE = Const(False)


# smart constructors -------------------------------------------------------

def neg(f: BoolFormula) -> BoolFormula:
    if isinstance(f, Const):
        return FALSE if f.value else TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def conj(*fs: BoolFormula) -> BoolFormula:
    out = []
    for f in fs:
        if isinstance(f, Const):
            if not f.value:
                return FALSE
            continue
        if isinstance(f, And):
            out.extend(f.args)
        else:
            out.append(f)
    out = list(dict.fromkeys(out))
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*fs: BoolFormula) -> BoolFormula:
    out = []
    for f in fs:
        if isinstance(f, Const):
            if f.value:
                return TRUE
            continue
        if isinstance(f, Or):
            out.extend(f.args)
        else:
            out.append(f)
    out = list(dict.fromkeys(out))
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def conj_vars(names: Iterable[Hashable]) -> BoolFormula:
    return conj(*(Var(n) for n in names))


# queries ------------------------------------------------------------------

def variables(f: BoolFormula) -> set:
    out: set = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, (Implies, Iff)):
            stack.append(g.left)
            stack.append(g.right)
    return out


def evaluate(f: BoolFormula, env) -> bool:
    """Evaluate ``f``; ``env`` is a container of true variables or a mapping to bools."""
    if isinstance(env, Mapping):
        lookup = lambda n: bool(env.get(n, False))  # noqa: E731
    else:
        lookup = lambda n: n in env  # noqa: E731
    return _eval(f, lookup)


def _eval(f, lookup) -> bool:
    if isinstance(f, Var):
        return lookup(f.name)
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not _eval(f.arg, lookup)
    if isinstance(f, And):
        return all(_eval(a, lookup) for a in f.args)
    if isinstance(f, Or):
        return any(_eval(a, lookup) for a in f.args)
    if isinstance(f, Implies):
        return (not _eval(f.left, lookup)) or _eval(f.right, lookup)
    if isinstance(f, Iff):
        return _eval(f.left, lookup) == _eval(f.right, lookup)
    raise TypeError(f"not a boolean formula: {f!r}")


def substitute(f: BoolFormula, fn: Callable[[Hashable], BoolFormula]) -> BoolFormula:
    """Replace every variable ``v`` by ``fn(v.name)``, folding constants."""
    if isinstance(f, Var):
        return fn(f.name)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return neg(substitute(f.arg, fn))
    if isinstance(f, And):
        return conj(*(substitute(a, fn) for a in f.args))
    if isinstance(f, Or):
        return disj(*(substitute(a, fn) for a in f.args))
    if isinstance(f, Implies):
        return disj(neg(substitute(f.left, fn)), substitute(f.right, fn))
    if isinstance(f, Iff):
        left, right = substitute(f.left, fn), substitute(f.right, fn)
        if isinstance(left, Const) or isinstance(right, Const):
            return disj(conj(left, right), conj(neg(left), neg(right)))
        return Iff(left, right)
    raise TypeError(f"not a boolean formula: {f!r}")


def rename(f: BoolFormula, fn: Callable[[Hashable], Hashable]) -> BoolFormula:
    return substitute(f, lambda n: Var(fn(n)))


def truth_table(f: BoolFormula, order: Sequence[Hashable]) -> int:
    """Bit ``i`` of the result is ``f`` under the assignment encoded by ``i``.

    Variable ``order[j]`` is true in assignment ``i`` iff bit ``j`` of ``i`` is set.
    """
    pred = compile_predicate(f, {v: j for j, v in enumerate(order)})
    table = 0
    for i in range(1 << len(order)):
        if pred(i):
            table |= 1 << i
    return table


def is_satisfiable(f: BoolFormula) -> bool:
    if isinstance(f, Const):
        return f.value
    order = sorted(variables(f), key=repr)
    return truth_table(f, order) != 0


def is_valid(f: BoolFormula) -> bool:
    if isinstance(f, Const):
        return f.value
    order = sorted(variables(f), key=repr)
    return truth_table(f, order) == (1 << (1 << len(order))) - 1


def equivalent(f: BoolFormula, g: BoolFormula) -> bool:
    order = sorted(variables(f) | variables(g), key=repr)
    return truth_table(f, order) == truth_table(g, order)


def simplify(f: BoolFormula, max_vars: int = 12) -> BoolFormula:
    """Truth-table normal form of ``f`` when it has at most ``max_vars`` variables."""
    if isinstance(f, (Const, Var)):
        return f
    order = sorted(variables(f), key=repr)
    if len(order) > max_vars:
        return f
    return from_truth_table(truth_table(f, order), order)


def compile_predicate(f: BoolFormula, index: Mapping[Hashable, int]) -> Callable[[int], bool]:
    """Compile ``f`` into a predicate over integer bitmasks.

    ``index`` maps variable names to bit positions; variables missing from the
    index are constantly false.
    """
    src = _to_py(f, index)
    return eval(f"lambda m: bool({src})", {})  # noqa: S307


def _to_py(f, index) -> str:
    if isinstance(f, Var):
        bit = index.get(f.name)
        if bit is None:
            return "False"
        return f"(m >> {bit} & 1)"
    if isinstance(f, Const):
        return "True" if f.value else "False"
    if isinstance(f, Not):
        return f"(not {_to_py(f.arg, index)})"
    if isinstance(f, And):
        return "(" + " and ".join(_to_py(a, index) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(" + " or ".join(_to_py(a, index) for a in f.args) + ")"
    if isinstance(f, Implies):
        return f"((not {_to_py(f.left, index)}) or {_to_py(f.right, index)})"
    if isinstance(f, Iff):
        return f"(bool({_to_py(f.left, index)}) == bool({_to_py(f.right, index)}))"
    raise TypeError(f"not a boolean formula: {f!r}")


def from_truth_table(table: int, order: Sequence[Hashable]) -> BoolFormula:
    """Rebuild a compact formula by Shannon expansion over ``order``."""
    rows = [(table >> i) & 1 for i in range(1 << len(order))]
    return _shannon(rows, list(order))


def from_minterms(masks: Iterable[int], order: Sequence[Hashable]) -> BoolFormula:
    masks = set(masks)
    rows = [1 if i in masks else 0 for i in range(1 << len(order))]
    return _shannon(rows, list(order))


def _shannon(rows: list, order: list) -> BoolFormula:
    if all(rows):
        return TRUE
    if not any(rows):
        return FALSE
    # split on the highest variable: rows[:half] has it false, rows[half:] true
    half = len(rows) // 2
    var = Var(order[-1])
    low = _shannon(rows[:half], order[:-1])
    high = _shannon(rows[half:], order[:-1])
    if low == high:
        return low
    if high == TRUE and low == FALSE:
        return var
    if high == FALSE and low == TRUE:
        return Not(var)
    if low == FALSE:
        return conj(var, high)
    if high == FALSE:
        return conj(Not(var), low)
    if high == TRUE:
        return disj(var, low)
    if low == TRUE:
        return disj(Not(var), high)
    return disj(conj(var, high), conj(Not(var), low))


def assignments(order: Sequence[Hashable]):
    """Yield every subset of ``order`` as a frozenset."""
    for bits in product((False, True), repeat=len(order)):
        yield frozenset(v for v, b in zip(order, bits) if b)
