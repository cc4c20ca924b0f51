"""HyperLTL formulas of the exists*-forall* fragment and their LTL bodies."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotCoSafety, PrefixShapeError, ValidationError


class LtlBody:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(LtlBody):
    """Proposition ``prop`` evaluated on the path bound to ``var``."""

    prop: str
    var: str

    @property
    def key(self) -> tuple:
        return (self.prop, self.var)


@dataclass(frozen=True)
class BoolConst(LtlBody):
    value: bool


@dataclass(frozen=True)
class Not(LtlBody):
    arg: LtlBody


@dataclass(frozen=True)
class And(LtlBody):
    args: tuple


@dataclass(frozen=True)
class Or(LtlBody):
    args: tuple


@dataclass(frozen=True)
class Implies(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class Iff(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class Next(LtlBody):
    arg: LtlBody


@dataclass(frozen=True)
class Until(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class Eventually(LtlBody):
    arg: LtlBody


@dataclass(frozen=True)
class Globally(LtlBody):
    arg: LtlBody


TRUE = BoolConst(True)
FALSE = BoolConst(False)


def land(*args: LtlBody) -> LtlBody:
    flat = []
    for a in args:
        if a == TRUE:
            continue
        if a == FALSE:
            return FALSE
        flat.extend(a.args if isinstance(a, And) else (a,))
    flat = list(dict.fromkeys(flat))
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def lor(*args: LtlBody) -> LtlBody:
    flat = []
    for a in args:
        if a == FALSE:
            continue
        if a == TRUE:
            return TRUE
        flat.extend(a.args if isinstance(a, Or) else (a,))
    flat = list(dict.fromkeys(flat))
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def xor(a: LtlBody, b: LtlBody) -> LtlBody:
    return Not(Iff(a, b))


def children(f: LtlBody) -> tuple:
    if isinstance(f, (Not, Next, Eventually, Globally)):
        return (("arg", f.arg),)
    if isinstance(f, (And, Or)):
        return tuple((f"args[{i}]", a) for i, a in enumerate(f.args))
    if isinstance(f, (Implies, Iff, Until)):
        return (("left", f.left), ("right", f.right))
    return ()


def atoms(f: LtlBody) -> set:
    """Indexed atoms ``(prop, var)`` occurring in ``f``."""
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.key)
        else:
            stack.extend(c for _, c in children(g))
    return out


def sort_atoms(keys) -> tuple:
    return tuple(sorted(keys, key=lambda k: (k[1], k[0])))


def map_atoms(f: LtlBody, fn) -> LtlBody:
    """Rebuild ``f`` with every atom replaced by ``fn(atom)``."""
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, BoolConst):
        return f
    if isinstance(f, (Not, Next, Eventually, Globally)):
        return type(f)(map_atoms(f.arg, fn))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(map_atoms(a, fn) for a in f.args))
    return type(f)(map_atoms(f.left, fn), map_atoms(f.right, fn))


# ---------------------------------------------------------------------------
# normalisation


def to_nnf(f: LtlBody) -> LtlBody:
    """Push negations to atoms and expand derived operators.

    ``F e`` becomes ``true U e``.  Negated until has no positive dual in this
    AST, so ``!(true U e)`` is written ``G !e`` and any other negated until
    stays as ``!(a U b)`` with normalised operands.  Both shapes fall outside
    the co-safety fragment.
    """
    return _nnf(f, False)


def _nnf(f: LtlBody, negate: bool) -> LtlBody:
    if isinstance(f, BoolConst):
        return BoolConst(f.value != negate)
    if isinstance(f, Atom):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return _nnf(f.arg, not negate)
    if isinstance(f, And):
        parts = [_nnf(a, negate) for a in f.args]
        return lor(*parts) if negate else land(*parts)
    if isinstance(f, Or):
        parts = [_nnf(a, negate) for a in f.args]
        return land(*parts) if negate else lor(*parts)
    if isinstance(f, Implies):
        if negate:
            return land(_nnf(f.left, False), _nnf(f.right, True))
        return lor(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Iff):
        a, na = _nnf(f.left, False), _nnf(f.left, True)
        b, nb = _nnf(f.right, False), _nnf(f.right, True)
        if negate:
            return lor(land(a, nb), land(na, b))
        return lor(land(a, b), land(na, nb))
    if isinstance(f, Next):
        return Next(_nnf(f.arg, negate))
    if isinstance(f, Eventually):
        if negate:
            return Globally(_nnf(f.arg, True))
        return Until(TRUE, _nnf(f.arg, False))
    if isinstance(f, Globally):
        if negate:
            return Until(TRUE, _nnf(f.arg, True))
        return Globally(_nnf(f.arg, False))
    if isinstance(f, Until):
        left, right = _nnf(f.left, False), _nnf(f.right, False)
        if not negate:
            return Until(left, right)
        if left == TRUE:
            return Globally(_nnf(f.right, True))
        return Not(Until(left, right))
    raise TypeError(f"not an LTL body: {f!r}")


def check_cosafety(b: LtlBody) -> None:
    """Raise ``NotCoSafety`` with the path of the first safety node in ``b``."""
    stack = [("$", b)]
    while stack:
        path, g = stack.pop()
        if isinstance(g, Globally):
            raise NotCoSafety(path, g)
        if isinstance(g, Not) and not isinstance(g.arg, Atom):
            raise NotCoSafety(path, g)
        for name, c in reversed(children(g)):
            stack.append((f"{path}.{name}", c))


def is_cosafety(b: LtlBody) -> bool:
    try:
        check_cosafety(to_nnf(b))
    except NotCoSafety:
        return False
    return True


# ---------------------------------------------------------------------------
# quantified formulas


@dataclass(frozen=True)
class HyperFormula:
    exist_vars: tuple
    univ_vars: tuple
    body: LtlBody

    def __post_init__(self):
        object.__setattr__(self, "exist_vars", tuple(self.exist_vars))
        object.__setattr__(self, "univ_vars", tuple(self.univ_vars))
        names = self.exist_vars + self.univ_vars
        if len(set(names)) != len(names):
            raise ValidationError("path variable names must be distinct")
        undeclared = {v for _, v in atoms(self.body)} - set(names)
        if undeclared:
            raise ValidationError(f"atoms use undeclared path variables {sorted(undeclared)}")

    @classmethod
    def from_prefix(cls, prefix, body: LtlBody) -> "HyperFormula":
        """Build from ``[("exists", "p1"), ("forall", "p2"), ...]``; enforces exists* forall*."""
        exist, univ = [], []
        for q, v in prefix:
            if q == "exists":
                if univ:
                    raise PrefixShapeError(
                        f"existential {v!r} after a universal quantifier; negate the formula first"
                    )
                exist.append(v)
            elif q == "forall":
                univ.append(v)
            else:
                raise ValueError(f"unknown quantifier {q!r}")
        return cls(tuple(exist), tuple(univ), body)

    @property
    def path_vars(self) -> tuple:
        return self.exist_vars + self.univ_vars

    @property
    def n(self) -> int:
        return len(self.exist_vars)

    @property
    def m(self) -> int:
        return len(self.univ_vars)
