"""PDDL subset with non-deterministic (``oneof``) and conditional (``when``) effects.

Accepted requirements are ``:strips``, ``:typing``, ``:conditional-effects``
and ``:non-deterministic``.  Grounding yields a ``StripsProblem`` whose
single goal proposition is made true by an extra ``finish`` action.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .. import boolexpr as bx
from ..errors import ParseError, PddlTypeError, UnsupportedFeature
from ..model import ConditionalEffect, StripsAction, StripsProblem

logger = logging.getLogger(__name__)

SUPPORTED_REQUIREMENTS = frozenset({":strips", ":typing", ":conditional-effects", ":non-deterministic"})
GOAL_PROP = "goal_ok"
FINISH_ACTION = "finish"
MAX_WHENS = 12


# ---------------------------------------------------------------------------
# s-expressions


@dataclass(frozen=True)
class Sym:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    col: int


def read_sexprs(text: str) -> list:
    """Top-level s-expressions of ``text``; symbols are lower-cased."""
    stack = [[]]
    opens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "(":
            stack.append([])
            opens.append((line, col))
            i, col = i + 1, col + 1
            continue
        if c == ")":
            if not opens:
                raise ParseError(line, col, "an expression", ")")
            items = stack.pop()
            ol, oc = opens.pop()
            stack[-1].append(SList(tuple(items), ol, oc))
            i, col = i + 1, col + 1
            continue
        start, scol = i, col
        while i < n and not text[i].isspace() and text[i] not in "();":
            i += 1
        col += i - start
        stack[-1].append(Sym(text[start:i].lower(), line, scol))
    if opens:
        ol, oc = opens[-1]
        raise ParseError(line, col, f"')' closing the list opened at {ol}:{oc}", "end of input")
    return stack[0]


def _where(x) -> tuple:
    return x.line, x.col


def _expect_list(x, what: str) -> SList:
    if not isinstance(x, SList):
        raise ParseError(*_where(x), what, x.text)
    return x


def _expect_sym(x, what: str) -> Sym:
    if not isinstance(x, Sym):
        raise ParseError(*_where(x), what, "(")
    return x


def _head(x: SList) -> str | None:
    return x.items[0].text if x.items and isinstance(x.items[0], Sym) else None


# ---------------------------------------------------------------------------
# lifted structures


@dataclass(frozen=True)
class TypedName:
    name: str
    type: str


@dataclass(frozen=True)
class Literal:
    pred: str
    args: tuple
    positive: bool = True


@dataclass(frozen=True)
class EAnd:
    items: tuple


@dataclass(frozen=True)
class EWhen:
    condition: tuple  # literals
    effect: object


@dataclass(frozen=True)
class EOneOf:
    branches: tuple


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple
    pre: tuple  # positive literals
    effect: object
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LiftedDomain:
    name: str
    requirements: frozenset
    types: Mapping  # type -> parent
    predicates: Mapping  # name -> tuple of TypedName
    schemas: tuple


@dataclass(frozen=True)
class ProblemInstance:
    name: str
    domain: str
    objects: tuple  # TypedName in declaration order
    init: frozenset  # ground Literal
    goal: tuple  # ground positive Literal


def _typed_list(items, allow_types: bool = True) -> list:
    """``a b - t c`` -> [(a, t), (b, t), (c, object)]."""
    out, pending = [], []
    i = 0
    while i < len(items):
        x = _expect_sym(items[i], "a name")
        if x.text == "-":
            if not allow_types:
                raise UnsupportedFeature("typing", *_where(x))
            if i + 1 >= len(items):
                raise ParseError(*_where(x), "a type name after '-'", "end of list")
            t = _expect_sym(items[i + 1], "a type name")
            if t.text == "either":
                raise UnsupportedFeature("either", *_where(t))
            out.extend(TypedName(p.text, t.text) for p in pending)
            pending = []
            i += 2
            continue
        pending.append(x)
        i += 1
    out.extend(TypedName(p.text, "object") for p in pending)
    return out


def _literal(x, allow_negative: bool) -> Literal:
    lst = _expect_list(x, "a literal")
    head = _head(lst)
    if head == "not":
        if not allow_negative:
            raise UnsupportedFeature("negative-preconditions", *_where(lst))
        if len(lst.items) != 2:
            raise ParseError(*_where(lst), "(not <atom>)")
        inner = _literal(lst.items[1], False)
        return Literal(inner.pred, inner.args, False)
    if head is None:
        raise ParseError(*_where(lst), "a predicate name")
    if head in ("or", "forall", "exists", "imply", "=", "and", "when", "oneof"):
        raise UnsupportedFeature(head, *_where(lst))
    args = tuple(_expect_sym(a, "an argument").text for a in lst.items[1:])
    return Literal(head, args, True)


def _conjunction(x, allow_negative: bool) -> tuple:
    lst = _expect_list(x, "a condition")
    if not lst.items:
        return ()
    if _head(lst) == "and":
        return tuple(_literal(y, allow_negative) for y in lst.items[1:])
    return (_literal(lst, allow_negative),)


def _effect(x, in_when: bool = False):
    lst = _expect_list(x, "an effect")
    head = _head(lst)
    if not lst.items:
        return EAnd(())
    if head == "and":
        return EAnd(tuple(_effect(y, in_when) for y in lst.items[1:]))
    if head == "when":
        if in_when:
            raise UnsupportedFeature("nested when", *_where(lst))
        if len(lst.items) != 3:
            raise ParseError(*_where(lst), "(when <condition> <effect>)")
        return EWhen(_conjunction(lst.items[1], True), _effect(lst.items[2], True))
    if head == "oneof":
        if in_when:
            raise UnsupportedFeature("oneof inside when", *_where(lst))
        return EOneOf(tuple(_effect(y) for y in lst.items[1:]))
    if head in ("forall", "increase", "decrease", "assign", "probabilistic", "scale-up", "scale-down"):
        raise UnsupportedFeature(head, *_where(lst))
    return _literal(lst, True)


def _sections(root: SList, kind: str):
    items = root.items
    if _head(root) != "define":
        raise ParseError(*_where(root), "(define ...)")
    if len(items) < 2:
        raise ParseError(*_where(root), f"({kind} <name>)")
    header = _expect_list(items[1], f"({kind} <name>)")
    if _head(header) != kind or len(header.items) != 2:
        raise ParseError(*_where(header), f"({kind} <name>)")
    name = _expect_sym(header.items[1], "a name").text
    return name, [_expect_list(s, "a section") for s in items[2:]]


def parse_domain(text: str) -> LiftedDomain:
    roots = read_sexprs(text)
    if len(roots) != 1:
        raise ParseError(1, 1, "exactly one (define (domain ...)) form")
    root = _expect_list(roots[0], "(define ...)")
    name, sections = _sections(root, "domain")
    requirements = set()
    types = {"object": None}
    predicates = {}
    schemas = []
    for sec in sections:
        head = _head(sec)
        if head == ":requirements":
            for r in sec.items[1:]:
                r = _expect_sym(r, "a requirement")
                if r.text not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedFeature(r.text.lstrip(":"), *_where(r))
                requirements.add(r.text)
        elif head == ":types":
            for tn in _typed_list(sec.items[1:]):
                types[tn.name] = tn.type
            for parent in list(types.values()):
                if parent is not None and parent not in types:
                    types[parent] = "object"
        elif head == ":predicates":
            for p in sec.items[1:]:
                p = _expect_list(p, "a predicate declaration")
                pname = _expect_sym(p.items[0], "a predicate name").text if p.items else None
                if pname is None:
                    raise ParseError(*_where(p), "a predicate name")
                predicates[pname] = tuple(_typed_list(p.items[1:]))
        elif head == ":action":
            schemas.append(_action(sec))
        elif head is not None and head.startswith(":"):
            raise UnsupportedFeature(head.lstrip(":"), *_where(sec))
        else:
            raise ParseError(*_where(sec), "a domain section", head)
    d = LiftedDomain(name, frozenset(requirements), types, predicates, tuple(schemas))
    _check_domain(d)
    return d


def _action(sec: SList) -> ActionSchema:
    if len(sec.items) < 2:
        raise ParseError(*_where(sec), "an action name")
    name = _expect_sym(sec.items[1], "an action name").text
    params, pre, eff = (), (), EAnd(())
    rest = sec.items[2:]
    if len(rest) % 2:
        raise ParseError(*_where(sec), "keyword/value pairs in :action")
    for key, val in zip(rest[::2], rest[1::2]):
        key = _expect_sym(key, "an action keyword")
        if key.text == ":parameters":
            params = tuple(_typed_list(_expect_list(val, "a parameter list").items))
        elif key.text == ":precondition":
            pre = _conjunction(val, False)
        elif key.text == ":effect":
            eff = _effect(val)
        else:
            raise UnsupportedFeature(key.text.lstrip(":"), *_where(key))
    return ActionSchema(name, params, pre, eff, sec.line, sec.col)


def _check_domain(d: LiftedDomain) -> None:
    for sig in d.predicates.values():
        for tn in sig:
            if tn.type not in d.types:
                raise PddlTypeError(f"unknown type {tn.type!r}")
    for s in d.schemas:
        scope = {p.name: p.type for p in s.params}
        for p in s.params:
            if p.type not in d.types:
                raise PddlTypeError(f"action {s.name}: unknown type {p.type!r}")
        for lit in list(s.pre) + list(_effect_literals(s.effect)):
            sig = d.predicates.get(lit.pred)
            if sig is None:
                raise PddlTypeError(f"action {s.name}: unknown predicate {lit.pred!r}")
            if len(sig) != len(lit.args):
                raise PddlTypeError(f"action {s.name}: {lit.pred} expects {len(sig)} arguments")
            for a, tn in zip(lit.args, sig):
                if a not in scope:
                    raise PddlTypeError(f"action {s.name}: unbound argument {a!r}")
                if not _is_subtype(d.types, scope[a], tn.type):
                    raise PddlTypeError(f"action {s.name}: {a} is not of type {tn.type}")


def _effect_literals(e):
    if isinstance(e, Literal):
        yield e
    elif isinstance(e, EAnd):
        for x in e.items:
            yield from _effect_literals(x)
    elif isinstance(e, EOneOf):
        for x in e.branches:
            yield from _effect_literals(x)
    elif isinstance(e, EWhen):
        yield from e.condition
        yield from _effect_literals(e.effect)


def _is_subtype(types: Mapping, t: str, ancestor: str) -> bool:
    seen = set()
    while t is not None and t not in seen:
        if t == ancestor:
            return True
        seen.add(t)
        t = types.get(t)
    return False


def parse_problem(text: str, domain: LiftedDomain | None = None) -> ProblemInstance:
    roots = read_sexprs(text)
    if len(roots) != 1:
        raise ParseError(1, 1, "exactly one (define (problem ...)) form")
    root = _expect_list(roots[0], "(define ...)")
    name, sections = _sections(root, "problem")
    dom, objects, init, goal = None, [], set(), ()
    for sec in sections:
        head = _head(sec)
        if head == ":domain":
            dom = _expect_sym(sec.items[1], "a domain name").text
        elif head == ":requirements":
            for r in sec.items[1:]:
                r = _expect_sym(r, "a requirement")
                if r.text not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedFeature(r.text.lstrip(":"), *_where(r))
        elif head == ":objects":
            objects = _typed_list(sec.items[1:])
        elif head == ":init":
            for x in sec.items[1:]:
                lst = _expect_list(x, "an initial atom")
                if _head(lst) in ("oneof", "unknown", "or", "not"):
                    raise UnsupportedFeature(f"{_head(lst)} in :init", *_where(lst))
                init.add(_literal(lst, False))
        elif head == ":goal":
            goal = _conjunction(sec.items[1], False) if len(sec.items) > 1 else ()
        elif head is not None and head.startswith(":"):
            raise UnsupportedFeature(head.lstrip(":"), *_where(sec))
        else:
            raise ParseError(*_where(sec), "a problem section", head)
    p = ProblemInstance(name, dom or "", tuple(objects), frozenset(init), goal)
    if domain is not None:
        _check_problem(domain, p)
    return p


def _check_problem(d: LiftedDomain, p: ProblemInstance) -> None:
    if p.domain and p.domain != d.name:
        raise PddlTypeError(f"problem is for domain {p.domain!r}, not {d.name!r}")
    otype = {}
    for o in p.objects:
        if o.type not in d.types:
            raise PddlTypeError(f"object {o.name}: unknown type {o.type!r}")
        otype[o.name] = o.type
    for lit in list(p.init) + list(p.goal):
        sig = d.predicates.get(lit.pred)
        if sig is None:
            raise PddlTypeError(f"unknown predicate {lit.pred!r}")
        if len(sig) != len(lit.args):
            raise PddlTypeError(f"{lit.pred} expects {len(sig)} arguments")
        for a, tn in zip(lit.args, sig):
            if a not in otype:
                raise PddlTypeError(f"undeclared object {a!r}")
            if not _is_subtype(d.types, otype[a], tn.type):
                raise PddlTypeError(f"object {a} is not of type {tn.type}")


def parse_pddl(domain_text: str, problem_text: str):
    d = parse_domain(domain_text)
    return d, parse_problem(problem_text, d)


# ---------------------------------------------------------------------------
# grounding


def atom_name(pred: str, args: tuple) -> str:
    return f"{pred}({','.join(args)})" if args else pred


def action_name(schema: str, args: tuple) -> str:
    # dots cannot occur in PDDL names, and commas would clash with plan records
    return ".".join((schema,) + tuple(args))


@dataclass(frozen=True)
class _Part:
    condition: tuple  # ground literals (pred, args, positive)
    add: frozenset
    delete: frozenset


def _alternatives(e, binding: Mapping) -> list:
    """Outcome alternatives of effect ``e``; each is a list of condition-guarded parts."""
    if isinstance(e, Literal):
        atom = atom_name(e.pred, tuple(binding[a] for a in e.args))
        part = _Part((), frozenset({atom}) if e.positive else frozenset(),
                     frozenset() if e.positive else frozenset({atom}))
        return [[part]]
    if isinstance(e, EAnd):
        out = [[]]
        for item in e.items:
            out = [left + right for left in out for right in _alternatives(item, binding)]
        return out
    if isinstance(e, EOneOf):
        out = []
        for b in e.branches:
            out.extend(_alternatives(b, binding))
        return out
    if isinstance(e, EWhen):
        cond = tuple((atom_name(c.pred, tuple(binding[a] for a in c.args)), c.positive) for c in e.condition)
        (parts,) = _alternatives(e.effect, binding)
        add = frozenset().union(*(p.add for p in parts))
        dele = frozenset().union(*(p.delete for p in parts))
        return [[_Part(cond, add, dele)]]
    raise TypeError(f"unexpected effect node {e!r}")


def _condition(lits, reachable) -> bx.BoolFormula:
    return bx.conj(*(
        (bx.Var(a) if a in reachable else bx.FALSE) if pos else (bx.Not(bx.Var(a)) if a in reachable else bx.TRUE)
        for a, pos in lits
    ))


def _effects_of(alternative: list, reachable: set) -> list:
    fixed = [p for p in alternative if not p.condition]
    guarded = [p for p in alternative if p.condition]
    if len(guarded) > MAX_WHENS:
        raise UnsupportedFeature(f"more than {MAX_WHENS} conditional effects in one outcome")
    base_add = frozenset().union(*(p.add for p in fixed))
    base_del = frozenset().union(*(p.delete for p in fixed))
    out = []
    for fire in product((True, False), repeat=len(guarded)):
        conds = []
        add, dele = set(base_add), set(base_del)
        for p, on in zip(guarded, fire):
            c = _condition(p.condition, reachable)
            conds.append(c if on else bx.neg(c))
            if on:
                add |= p.add
                dele |= p.delete
        cond = bx.simplify(bx.conj(*conds))
        if cond == bx.FALSE:
            continue
        # delete-then-add: an atom both added and deleted ends up true
        out.append(ConditionalEffect(cond, add, dele - add))
    return out


def _objects_of(d: LiftedDomain, i: ProblemInstance, t: str) -> list:
    return [o.name for o in i.objects if _is_subtype(d.types, o.type, t)]


def ground(d: LiftedDomain, i: ProblemInstance) -> StripsProblem:
    """Ground ``d`` over ``i`` with relaxed-reachability pruning."""
    _check_problem(d, i)
    candidates = []
    for s in d.schemas:
        domains = [_objects_of(d, i, p.type) for p in s.params]
        for values in product(*domains):
            binding = {p.name: v for p, v in zip(s.params, values)}
            name = action_name(s.name, values)
            pre = frozenset(atom_name(l.pred, tuple(binding[a] for a in l.args)) for l in s.pre)
            candidates.append((name, pre, _alternatives(s.effect, binding)))
    reachable = {atom_name(l.pred, l.args) for l in i.init}
    changed = True
    while changed:
        changed = False
        for _, pre, alts in candidates:
            if not pre <= reachable:
                continue
            for alt in alts:
                for part in alt:
                    if all(a in reachable for a, pos in part.condition if pos) and not part.add <= reachable:
                        reachable |= part.add
                        changed = True
    goal_atoms = frozenset(atom_name(l.pred, l.args) for l in i.goal)
    goal_prop = GOAL_PROP
    while goal_prop in reachable:
        goal_prop += "_"
    finish = FINISH_ACTION
    names = {c[0] for c in candidates}
    while finish in names:
        finish += "_"
    actions = []
    for name, pre, alts in candidates:
        if not pre <= reachable:
            continue
        effects = []
        for alt in alts:
            effects.extend(_effects_of(alt, reachable))
        effects = [ConditionalEffect(e.condition, e.add & reachable, e.delete & reachable) for e in effects]
        if not effects:
            continue
        actions.append(StripsAction(name, pre, effects))
    if goal_atoms <= reachable:
        actions.append(StripsAction(finish, goal_atoms, [ConditionalEffect(bx.TRUE, {goal_prop}, ())]))
    else:
        logger.info("goal atoms %s are unreachable; no %s action", sorted(goal_atoms - reachable), finish)
    props = tuple(sorted(reachable)) + (goal_prop,)
    init = {atom_name(l.pred, l.args) for l in i.init}
    p = StripsProblem(props, init, {goal_prop}, actions,
                      meta={"domain": d.name, "problem": i.name, "finish_action": finish})
    p.warn_empty_effects()
    return p
