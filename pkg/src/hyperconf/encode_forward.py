"""Model checking to conformant planning.

A plan fixes the directions of the existentially quantified copies of the
system; universally quantified copies move non-deterministically and the
tracking automaton follows the letter read from the pre-move locations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from . import boolexpr as bx
from .dfa import Dfa, compile_to_dfa
from .errors import Deadlock, ValidationError
from .ltl import HyperFormula, LtlBody
from .model import (
    Action,
    ConditionalEffect,
    PlanningProblem,
    StripsAction,
    StripsProblem,
    SymbolicTS,
    TransitionSystem,
    explicit_of_symbolic,
)


@dataclass(frozen=True)
class ProductState:
    locs: tuple
    dfa_state: str

    @property
    def name(self) -> str:
        return "<" + ",".join(self.locs) + "|" + self.dfa_state + ">"


@dataclass(frozen=True)
class DirectionVector:
    dirs: tuple

    @property
    def name(self) -> str:
        return "(" + ",".join(self.dirs) + ")"


@lru_cache(maxsize=512)
def tracking_dfa(body: LtlBody) -> Dfa:
    return compile_to_dfa(body)


def _check_arity(f: HyperFormula) -> None:
    if f.n + f.m < 1:
        raise ValidationError("the formula must quantify at least one path")


def label_masks(t: TransitionSystem, f: HyperFormula, d: Dfa) -> list:
    """Per path variable, the DFA-letter bits contributed by each location."""
    index = {a: i for i, a in enumerate(d.atoms)}
    out = []
    for var in f.path_vars:
        masks = {}
        for l in t.locations:
            m = 0
            for ap in t.labels[l]:
                bit = index.get((ap, var))
                if bit is not None:
                    m |= 1 << bit
            masks[l] = m
        out.append(masks)
    return out


def explicit_product(t: TransitionSystem, f: HyperFormula, dfa: Dfa | None = None,
                     reachable_only: bool = True):
    """Product states, direction vectors and effect map of the explicit encoding."""
    _check_arity(f)
    d = dfa or tracking_dfa(f.body)
    n, m = f.n, f.m
    vectors = [DirectionVector(v) for v in product(t.directions, repeat=n)]
    univ = list(product(t.directions, repeat=m))
    labels = label_masks(t, f, d)
    trans = t.trans

    def eff(ps: ProductState, vec: DirectionVector) -> list:
        letter = 0
        for i, l in enumerate(ps.locs):
            letter |= labels[i][l]
        q2 = d.successor(ps.dfa_state, letter)
        ex = tuple(trans[(ps.locs[i], vec.dirs[i])] for i in range(n))
        out = []
        seen = set()
        for dp in univ:
            locs = ex + tuple(trans[(ps.locs[n + j], dp[j])] for j in range(m))
            if locs not in seen:
                seen.add(locs)
                out.append(ProductState(locs, q2))
        return out

    init = ProductState((t.init,) * (n + m), d.init)
    effects = {}
    if reachable_only:
        order = [init]
        seen = {init}
        i = 0
        while i < len(order):
            ps = order[i]
            i += 1
            for vec in vectors:
                succ = eff(ps, vec)
                effects[(ps, vec)] = succ
                for s2 in succ:
                    if s2 not in seen:
                        seen.add(s2)
                        order.append(s2)
    else:
        order = [ProductState(locs, q) for locs in product(t.locations, repeat=n + m) for q in d.states]
        for ps in order:
            for vec in vectors:
                effects[(ps, vec)] = eff(ps, vec)
    return order, vectors, effects, d


def encode_explicit(t: TransitionSystem, f: HyperFormula, dfa: Dfa | None = None,
                    reachable_only: bool = True) -> PlanningProblem:
    """Explicit planning problem whose conformant plans witness ``t |= f``.

    Only states reachable from the initial product state are materialised
    unless ``reachable_only`` is false.
    """
    order, vectors, effects, d = explicit_product(t, f, dfa, reachable_only)
    names = [ps.name for ps in order]
    if len(set(names)) != len(names):
        raise ValidationError("product state names collide; rename locations or automaton states")
    actions = []
    for vec in vectors:
        eff = {ps.name: [s2.name for s2 in effects[(ps, vec)]] for ps in order}
        actions.append(Action(vec.name, frozenset(eff), eff))
    goals = frozenset(ps.name for ps in order if ps.dfa_state in d.accepting)
    init = ProductState((t.init,) * (f.n + f.m), d.init).name
    return PlanningProblem(tuple(names), init, goals, tuple(actions))


def full_state_count(t: TransitionSystem, f: HyperFormula, d: Dfa) -> int:
    return len(t.locations) ** (f.n + f.m) * len(d.states)


# ---------------------------------------------------------------------------
# symbolic


def index_formula(g: bx.BoolFormula, var: str) -> bx.BoolFormula:
    """Replace each variable ``x`` by the indexed variable ``(x, var)``."""
    return bx.rename(g, lambda x: (x, var))


def indexed_prop(x: str, var: str) -> str:
    return f"{x}@{var}"


def dfa_prop(q: str) -> str:
    return f"#{q}"


_SAT_VAR_LIMIT = 16


def encode_symbolic(t: SymbolicTS, f: HyperFormula, dfa: Dfa | None = None,
                    prune: bool = True) -> StripsProblem:
    """STRIPS problem over indexed copies of the system variables plus automaton states.

    One action per existential direction vector; one conditional effect per
    universal direction vector and automaton edge.  With ``prune`` the
    effects whose condition is unsatisfiable are dropped.
    """
    _check_arity(f)
    dead = t.find_deadlock()
    if dead is not None:
        raise Deadlock(dead)
    d = dfa or tracking_dfa(f.body)
    n, m = f.n, f.m
    pvars = f.path_vars
    props = [indexed_prop(x, v) for v in pvars for x in t.vars]
    props += [dfa_prop(q) for q in d.states]
    if len(set(props)) != len(props):
        raise ValidationError("indexed proposition names collide with automaton propositions")
    sysvars = set(t.vars)

    def atom_to_prop(key):
        prop, var = key
        return bx.Var(indexed_prop(prop, var)) if prop in sysvars else bx.FALSE

    deltas = {(q, q2): bx.substitute(d.edge(q, q2), atom_to_prop) for q in d.states for q2 in d.states}
    guards = [
        {dr.name: bx.rename(dr.guard, lambda x, v=v: indexed_prop(x, v)) for dr in t.directions}
        for v in pvars
    ]
    init = {indexed_prop(x, v) for v in pvars for x in t.init} | {dfa_prop(d.init)}
    actions = []
    for vec in product(t.directions, repeat=n):
        effects = []
        for dp in product(t.directions, repeat=m):
            dirs = vec + dp
            guard = bx.conj(*(guards[i][dr.name] for i, dr in enumerate(dirs)))
            pos = {indexed_prop(x, pvars[i]) for i, dr in enumerate(dirs) for x in dr.pos}
            neg = {indexed_prop(x, pvars[i]) for i, dr in enumerate(dirs) for x in dr.neg}
            for q in d.states:
                for q2 in d.states:
                    cond = bx.conj(bx.Var(dfa_prop(q)), deltas[(q, q2)], guard)
                    if prune and not _maybe_satisfiable(cond):
                        continue
                    add = {dfa_prop(q2)} | pos
                    dele = {dfa_prop(q)} | neg
                    if q == q2:
                        add.discard(dfa_prop(q))
                        dele.discard(dfa_prop(q))
                    effects.append(ConditionalEffect(cond, add, dele))
        if not effects:
            effects.append(ConditionalEffect(bx.FALSE, (), ()))
        name = DirectionVector(tuple(dr.name for dr in vec)).name
        actions.append(StripsAction(name, (), effects))
    goals = {dfa_prop(q) for q in d.accepting}
    return StripsProblem(tuple(props), init, goals, tuple(actions))


def _maybe_satisfiable(f: bx.BoolFormula) -> bool:
    if isinstance(f, bx.Const):
        return f.value
    if len(bx.variables(f)) > _SAT_VAR_LIMIT:
        return True
    return bx.is_satisfiable(f)


def symbolic_fluent_count(t: SymbolicTS, f: HyperFormula, d: Dfa) -> int:
    return (f.n + f.m) * len(t.vars) + len(d.states)


def semantics_equiv_check(t: SymbolicTS, f: HyperFormula, cap: int | None = None) -> bool:
    """Whether the symbolic and the expanded explicit encodings agree on plan existence."""
    from .solve import conformant_search

    d = tracking_dfa(f.body)
    kwargs = {} if cap is None else {"cap": cap}
    sym = conformant_search(encode_symbolic(t, f, dfa=d), **kwargs)
    exp = conformant_search(encode_explicit(explicit_of_symbolic(t), f, dfa=d), **kwargs)
    return sym.verdict == exp.verdict
