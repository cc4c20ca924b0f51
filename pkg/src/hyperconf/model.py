"""Planning problems, transition systems and their executable semantics.

States of every planning formalism are exposed to the solvers as dense
integers: explicit problems intern their state names, STRIPS problems use
the bitmask of true propositions.  Both classes implement the same small
semantics interface (``initial_state``, ``action_names``, ``applicable``,
``successors``, ``is_goal``, ``state_label``) so plan execution and search
are written once.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from . import boolexpr as bx
from .errors import (
    Deadlock,
    EmptyEffect,
    NotApplicable,
    Undefined,
    UnknownAction,
    UnknownState,
    ValidationError,
)

logger = logging.getLogger(__name__)


def _freeze_map(m: Mapping) -> Mapping:
    return MappingProxyType(dict(m))


# ---------------------------------------------------------------------------
# plans and beliefs


@dataclass(frozen=True)
class Plan:
    actions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))

    def __len__(self):
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def __add__(self, other):
        return Plan(self.actions + tuple(other))

    def __str__(self):
        return ",".join(self.actions)


@dataclass(frozen=True)
class BeliefState:
    """Canonically ordered, duplicate-free set of interned state ids."""

    members: tuple

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        if not members:
            raise ValidationError("belief states are non-empty")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, ids: Iterable[int]) -> "BeliefState":
        return cls(tuple(ids))

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, s):
        return s in self.members


# ---------------------------------------------------------------------------
# explicit planning


@dataclass(frozen=True)
class Action:
    name: str
    pre: frozenset
    eff: Mapping

    def __post_init__(self):
        eff = {s: frozenset(t) for s, t in dict(self.eff).items()}
        pre = frozenset(self.pre)
        if set(eff) != pre:
            raise ValidationError(f"action {self.name!r}: effect domain differs from precondition")
        for s, succ in eff.items():
            if not succ:
                raise ValidationError(f"action {self.name!r}: empty effect set for state {s!r}")
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "eff", _freeze_map(eff))

    @classmethod
    def from_effects(cls, name: str, eff: Mapping) -> "Action":
        return cls(name, frozenset(eff), eff)

    def __eq__(self, other):
        return (
            isinstance(other, Action)
            and self.name == other.name
            and self.pre == other.pre
            and dict(self.eff) == dict(other.eff)
        )

    def __hash__(self):
        return hash((self.name, self.pre))


@dataclass(frozen=True, eq=False)
class PlanningProblem:
    states: tuple
    init: str
    goals: frozenset
    actions: tuple
    check_goal_closure: bool = field(default=True, repr=False)

    def __post_init__(self):
        states = tuple(self.states)
        actions = tuple(self.actions)
        goals = frozenset(self.goals)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "goals", goals)
        sid = {s: i for i, s in enumerate(states)}
        if len(sid) != len(states):
            raise ValidationError("duplicate state identifiers")
        if self.init not in sid:
            raise ValidationError(f"initial state {self.init!r} is not a state")
        if not goals <= sid.keys():
            raise ValidationError("goals must be a subset of states")
        aid = {}
        for i, a in enumerate(actions):
            if a.name in aid:
                raise ValidationError(f"duplicate action name {a.name!r}")
            aid[a.name] = i
            for s, succ in a.eff.items():
                if s not in sid:
                    raise ValidationError(f"action {a.name!r}: unknown state {s!r} in precondition")
                bad = succ - sid.keys()
                if bad:
                    raise ValidationError(f"action {a.name!r}: unknown successor states {sorted(bad)}")
        if self.check_goal_closure:
            for a in actions:
                for g in goals & a.pre:
                    if not a.eff[g] <= goals:
                        raise ValidationError(
                            f"goal closure violated: action {a.name!r} leaves goal state {g!r}"
                        )
        # interned tables used by the semantics interface
        app = []
        succ = []
        for a in actions:
            app.append(frozenset(sid[s] for s in a.pre))
            succ.append({sid[s]: tuple(sorted(sid[t] for t in ts)) for s, ts in a.eff.items()})
        object.__setattr__(self, "_sid", sid)
        object.__setattr__(self, "_aid", aid)
        object.__setattr__(self, "_app", app)
        object.__setattr__(self, "_succ", succ)
        object.__setattr__(self, "_goal_ids", frozenset(sid[g] for g in goals))

    def __eq__(self, other):
        return (
            isinstance(other, PlanningProblem)
            and self.states == other.states
            and self.init == other.init
            and self.goals == other.goals
            and self.actions == other.actions
        )

    __hash__ = None

    # semantics interface
    def initial_state(self) -> int:
        return self._sid[self.init]

    @property
    def action_names(self) -> tuple:
        return tuple(a.name for a in self.actions)

    def action_index(self, name: str) -> int:
        try:
            return self._aid[name]
        except KeyError:
            raise UnknownAction(name) from None

    def applicable(self, s: int, a: int) -> bool:
        return s in self._app[a]

    def successors(self, s: int, a: int) -> tuple:
        try:
            return self._succ[a][s]
        except KeyError:
            raise NotApplicable(self.states[s], self.actions[a].name) from None

    def is_goal(self, s: int) -> bool:
        return s in self._goal_ids

    def state_label(self, s: int) -> str:
        return self.states[s]

    # name helpers
    def state_id(self, name: str) -> int:
        try:
            return self._sid[name]
        except KeyError:
            raise UnknownState(name) from None

    def belief(self, names: Iterable[str]) -> BeliefState:
        return BeliefState.of(self.state_id(n) for n in names)

    def names(self, belief: BeliefState) -> frozenset:
        return frozenset(self.states[s] for s in belief)

    def action(self, name: str) -> Action:
        return self.actions[self.action_index(name)]


def explicit_successors(p: PlanningProblem, s: str, a: str) -> frozenset:
    """Return ``eff_a(s)``; raises ``NotApplicable`` if ``s`` is outside ``pre_a``."""
    p.state_id(s)
    act = p.action(a)
    if s not in act.pre:
        raise NotApplicable(s, a)
    return act.eff[s]


# ---------------------------------------------------------------------------
# STRIPS planning


@dataclass(frozen=True)
class ConditionalEffect:
    condition: bx.BoolFormula
    add: frozenset
    delete: frozenset

    def __post_init__(self):
        object.__setattr__(self, "add", frozenset(self.add))
        object.__setattr__(self, "delete", frozenset(self.delete))
        overlap = self.add & self.delete
        if overlap:
            raise ValidationError(f"add and delete lists overlap on {sorted(overlap)}")


@dataclass(frozen=True)
class StripsAction:
    name: str
    pre: frozenset
    effects: tuple

    def __post_init__(self):
        object.__setattr__(self, "pre", frozenset(self.pre))
        object.__setattr__(self, "effects", tuple(self.effects))
        if not self.effects:
            raise ValidationError(f"STRIPS action {self.name!r} has no effects")


@dataclass(frozen=True, eq=False)
class StripsProblem:
    props: tuple
    init: frozenset
    goals: frozenset
    actions: tuple
    meta: Mapping = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        props = tuple(self.props)
        object.__setattr__(self, "props", props)
        object.__setattr__(self, "init", frozenset(self.init))
        object.__setattr__(self, "goals", frozenset(self.goals))
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "meta", _freeze_map(self.meta))
        pid = {q: i for i, q in enumerate(props)}
        if len(pid) != len(props):
            raise ValidationError("duplicate proposition names")
        known = pid.keys()
        if not self.init <= known:
            raise ValidationError(f"init uses unknown propositions {sorted(self.init - known)}")
        if not self.goals <= known:
            raise ValidationError(f"goals use unknown propositions {sorted(self.goals - known)}")
        aid = {}
        compiled = []
        for i, a in enumerate(self.actions):
            if a.name in aid:
                raise ValidationError(f"duplicate action name {a.name!r}")
            aid[a.name] = i
            used = set(a.pre)
            for e in a.effects:
                used |= e.add | e.delete | bx.variables(e.condition)
            if not used <= known:
                raise ValidationError(
                    f"action {a.name!r} uses unknown propositions {sorted(used - known)}"
                )
            pre_mask = _mask(a.pre, pid)
            effs = tuple(
                (bx.compile_predicate(e.condition, pid), _mask(e.add, pid), _mask(e.delete, pid))
                for e in a.effects
            )
            compiled.append((pre_mask, effs))
        object.__setattr__(self, "_pid", pid)
        object.__setattr__(self, "_aid", aid)
        object.__setattr__(self, "_compiled", compiled)
        object.__setattr__(self, "_goal_mask", _mask(self.goals, pid))

    def __eq__(self, other):
        return (
            isinstance(other, StripsProblem)
            and self.props == other.props
            and self.init == other.init
            and self.goals == other.goals
            and self.actions == other.actions
        )

    __hash__ = None

    # semantics interface
    def initial_state(self) -> int:
        return _mask(self.init, self._pid)

    @property
    def action_names(self) -> tuple:
        return tuple(a.name for a in self.actions)

    def action_index(self, name: str) -> int:
        try:
            return self._aid[name]
        except KeyError:
            raise UnknownAction(name) from None

    def applicable(self, s: int, a: int) -> bool:
        # an action whose precondition holds but whose effects all fail to fire
        # counts as not applicable
        pre_mask, effs = self._compiled[a]
        if s & pre_mask != pre_mask:
            return False
        return any(cond(s) for cond, _, _ in effs)

    def successors(self, s: int, a: int) -> tuple:
        pre_mask, effs = self._compiled[a]
        if s & pre_mask != pre_mask:
            raise NotApplicable(self.state_label(s), self.actions[a].name)
        out = {(s & ~dl) | ad for cond, ad, dl in effs if cond(s)}
        if not out:
            raise EmptyEffect(self.state_label(s), self.actions[a].name)
        return tuple(sorted(out))

    def is_goal(self, s: int) -> bool:
        return bool(s & self._goal_mask)

    def state_label(self, s: int) -> str:
        return "{" + ",".join(self.decode(s)) + "}"

    # helpers
    def encode(self, props: Iterable[str]) -> int:
        props = list(props)
        unknown = [q for q in props if q not in self._pid]
        if unknown:
            raise UnknownState(unknown[0])
        return _mask(props, self._pid)

    def decode(self, s: int) -> tuple:
        return tuple(q for i, q in enumerate(self.props) if s >> i & 1)

    def belief(self, states: Iterable[Iterable[str]]) -> BeliefState:
        return BeliefState.of(self.encode(s) for s in states)

    def names(self, belief: BeliefState) -> frozenset:
        return frozenset(frozenset(self.decode(s)) for s in belief)

    def check_empty_effects(self, max_vars: int = 12) -> list:
        """Names of actions that can have their precondition hold with no effect firing.

        Decided by truth table; actions mentioning more than ``max_vars``
        propositions are skipped.
        """
        offending = []
        for a in self.actions:
            gap = bx.conj(
                bx.conj_vars(sorted(a.pre)),
                bx.neg(bx.disj(*(e.condition for e in a.effects))),
            )
            if len(bx.variables(gap)) > max_vars:
                continue
            if bx.is_satisfiable(gap):
                offending.append(a.name)
        return offending

    def warn_empty_effects(self) -> list:
        offending = self.check_empty_effects()
        if offending:
            logger.warning(
                "actions whose effects can all fail to fire (treated as not applicable there): %s",
                ", ".join(offending),
            )
        return offending


def _mask(names: Iterable[str], index: Mapping[str, int]) -> int:
    m = 0
    for n in names:
        m |= 1 << index[n]
    return m


def strips_successors(p: StripsProblem, s: Iterable[str], a: str) -> set:
    """``apply_a(s)`` as a set of frozensets; raises on inapplicable or empty effects."""
    succ = p.successors(p.encode(s), p.action_index(a))
    return {frozenset(p.decode(t)) for t in succ}


# ---------------------------------------------------------------------------
# uniform plan execution


def _resolve(sem, plan) -> list:
    return [sem.action_index(a) for a in plan]


def exec_plan(sem, belief: BeliefState, plan) -> BeliefState:
    """Execute ``plan`` from ``belief``; raises ``Undefined`` on a precondition failure."""
    current = tuple(belief)
    if not current:
        raise ValidationError("belief states are non-empty")
    for step, a in enumerate(_resolve(sem, plan)):
        nxt = set()
        for s in current:
            if not sem.applicable(s, a):
                raise Undefined(step, sem.state_label(s))
            nxt.update(sem.successors(s, a))
        current = tuple(sorted(nxt))
    return BeliefState(current)


def is_conformant(sem, plan) -> bool:
    _resolve(sem, plan)
    try:
        final = exec_plan(sem, BeliefState((sem.initial_state(),)), plan)
    except Undefined:
        return False
    return all(sem.is_goal(s) for s in final)


def reachable_states(sem, limit: int | None = None) -> list:
    """States reachable from the initial state under any action sequence, in BFS order."""
    init = sem.initial_state()
    order = [init]
    seen = {init}
    n_actions = len(sem.action_names)
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        for a in range(n_actions):
            if not sem.applicable(s, a):
                continue
            for t in sem.successors(s, a):
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    if limit is not None and len(order) > limit:
                        return order
    return order


def goals_absorbing(sem, limit: int | None = None) -> bool | None:
    """Whether every action applies in every reachable goal state and stays in the goals.

    Closure alone permits goal states where some action is not applicable;
    executions may then reach the goal at different, unsynchronisable times.
    Returns None when more than ``limit`` states are reachable.
    """
    states = reachable_states(sem, limit)
    if limit is not None and len(states) > limit:
        return None
    for s in states:
        if not sem.is_goal(s):
            continue
        for a in range(len(sem.action_names)):
            if not sem.applicable(s, a) or not all(sem.is_goal(t) for t in sem.successors(s, a)):
                return False
    return True


def strips_of_explicit(p: PlanningProblem) -> StripsProblem:
    """One-hot STRIPS rendering of an explicit problem.

    Each action gets an empty precondition and one conditional effect per
    (state, successor) pair guarded by the state's proposition, so an action
    is applicable exactly where the explicit precondition holds.
    """
    effects_by_action = []
    for a in p.actions:
        effs = []
        for s in p.states:
            if s not in a.pre:
                continue
            for t in sorted(a.eff[s], key=p.state_id):
                if t == s:
                    effs.append(ConditionalEffect(bx.Var(s), (), ()))
                else:
                    effs.append(ConditionalEffect(bx.Var(s), (t,), (s,)))
        if not effs:
            effs.append(ConditionalEffect(bx.FALSE, (), ()))
        effects_by_action.append(StripsAction(a.name, (), effs))
    return StripsProblem(p.states, {p.init}, p.goals, effects_by_action)


# ---------------------------------------------------------------------------
# transition systems


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    locations: tuple
    init: str
    directions: tuple
    trans: Mapping
    labels: Mapping

    def __post_init__(self):
        locations = tuple(self.locations)
        directions = tuple(self.directions)
        object.__setattr__(self, "locations", locations)
        object.__setattr__(self, "directions", directions)
        if len(set(locations)) != len(locations):
            raise ValidationError("duplicate locations")
        if len(set(directions)) != len(directions):
            raise ValidationError("duplicate directions")
        if not directions:
            raise ValidationError("a transition system needs at least one direction")
        if self.init not in locations:
            raise ValidationError(f"initial location {self.init!r} is not a location")
        trans = dict(self.trans)
        locset = set(locations)
        for l in locations:
            for d in directions:
                if (l, d) not in trans:
                    raise ValidationError(f"transition function not total: missing ({l!r}, {d!r})")
                if trans[(l, d)] not in locset:
                    raise ValidationError(f"transition ({l!r}, {d!r}) targets unknown location")
        if len(trans) != len(locations) * len(directions):
            raise ValidationError("transition entries for unknown locations or directions")
        labels = {l: frozenset(v) for l, v in dict(self.labels).items()}
        if set(labels) != locset:
            raise ValidationError("labels must be defined for exactly the locations")
        object.__setattr__(self, "trans", _freeze_map(trans))
        object.__setattr__(self, "labels", _freeze_map(labels))

    def __eq__(self, other):
        return (
            isinstance(other, TransitionSystem)
            and self.locations == other.locations
            and self.init == other.init
            and self.directions == other.directions
            and dict(self.trans) == dict(other.trans)
            and dict(self.labels) == dict(other.labels)
        )

    __hash__ = None

    def step(self, l: str, d: str) -> str:
        return self.trans[(l, d)]

    @property
    def aps(self) -> frozenset:
        out = set()
        for v in self.labels.values():
            out |= v
        return frozenset(out)


@dataclass(frozen=True)
class GuardedDirection:
    name: str
    guard: bx.BoolFormula
    pos: frozenset
    neg: frozenset

    def __post_init__(self):
        object.__setattr__(self, "pos", frozenset(self.pos))
        object.__setattr__(self, "neg", frozenset(self.neg))
        if self.pos & self.neg:
            raise ValidationError(f"direction {self.name!r}: pos and neg overlap")


@dataclass(frozen=True, eq=False)
class SymbolicTS:
    vars: tuple
    init: frozenset
    directions: tuple
    meta: Mapping = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        vars_ = tuple(self.vars)
        object.__setattr__(self, "vars", vars_)
        object.__setattr__(self, "init", frozenset(self.init))
        object.__setattr__(self, "directions", tuple(self.directions))
        object.__setattr__(self, "meta", _freeze_map(self.meta))
        vid = {x: i for i, x in enumerate(vars_)}
        if len(vid) != len(vars_):
            raise ValidationError("duplicate variable names")
        known = vid.keys()
        if not self.init <= known:
            raise ValidationError(f"init uses unknown variables {sorted(self.init - known)}")
        names = set()
        compiled = []
        for d in self.directions:
            if d.name in names:
                raise ValidationError(f"duplicate direction name {d.name!r}")
            names.add(d.name)
            used = d.pos | d.neg | bx.variables(d.guard)
            if not used <= known:
                raise ValidationError(
                    f"direction {d.name!r} uses unknown variables {sorted(used - known)}"
                )
            compiled.append(
                (bx.compile_predicate(d.guard, vid), _mask(d.pos, vid), _mask(d.neg, vid))
            )
        object.__setattr__(self, "_vid", vid)
        object.__setattr__(self, "_compiled", compiled)

    def __eq__(self, other):
        return (
            isinstance(other, SymbolicTS)
            and self.vars == other.vars
            and self.init == other.init
            and self.directions == other.directions
        )

    __hash__ = None

    def encode(self, v: Iterable[str]) -> int:
        v = list(v)
        for x in v:
            if x not in self._vid:
                raise UnknownState(x)
        return _mask(v, self._vid)

    def decode(self, m: int) -> frozenset:
        return frozenset(x for i, x in enumerate(self.vars) if m >> i & 1)

    def successor_masks(self, m: int) -> tuple:
        """Successors of state ``m``, one per enabled direction (index order, may repeat)."""
        return tuple((m & ~ng) | ps for g, ps, ng in self._compiled if g(m))

    def reachable(self, limit: int | None = None) -> list:
        init = self.encode(self.init)
        order = [init]
        seen = {init}
        i = 0
        while i < len(order):
            m = order[i]
            i += 1
            for t in self.successor_masks(m):
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    if limit is not None and len(order) > limit:
                        return order
        return order

    def find_deadlock(self):
        """Return a reachable deadlocked state as a frozenset, or ``None``."""
        for m in self.reachable():
            if not self.successor_masks(m):
                return self.decode(m)
        return None


def sts_successors(t: SymbolicTS, v: Iterable[str]) -> set:
    return {t.decode(m) for m in t.successor_masks(t.encode(v))}


def location_name(t: SymbolicTS, v) -> str:
    """Canonical location name of a variable assignment, e.g. ``{x,y}``."""
    v = set(v)
    return "{" + ",".join(x for x in t.vars if x in v) + "}"


def explicit_of_symbolic(t: SymbolicTS) -> TransitionSystem:
    """Expand the reachable part of ``t`` into a directed explicit system.

    Directions are fresh indices ``d1 .. dk`` with ``k`` the maximal
    out-degree; a location with fewer distinct successors repeats its
    canonically first successor on the remaining indices.
    """
    order = t.reachable()
    succ = {}
    for m in order:
        targets = sorted(set(t.successor_masks(m)), key=lambda x: _canon_key(x))
        if not targets:
            raise Deadlock(t.decode(m))
        succ[m] = targets
    width = max(len(v) for v in succ.values())
    dirs = tuple(f"d{i + 1}" for i in range(width))
    names = {m: location_name(t, t.decode(m)) for m in order}
    trans = {}
    for m in order:
        targets = succ[m]
        for i, d in enumerate(dirs):
            target = targets[i] if i < len(targets) else targets[0]
            trans[(names[m], d)] = names[target]
    labels = {names[m]: t.decode(m) for m in order}
    return TransitionSystem(tuple(names[m] for m in order), names[order[0]], dirs, trans, labels)


def _canon_key(mask: int) -> tuple:
    # canonical total order on assignments: by the sorted tuple of set variable indices
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)
