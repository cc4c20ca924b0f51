"""Conformant planning to model checking.

The transition system records, in each location, the current planning state
and the action played last; a special failure location remembers an action
that was played where it was not applicable.  The formula asks for one path
such that every path replaying the same action sequence reaches a goal.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

from . import boolexpr as bx
from . import ltl
from .errors import ValidationError
from .model import (
    GuardedDirection,
    PlanningProblem,
    StripsProblem,
    SymbolicTS,
    TransitionSystem,
    goals_absorbing,
)

log = logging.getLogger(__name__)

FAIL = "⚡"
GOAL_PROP = "goal"
ERR_PROP = "err"
EXISTS_VAR = "p1"
FORALL_VAR = "p2"


def act_prop(action: str) -> str:
    return f"act_{action}"


@dataclass(frozen=True)
class BackwardAtoms:
    act_props: Mapping
    goal_prop: str = GOAL_PROP
    err_prop: str = ERR_PROP
    renaming: Mapping = field(default_factory=dict)

    @classmethod
    def build(cls, actions, source_props=()) -> "BackwardAtoms":
        """Reserved names for ``actions``; clashing source props get a ``p_`` prefix."""
        acts = {a: act_prop(a) for a in actions}
        reserved = set(acts.values()) | {GOAL_PROP, ERR_PROP}
        taken = set(source_props) | reserved
        renaming = {}
        for x in source_props:
            if x in reserved:
                new = "p_" + x
                while new in taken:
                    new = "p_" + new
                taken.add(new)
                renaming[x] = new
        return cls(acts, renaming=renaming)

    def source(self, x: str) -> str:
        return self.renaming.get(x, x)


ABSORB_CHECK_LIMIT = 10**5


def goal_entry_synchronised(p: StripsProblem) -> bool:
    """No effect deletes a goal prop, and an action adds one under all of its effects or none.

    Then every execution that survives the first goal-adding action enters
    the goal at that very step, which is all the correspondence needs.  The
    finish action of grounded PDDL problems has this shape.
    """
    for a in p.actions:
        adds = [bool(e.add & p.goals) for e in a.effects]
        if any(e.delete & p.goals for e in a.effects) or (any(adds) and not all(adds)):
            return False
    return True


def _warn_if_not_absorbing(p) -> None:
    if isinstance(p, StripsProblem) and goal_entry_synchronised(p):
        return
    if goals_absorbing(p, ABSORB_CHECK_LIMIT) is False:
        log.warning("some reachable goal state is not absorbing under every action; "
                    "the model may hold although no conformant plan exists")


def location(state: str, action: str) -> str:
    return f"({state},{action})"


def fail_location(action: str) -> str:
    return f"({FAIL},{action})"


def encode_ts(p: PlanningProblem) -> TransitionSystem:
    """Transition system generating every execution of every plan of ``p``.

    From ``(s, a)`` the system moves to ``(s', a')`` for each applicable
    ``a'`` and ``s'`` in its effect, and to the failure location of each
    non-applicable ``a'``.  Directions are indices ``d1 .. dk`` padded with
    the first successor.  Planner and checker verdicts coincide when reachable
    goal states are absorbing; otherwise a warning is logged.
    """
    if not p.actions:
        raise ValidationError("the problem needs at least one action")
    _warn_if_not_absorbing(p)
    atoms = BackwardAtoms.build(p.action_names)
    acts = p.action_names
    succ = {}
    for s in p.states:
        for a in acts:
            out = []
            for act in p.actions:
                if s in act.pre:
                    out.extend(location(t, act.name) for t in sorted(act.eff[s], key=p.state_id))
                else:
                    out.append(fail_location(act.name))
            succ[location(s, a)] = out
    for a in acts:
        succ[fail_location(a)] = [fail_location(b) for b in acts]
    locations = tuple(succ)
    if len(set(locations)) != len(locations):
        raise ValidationError("location names collide; rename states")
    width = max(len(v) for v in succ.values())
    dirs = tuple(f"d{i + 1}" for i in range(width))
    trans = {}
    for l, targets in succ.items():
        for i, d in enumerate(dirs):
            trans[(l, d)] = targets[i] if i < len(targets) else targets[0]
    labels = {}
    for s in p.states:
        for a in acts:
            lab = {atoms.act_props[a]}
            if s in p.goals:
                lab.add(atoms.goal_prop)
            labels[location(s, a)] = lab
    for a in acts:
        labels[fail_location(a)] = {atoms.act_props[a]}
    return TransitionSystem(locations, location(p.init, acts[0]), dirs, trans, labels)


def build_formula(p) -> ltl.HyperFormula:
    """``exists p1. forall p2. F goal(p2) | F (some act differs between p1 and p2)``."""
    atoms = BackwardAtoms.build(p.action_names)
    differ = ltl.lor(*(
        ltl.xor(ltl.Atom(atoms.act_props[a], EXISTS_VAR), ltl.Atom(atoms.act_props[a], FORALL_VAR))
        for a in p.action_names
    ))
    body = ltl.Or((
        ltl.Eventually(ltl.Atom(atoms.goal_prop, FORALL_VAR)),
        ltl.Eventually(differ),
    ))
    return ltl.HyperFormula((EXISTS_VAR,), (FORALL_VAR,), body)


def encode_sts(p: StripsProblem) -> SymbolicTS:
    """Symbolic system over the problem's props plus act, goal and err flags.

    Each conditional effect becomes one direction, or two when whether a goal
    prop survives depends on the pre-state.  Each action adds one failure
    direction, enabled once ``err`` holds or where no effect of the action
    can fire.
    """
    _warn_if_not_absorbing(p)
    atoms = BackwardAtoms.build(p.action_names, p.props)
    src = atoms.source
    acts = p.action_names
    act_vars = [atoms.act_props[a] for a in acts]
    goal, err = atoms.goal_prop, atoms.err_prop
    vars_ = [src(x) for x in p.props] + act_vars + [goal, err]
    init = {src(x) for x in p.init}
    if p.init & p.goals:
        init.add(goal)
    goal_vars = [src(g) for g in sorted(p.goals, key=p.props.index)]
    directions = []
    origins = {}
    for a in p.actions:
        mine = atoms.act_props[a.name]
        others = {v for v in act_vars if v != mine}
        pre = bx.conj_vars(sorted(src(x) for x in a.pre))
        for i, e in enumerate(a.effects):
            origin = f"{a.name}#e{i + 1}"
            cond = bx.rename(e.condition, src)
            guard = bx.conj(pre, cond, bx.Not(bx.Var(err)))
            pos = {src(x) for x in e.add} | {mine}
            neg = {src(x) for x in e.delete} | others
            if e.add & p.goals:
                variants = [(origin, guard, pos | {goal}, neg)]
            else:
                survivors = [src(g) for g in sorted(p.goals - e.delete, key=p.props.index)]
                if not survivors:
                    variants = [(origin, guard, pos, neg | {goal})]
                else:
                    held = bx.disj(*(bx.Var(g) for g in survivors))
                    variants = [
                        (origin + "+goal", bx.conj(guard, held), pos | {goal}, neg),
                        (origin + "-goal", bx.conj(guard, bx.neg(held)), pos, neg | {goal}),
                    ]
            for name, g, ps, ng in variants:
                directions.append(GuardedDirection(name, g, ps, ng))
                origins[name] = origin
        fires = bx.simplify(bx.conj(pre, bx.disj(*(bx.rename(e.condition, src) for e in a.effects))))
        name = f"{a.name}#{ERR_PROP}"
        directions.append(GuardedDirection(
            name, bx.disj(bx.Var(err), bx.neg(fires)), {mine, err}, others | {goal}))
        origins[name] = name
    meta = {"origins": origins, "goal_vars": tuple(goal_vars)}
    if atoms.renaming:
        meta["renaming"] = dict(atoms.renaming)
    return SymbolicTS(tuple(vars_), init, tuple(directions), meta)
