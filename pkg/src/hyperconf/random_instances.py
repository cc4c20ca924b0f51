"""Seeded generators for randomized round-trip suites.

All generators draw from a caller-supplied ``random.Random`` so a seed
fixes the whole instance stream.
"""
from __future__ import annotations

import random
from itertools import product

from . import boolexpr as bx
from . import ltl
from .model import (
    Action,
    ConditionalEffect,
    GuardedDirection,
    PlanningProblem,
    StripsAction,
    StripsProblem,
    SymbolicTS,
    TransitionSystem,
)

APS = ("p", "q")


def _lit(atom, positive=True):
    a = ltl.Atom(*atom)
    return a if positive else ltl.Not(a)


# Each template maps three (prop, path-var) slots to a co-safety body.
TEMPLATES = (
    ("F a", lambda a, b, c: ltl.Eventually(_lit(a))),
    ("F (a & b)", lambda a, b, c: ltl.Eventually(ltl.And((_lit(a), _lit(b))))),
    ("F (a & !b)", lambda a, b, c: ltl.Eventually(ltl.And((_lit(a), _lit(b, False))))),
    ("(F a) | (F !(b <-> c))", lambda a, b, c: ltl.Or((
        ltl.Eventually(_lit(a)), ltl.Eventually(ltl.Not(ltl.Iff(_lit(b), _lit(c))))))),
    ("X a", lambda a, b, c: ltl.Next(_lit(a))),
    ("X F a", lambda a, b, c: ltl.Next(ltl.Eventually(_lit(a)))),
    ("F (X a)", lambda a, b, c: ltl.Eventually(ltl.Next(_lit(a)))),
    ("a U b", lambda a, b, c: ltl.Until(_lit(a), _lit(b))),
    ("!a U (b & c)", lambda a, b, c: ltl.Until(_lit(a, False), ltl.And((_lit(b), _lit(c))))),
    ("(F a) & (F b)", lambda a, b, c: ltl.And((ltl.Eventually(_lit(a)), ltl.Eventually(_lit(b))))),
    ("X (a | F b)", lambda a, b, c: ltl.Next(ltl.Or((_lit(a), ltl.Eventually(_lit(b)))))),
    ("F (a & X b)", lambda a, b, c: ltl.Eventually(ltl.And((_lit(a), ltl.Next(_lit(b)))))),
)


def template_pool(atoms=(("p", "p1"), ("q", "p1"), ("p", "p2"))) -> list:
    """The template bodies instantiated over three fixed atoms."""
    return [build(*atoms) for _, build in TEMPLATES]


def random_ts(rng: random.Random, max_locations: int = 4, max_dirs: int = 3, aps=APS) -> TransitionSystem:
    n_loc = rng.randint(2, max(2, max_locations))
    n_dir = rng.randint(1, max(1, max_dirs))
    locs = tuple(f"l{i}" for i in range(n_loc))
    dirs = tuple(f"d{i}" for i in range(n_dir))
    trans = {(l, d): rng.choice(locs) for l in locs for d in dirs}
    labels = {l: {ap for ap in aps if rng.random() < 0.5} for l in locs}
    return TransitionSystem(locs, locs[0], dirs, trans, labels)


def random_formula(rng: random.Random, max_quants: int = 3, aps=APS) -> ltl.HyperFormula:
    k = rng.randint(1, max(1, max_quants))
    n = rng.randint(0, k)
    names = tuple(f"p{i + 1}" for i in range(k))
    slots = [(rng.choice(aps), rng.choice(names)) for _ in range(3)]
    _, build = rng.choice(TEMPLATES)
    return ltl.HyperFormula(names[:n], names[n:], build(*slots))


def random_problem(rng: random.Random, max_states: int = 5, max_actions: int = 3) -> PlanningProblem:
    n_s = rng.randint(2, max(2, max_states))
    n_a = rng.randint(1, max(1, max_actions))
    states = tuple(f"s{i}" for i in range(n_s))
    goals = {s for s in states[1:] if rng.random() < 0.35}
    actions = []
    for j in range(n_a):
        eff = {}
        for s in states:
            if s in goals:
                # goal states are absorbing: every action applies and stays in the goal set
                eff[s] = (set(rng.sample(states, rng.randint(1, 2))) & goals) or {s}
            elif rng.random() < 0.75:
                eff[s] = set(rng.sample(states, rng.randint(1, 2)))
        actions.append(Action.from_effects(f"a{j}", eff))
    return PlanningProblem(states, states[0], goals, tuple(actions))


def _random_guard(rng: random.Random, vars_) -> bx.BoolFormula:
    lits = [bx.Var(x) if rng.random() < 0.5 else bx.Not(bx.Var(x)) for x in vars_ if rng.random() < 0.4]
    return bx.conj(*lits)


def _random_update(rng: random.Random, vars_):
    pos, neg = set(), set()
    for x in vars_:
        r = rng.random()
        if r < 0.3:
            pos.add(x)
        elif r < 0.55:
            neg.add(x)
    return pos, neg


def random_sts(rng: random.Random, max_vars: int = 2, max_dirs: int = 3) -> SymbolicTS:
    k = rng.randint(1, max(1, max_vars))
    vars_ = tuple(f"x{i}" for i in range(k))
    init = {x for x in vars_ if rng.random() < 0.5}
    dirs = []
    for j in range(rng.randint(1, max(1, max_dirs))):
        pos, neg = _random_update(rng, vars_)
        dirs.append(GuardedDirection(f"g{j}", _random_guard(rng, vars_), pos, neg))
    t = SymbolicTS(vars_, init, tuple(dirs))
    if t.find_deadlock() is not None:
        dirs.append(GuardedDirection("idle", bx.TRUE, (), ()))
        t = SymbolicTS(vars_, init, tuple(dirs))
    return t


def random_strips(rng: random.Random, max_props: int = 3, max_actions: int = 2,
                  max_effects: int = 2) -> StripsProblem:
    k = rng.randint(1, max(1, max_props))
    props = tuple(f"f{i}" for i in range(k))
    init = {x for x in props if rng.random() < 0.4}
    goals = {x for x in props if rng.random() < 0.4} or {rng.choice(props)}
    actions = []
    for j in range(rng.randint(1, max(1, max_actions))):
        pre = {x for x in props if rng.random() < 0.2}
        effects = []
        for _ in range(rng.randint(1, max(1, max_effects))):
            add, dele = _random_update(rng, props)
            effects.append(ConditionalEffect(_random_guard(rng, props), add, dele))
        actions.append(StripsAction(f"a{j}", pre, effects))
    return StripsProblem(props, init, goals, tuple(actions))


def all_plans(actions, max_len: int):
    for n in range(max_len + 1):
        yield from product(actions, repeat=n)
