import logging
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperconf import boolexpr as bx
from hyperconf import ltl
from hyperconf.encode_backward import (
    BackwardAtoms,
    build_formula,
    encode_sts,
    encode_ts,
    fail_location,
    goal_entry_synchronised,
    location,
)
from hyperconf.encode_forward import encode_explicit
from hyperconf.model import (
    Action,
    ConditionalEffect,
    PlanningProblem,
    StripsAction,
    StripsProblem,
    explicit_of_symbolic,
    goals_absorbing,
    is_conformant,
    sts_successors,
)
from hyperconf.random_instances import random_problem, random_strips
from hyperconf.solve import Verdict, conformant_search, mc_oracle


def successors(t, l):
    return {t.trans[(l, d)] for d in t.directions}


def reachable(t, start):
    seen, todo = {start}, [start]
    while todo:
        for m in successors(t, todo.pop()):
            if m not in seen:
                seen.add(m)
                todo.append(m)
    return seen


# ---------------------------------------------------------------------------
# explicit


def test_encode_ts_p0(p0):
    t = encode_ts(p0)
    assert set(t.locations) == {"(s0,a)", "(g,a)", "(⚡,a)"}
    assert t.init == "(s0,a)"
    assert successors(t, "(s0,a)") == {"(g,a)"}
    assert t.labels["(g,a)"] == {"act_a", "goal"}
    assert "(⚡,a)" not in reachable(t, t.init)


def test_encode_ts_p1(p1):
    t = encode_ts(p1)
    assert len(t.locations) == 3 * 2 + 2
    assert len(t.locations) == len(p1.states) * len(p1.actions) + len(p1.actions)
    for a in ("a", "b"):
        assert fail_location("b") in successors(t, location("s0", a))
    assert successors(t, location("s0", "a")) == {"(x,a)", "(g,a)", "(⚡,b)"}


def test_fail_locations_never_reach_goal(p1):
    t = encode_ts(p1)
    for a in p1.action_names:
        assert all("goal" not in t.labels[l] for l in reachable(t, fail_location(a)))


def test_build_formula_p0(p0):
    f = build_formula(p0)
    assert (f.exist_vars, f.univ_vars) == (("p1",), ("p2",))
    differ = ltl.xor(ltl.Atom("act_a", "p1"), ltl.Atom("act_a", "p2"))
    assert f.body == ltl.Or((ltl.Eventually(ltl.Atom("goal", "p2")), ltl.Eventually(differ)))
    assert ltl.is_cosafety(f.body)


def test_build_formula_p1_has_one_disjunct_per_action(p1):
    inner = build_formula(p1).body.args[1].arg
    assert isinstance(inner, ltl.Or) and len(inner.args) == 2


@pytest.mark.parametrize("make, expected", [("p0", Verdict.SAT), ("p1", Verdict.SAT)])
def test_fixture_verdicts(request, make, expected):
    p = request.getfixturevalue(make)
    assert mc_oracle(encode_ts(p), build_formula(p)).verdict is expected


def _executions(p, k):
    """(actions, states) pairs for every execution of every plan of length <= k."""
    out = []

    def go(states, acts):
        out.append((tuple(acts), tuple(states)))
        if len(acts) == k:
            return
        for a in p.actions:
            if states[-1] in a.pre:
                for s2 in sorted(a.eff[states[-1]]):
                    go(states + [s2], acts + [a.name])

    go([p.init], [])
    return out


@pytest.mark.parametrize("make", ["p0", "p1"])
def test_trace_correspondence(request, make):
    p = request.getfixturevalue(make)
    t = encode_ts(p)
    # every execution is a path prefix
    for acts, states in _executions(p, 4):
        here = t.init
        for a, s in zip(acts, states[1:]):
            nxt = location(s, a)
            assert nxt in successors(t, here)
            here = nxt
    # every path prefix avoiding the failure locations is an execution
    fails = {fail_location(a) for a in p.action_names}
    frontier = [(t.init,)]
    for _ in range(4):
        longer = []
        for path in frontier:
            for l in successors(t, path[-1]) - fails:
                longer.append(path + (l,))
        frontier = longer
        for path in frontier:
            for (l1, l2) in zip(path, path[1:]):
                s = l1[1:-1].rsplit(",", 1)[0]
                s2, a = l2[1:-1].rsplit(",", 1)
                assert s in p.action(a).pre and s2 in p.action(a).eff[s]


def test_empty_action_set_rejected():
    with pytest.raises(Exception):
        encode_ts(PlanningProblem(("s",), "s", (), ()))


def test_non_absorbing_goal_breaks_the_correspondence(caplog):
    # a1 is not applicable in the goal state, so branches reach it at
    # different times: the model holds although no conformant plan exists
    p = PlanningProblem(("s0", "s1", "s2"), "s0", {"s1"},
                        (Action.from_effects("a1", {"s0": {"s1", "s2"}, "s2": {"s1"}}),))
    assert not goals_absorbing(p)
    with caplog.at_level(logging.WARNING):
        t = encode_ts(p)
    assert "absorbing" in caplog.text
    assert conformant_search(p).verdict is Verdict.UNSAT
    assert mc_oracle(t, build_formula(p)).verdict is Verdict.SAT


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_planning_matches_model_checking(seed):
    p = random_problem(random.Random(seed), 5, 3)
    t = encode_ts(p)
    res = conformant_search(p)
    assert res.verdict == mc_oracle(t, build_formula(p)).verdict
    for a in p.action_names:
        assert all("goal" not in t.labels[l] for l in reachable(t, fail_location(a)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_double_round_trip(seed):
    p = random_problem(random.Random(seed), 4, 2)
    q = encode_explicit(encode_ts(p), build_formula(p))
    assert conformant_search(q).verdict == conformant_search(p).verdict


# ---------------------------------------------------------------------------
# symbolic


def test_encode_sts_s1(s1):
    t = encode_sts(s1)
    assert t.vars == ("px", "act_mk", "goal", "err")
    assert len(t.vars) == len(s1.props) + len(s1.actions) + 2
    assert [d.name for d in t.directions] == ["mk#e1", "mk#err"]
    effect, fail = t.directions
    assert effect.pos == {"px", "act_mk", "goal"}
    assert fail.guard == bx.Var("err")
    # the failure direction never fires from the initial state onwards
    for v in map(t.decode, t.reachable()):
        assert not bx.evaluate(fail.guard, v)


def test_goal_refresh_s1(s1):
    t = encode_sts(s1)
    assert "goal" not in t.init
    (after,) = sts_successors(t, t.init)
    assert "goal" in after


def test_err_blocks_goal_forever():
    p = StripsProblem(("f", "g"), (), {"g"}, (
        StripsAction("a", {"f"}, [ConditionalEffect(bx.TRUE, {"g"}, ())]),
        StripsAction("b", (), [ConditionalEffect(bx.TRUE, {"f"}, ())]),
    ))
    t = encode_sts(p)
    errs = [v for v in map(t.decode, t.reachable()) if "err" in v]
    assert errs
    for v in errs:
        assert all("goal" not in w and "err" in w for w in sts_successors(t, v))


def test_reserved_names_are_renamed():
    p = StripsProblem(("goal", "act_a"), (), {"goal"},
                      (StripsAction("a", (), [ConditionalEffect(bx.TRUE, {"goal"}, ())]),))
    t = encode_sts(p)
    assert t.meta["renaming"] == {"goal": "p_goal", "act_a": "p_act_a"}
    assert len(set(t.vars)) == len(t.vars) == 2 + 1 + 2


def test_backward_atoms_prefix_repeats_until_free():
    atoms = BackwardAtoms.build(["a"], ["goal", "p_goal"])
    assert atoms.source("goal") == "p_p_goal"


def test_direction_count_by_origin():
    rng = random.Random(5)
    for _ in range(50):
        p = random_strips(rng, 3, 3, 3)
        t = encode_sts(p)
        origins = set(t.meta["origins"].values())
        assert len(origins) == sum(len(a.effects) for a in p.actions) + len(p.actions)
        assert len(t.directions) <= 2 * sum(len(a.effects) for a in p.actions) + len(p.actions)


def test_symbolic_backward_agreement_on_200_instances():
    rng = random.Random(11)
    checked = 0
    while checked < 200:
        p = random_strips(rng, 3, 3, 3)
        if not (goal_entry_synchronised(p) or goals_absorbing(p)):
            continue
        t = explicit_of_symbolic(encode_sts(p))
        assert conformant_search(p).verdict == mc_oracle(t, build_formula(p)).verdict
        checked += 1


@pytest.mark.parametrize("make", ["p0", "p1"])
def test_symbolic_backward_of_fixtures(request, make):
    from hyperconf.model import strips_of_explicit

    p = request.getfixturevalue(make)
    s = strips_of_explicit(p)
    t = explicit_of_symbolic(encode_sts(s))
    assert mc_oracle(t, build_formula(s)).verdict is conformant_search(p).verdict


def test_planner_witness_replays_in_model(p1):
    res = conformant_search(p1)
    assert is_conformant(p1, res.witness)
    # the witness spelled as actions drives a path that every same-action path follows to goal
    t = encode_ts(p1)
    current = {t.init}
    for a in res.witness.actions:
        current = {m for l in current for m in successors(t, l) if m.endswith(f",{a})")}
    assert current and all("goal" in t.labels[l] for l in current)
