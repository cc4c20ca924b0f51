import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperconf import boolexpr as bx
from hyperconf.errors import (
    Deadlock,
    EmptyEffect,
    NotApplicable,
    Undefined,
    UnknownAction,
    UnknownState,
    ValidationError,
)
from hyperconf.model import (
    Action,
    BeliefState,
    ConditionalEffect,
    GuardedDirection,
    Plan,
    PlanningProblem,
    StripsAction,
    StripsProblem,
    SymbolicTS,
    exec_plan,
    explicit_of_symbolic,
    explicit_successors,
    goals_absorbing,
    is_conformant,
    strips_of_explicit,
    strips_successors,
    sts_successors,
)
from hyperconf.random_instances import all_plans, random_problem, random_sts


def brute_conformant(p: PlanningProblem, plan) -> bool:
    """Follow every resolution of the non-determinism one path at a time."""

    def go(s, rest):
        if not rest:
            return s in p.goals
        act = p.action(rest[0])
        if s not in act.pre:
            return False
        return all(go(t, rest[1:]) for t in act.eff[s])

    return go(p.init, tuple(plan))


# ---------------------------------------------------------------------------
# explicit planning


def test_successors_of_p1(p1):
    assert explicit_successors(p1, "s0", "a") == {"x", "g"}
    assert explicit_successors(p1, "g", "a") == {"g"}


def test_successors_not_applicable(p1):
    with pytest.raises(NotApplicable) as exc:
        explicit_successors(p1, "s0", "b")
    assert (exc.value.state, exc.value.action) == ("s0", "b")


@pytest.mark.parametrize("state, action, error", [("zz", "a", UnknownState), ("s0", "zz", UnknownAction)])
def test_successors_unknown_names(p1, state, action, error):
    with pytest.raises(error):
        explicit_successors(p1, state, action)


@pytest.mark.parametrize("plan, expected", [((), {"s0"}), (("a",), {"x", "g"}), (("a", "b"), {"g"})])
def test_exec_plan_p1(p1, plan, expected):
    out = exec_plan(p1, p1.belief({"s0"}), Plan(plan))
    assert p1.names(out) == expected


def test_exec_plan_undefined(p1):
    with pytest.raises(Undefined) as exc:
        exec_plan(p1, p1.belief({"s0"}), Plan(("b",)))
    assert (exc.value.step, exc.value.state) == (0, "s0")


@pytest.mark.parametrize("plan, expected", [(("a", "b"), True), (("a",), False), ((), False)])
def test_is_conformant_p1(p1, plan, expected):
    assert is_conformant(p1, Plan(plan)) is expected


def test_p1_conformance_matches_brute_force(p1):
    for plan in all_plans(p1.action_names, 3):
        assert is_conformant(p1, Plan(plan)) == brute_conformant(p1, plan)


def test_goal_closure_violation_is_an_error():
    with pytest.raises(ValidationError, match="goal closure"):
        PlanningProblem(("s", "g"), "s", {"g"}, (Action.from_effects("a", {"g": {"s"}}),))


def test_goal_closure_check_can_be_disabled():
    p = PlanningProblem(("s", "g"), "s", {"g"}, (Action.from_effects("a", {"g": {"s"}}),),
                        check_goal_closure=False)
    assert p.goals == {"g"}


@pytest.mark.parametrize("eff", [{"s": set()}, {"s": {"nowhere"}}])
def test_invalid_effects(eff):
    with pytest.raises(ValidationError):
        PlanningProblem(("s",), "s", (), (Action.from_effects("a", eff),))


def test_action_effect_domain_must_equal_pre():
    with pytest.raises(ValidationError):
        Action("a", frozenset({"s", "t"}), {"s": {"s"}})


def test_belief_state_is_canonical():
    assert BeliefState((3, 1, 3)) == BeliefState((1, 3))
    assert hash(BeliefState((2, 1))) == hash(BeliefState((1, 2)))
    with pytest.raises(ValidationError):
        BeliefState(())


def test_goals_absorbing():
    p = PlanningProblem(("s0", "s1", "s2"), "s0", {"s1"},
                        (Action.from_effects("a1", {"s0": {"s1", "s2"}, "s2": {"s1"}}),))
    assert goals_absorbing(p) is False
    assert goals_absorbing(PlanningProblem(("s", "g"), "s", {"g"},
                                           (Action.from_effects("a", {"s": {"g"}, "g": {"g"}}),)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_conformance_agrees_with_path_enumeration(seed):
    p = random_problem(random.Random(seed), max_states=5, max_actions=3)
    for plan in all_plans(p.action_names, 3):
        assert is_conformant(p, Plan(plan)) == brute_conformant(p, plan)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_exec_plan_is_compositional(seed):
    p = random_problem(random.Random(seed), max_states=5, max_actions=2)
    start = p.belief({p.init})
    for left, right in product(list(all_plans(p.action_names, 2)), repeat=2):
        try:
            whole = exec_plan(p, start, Plan(left + right))
        except Undefined:
            continue
        assert whole == exec_plan(p, exec_plan(p, start, Plan(left)), Plan(right))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_conformance_extends_by_applicable_actions(seed):
    p = random_problem(random.Random(seed), max_states=4, max_actions=3)
    for plan in all_plans(p.action_names, 3):
        if not is_conformant(p, Plan(plan)):
            continue
        final = p.names(exec_plan(p, p.belief({p.init}), Plan(plan)))
        for a in p.actions:
            if final <= a.pre:
                assert is_conformant(p, Plan(plan + (a.name,)))


# ---------------------------------------------------------------------------
# STRIPS


def test_strips_successors_s1(s1):
    assert strips_successors(s1, set(), "mk") == {frozenset({"px"})}
    assert strips_successors(s1, {"px"}, "mk") == {frozenset({"px"})}


def test_strips_empty_effect():
    p = StripsProblem(("px",), (), {"px"}, (StripsAction("a", (), [ConditionalEffect(bx.Var("px"), (), ())]),))
    with pytest.raises(EmptyEffect):
        strips_successors(p, set(), "a")
    # the planner semantics treats it as not applicable
    assert not p.applicable(p.initial_state(), 0)


def test_strips_not_applicable():
    p = StripsProblem(("px", "q"), (), {"px"}, (StripsAction("a", {"q"}, [ConditionalEffect(bx.TRUE, {"px"}, ())]),))
    with pytest.raises(NotApplicable):
        strips_successors(p, set(), "a")


def test_strips_goal_is_disjunctive():
    p = StripsProblem(("f", "g"), {"f"}, {"f", "g"}, (StripsAction("a", (), [ConditionalEffect(bx.TRUE, (), ())]),))
    assert is_conformant(p, Plan(()))


def test_add_delete_overlap_rejected():
    with pytest.raises(ValidationError):
        ConditionalEffect(bx.TRUE, {"x"}, {"x"})


def test_strips_unknown_props_rejected():
    with pytest.raises(ValidationError):
        StripsProblem(("f",), (), {"f"}, (StripsAction("a", {"zz"}, [ConditionalEffect(bx.TRUE, (), ())]),))


def test_empty_effect_warning_lists_pairs(caplog):
    p = StripsProblem(("px",), (), {"px"}, (StripsAction("a", (), [ConditionalEffect(bx.Var("px"), (), ())]),))
    assert p.warn_empty_effects()
    assert "a" in caplog.text


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_strips_of_explicit_preserves_conformance(seed):
    p = random_problem(random.Random(seed), max_states=4, max_actions=2)
    s = strips_of_explicit(p)
    for plan in all_plans(p.action_names, 3):
        assert is_conformant(p, Plan(plan)) == is_conformant(s, Plan(plan))


# ---------------------------------------------------------------------------
# symbolic transition systems


def test_sts_successors_x0(x0):
    assert sts_successors(x0, set()) == {frozenset({"x"}), frozenset()}
    assert sts_successors(x0, {"x"}) == {frozenset({"x"})}


def test_sts_successors_without_directions():
    assert sts_successors(SymbolicTS(("x",), (), ()), {"x"}) == set()


def test_explicit_of_symbolic_x0(x0):
    t = explicit_of_symbolic(x0)
    assert len(t.locations) == 2
    assert len(t.directions) == 2
    x_loc = next(l for l in t.locations if t.labels[l])
    assert t.labels[x_loc] == {"x"}


def test_explicit_of_symbolic_single_fixed_point():
    t = explicit_of_symbolic(SymbolicTS(("x",), {"x"}, (GuardedDirection("d", bx.TRUE, (), ()),)))
    assert len(t.locations) == 1 and len(t.directions) == 1
    assert t.trans[(t.init, t.directions[0])] == t.init


def test_explicit_of_symbolic_deadlock():
    t = SymbolicTS(("x",), (), (GuardedDirection("d", bx.Var("x"), (), {"x"}),))
    with pytest.raises(Deadlock):
        explicit_of_symbolic(t)


def test_guarded_direction_overlap_rejected():
    with pytest.raises(ValidationError):
        GuardedDirection("d", bx.TRUE, {"x"}, {"x"})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_explicit_of_symbolic_edges_are_real(seed):
    t = random_sts(random.Random(seed), max_vars=3, max_dirs=3)
    e = explicit_of_symbolic(t)
    by_name = {l: frozenset(e.labels[l]) for l in e.locations}
    for l in e.locations:
        real = sts_successors(t, by_name[l])
        reached = {by_name[e.trans[(l, d)]] for d in e.directions}
        assert reached == real
