from pathlib import Path

import pytest

from hyperconf import boolexpr as bx
from hyperconf import ltl
from hyperconf.model import (
    Action,
    ConditionalEffect,
    GuardedDirection,
    PlanningProblem,
    StripsAction,
    StripsProblem,
    SymbolicTS,
    TransitionSystem,
)
from hyperconf.solve.kernels import BACKENDS

DATA = Path(__file__).parent / "data"


def make_p0() -> PlanningProblem:
    return PlanningProblem(
        ("s0", "g"), "s0", {"g"},
        (Action.from_effects("a", {"s0": {"g"}, "g": {"g"}}),),
    )


def make_p1() -> PlanningProblem:
    return PlanningProblem(
        ("s0", "x", "g"), "s0", {"g"},
        (
            Action.from_effects("a", {"s0": {"x", "g"}, "x": {"x"}, "g": {"g"}}),
            Action.from_effects("b", {"x": {"g"}, "g": {"g"}}),
        ),
    )


def make_s1() -> StripsProblem:
    return StripsProblem(("px",), (), {"px"}, (StripsAction("mk", (), [ConditionalEffect(bx.TRUE, {"px"}, ())]),))


def make_x0() -> SymbolicTS:
    return SymbolicTS(
        ("x",), (),
        (
            GuardedDirection("d1", bx.Not(bx.Var("x")), {"x"}, ()),
            GuardedDirection("d2", bx.TRUE, (), ()),
        ),
    )


def make_t0() -> TransitionSystem:
    return TransitionSystem(
        ("A", "B"), "A", ("d0", "d1"),
        {("A", "d0"): "A", ("A", "d1"): "B", ("B", "d0"): "B", ("B", "d1"): "B"},
        {"A": set(), "B": {"p"}},
    )


def atom(prop, var):
    return ltl.Atom(prop, var)


def phi1() -> ltl.HyperFormula:
    """exists p1. F p(p1)"""
    return ltl.HyperFormula(("p1",), (), ltl.Eventually(atom("p", "p1")))


def phi2() -> ltl.HyperFormula:
    """exists p1. forall p2. F (p(p1) & !p(p2))"""
    body = ltl.Eventually(ltl.And((atom("p", "p1"), ltl.Not(atom("p", "p2")))))
    return ltl.HyperFormula(("p1",), ("p2",), body)


@pytest.fixture
def p0():
    return make_p0()


@pytest.fixture
def p1():
    return make_p1()


@pytest.fixture
def s1():
    return make_s1()


@pytest.fixture
def x0():
    return make_x0()


@pytest.fixture
def t0():
    return make_t0()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT

    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
