"""Breadth-first conformant planner over belief states."""
from __future__ import annotations

import time
from array import array
from dataclasses import dataclass

from ..errors import InternalError, ResourceLimit
from ..model import Plan, is_conformant, reachable_states
from . import kernels
from .result import SolveResult, Verdict

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class CompiledProblem:
    """Reachable fragment of a planning semantics as dense arrays.

    ``app[s * A + a]`` flags applicability; the successors of ``(s, a)`` are
    ``targets[offsets[k]:offsets[k + 1]]`` with ``k = s * A + a``.
    """

    states: tuple  # dense id -> native state of the semantics
    n_actions: int
    app: array
    offsets: array
    targets: array
    goal: array


def compile_problem(sem) -> CompiledProblem:
    order = reachable_states(sem)
    dense = {s: i for i, s in enumerate(order)}
    n_actions = len(sem.action_names)
    app = array("B")
    offsets = array("q", [0])
    targets = array("i")
    for s in order:
        for a in range(n_actions):
            if sem.applicable(s, a):
                app.append(1)
                targets.extend(dense[t] for t in sem.successors(s, a))
            else:
                app.append(0)
            offsets.append(len(targets))
    goal = array("B", (1 if sem.is_goal(s) else 0 for s in order))
    return CompiledProblem(tuple(order), n_actions, app, offsets, targets, goal)


def conformant_search(sem, cap: int = DEFAULT_CAP, backend: str | None = None) -> SolveResult:
    """Shortest conformant plan, ties broken by action order; UNSAT when none exists.

    Raises ``ResourceLimit`` once more than ``cap`` beliefs were discovered.
    """
    t0 = time.perf_counter()
    c = compile_problem(sem)
    kernel = kernels.get_kernel(backend)
    status, plan_ids, discovered, peak = kernel(
        len(c.states), c.n_actions, 0, c.app, c.offsets, c.targets, c.goal, cap
    )
    stats = {
        "beliefs": discovered,
        "frontier_peak": peak,
        "states": len(c.states),
        "wall_ms": round((time.perf_counter() - t0) * 1000, 3),
    }
    if status == kernels.CAPPED:
        raise ResourceLimit(discovered)
    if status == kernels.UNSAT:
        return SolveResult(Verdict.UNSAT, None, stats)
    names = sem.action_names
    plan = Plan(tuple(names[a] for a in plan_ids))
    if not is_conformant(sem, plan):
        raise InternalError(f"search returned a non-conformant plan {plan}")
    return SolveResult(Verdict.SAT, plan, stats)
