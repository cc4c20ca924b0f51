"""Direct model checking of exists*-forall* formulas on explicit systems.

This engine works on the self-composed system itself rather than on a
planning problem: a belief pairs the locations of the existential copies,
which the searched direction vector fixes, with the set of possible
(universal locations, automaton state) pairs.
"""
from __future__ import annotations

import time
from collections import deque
from itertools import product

from ..dfa import Dfa, compile_to_dfa
from ..errors import ResourceLimit
from ..ltl import HyperFormula
from ..model import TransitionSystem
from .result import OracleConfig, SolveResult, Verdict

DEFAULT_CAP = 10**6


class _Stepper:
    """Automaton steps by edge-formula evaluation, memoised per (state, letter)."""

    def __init__(self, d: Dfa, t: TransitionSystem, path_vars: tuple):
        self.d = d
        self.path_vars = path_vars
        relevant = set(d.atoms)
        self.contrib = [
            {l: frozenset((ap, v) for ap in t.labels[l] if (ap, v) in relevant) for l in t.locations}
            for v in path_vars
        ]
        self.cache = {}

    def letter(self, locs: tuple) -> frozenset:
        out = frozenset()
        for i, l in enumerate(locs):
            out |= self.contrib[i][l]
        return out

    def step(self, q: str, locs: tuple) -> str:
        key = (q, self.letter(locs))
        q2 = self.cache.get(key)
        if q2 is None:
            q2 = self.cache[key] = self.d.step(q, key[1])
        return q2


def mc_oracle(t: TransitionSystem, f: HyperFormula, cap: int = DEFAULT_CAP) -> SolveResult:
    """Decide ``t |= f``; the witness is the sequence of existential direction vectors."""
    started = time.perf_counter()
    d = compile_to_dfa(f.body)
    n, m = f.n, f.m
    st = _Stepper(d, t, f.path_vars)
    vectors = list(product(t.directions, repeat=n))
    univ_moves = list(product(t.directions, repeat=m))
    kappa = t.trans
    accepting = d.accepting

    def move(locs, dirs):
        return tuple(kappa[(l, dr)] for l, dr in zip(locs, dirs))

    def is_goal(belief):
        return all(q in accepting for _, q in belief[1])

    start = ((t.init,) * n, frozenset({((t.init,) * m, d.init)}))
    parent = {start: None}
    peak = 1

    def stats():
        return {"beliefs": len(parent), "frontier_peak": peak,
                "wall_ms": round((time.perf_counter() - started) * 1000, 3)}

    if is_goal(start):
        return SolveResult(Verdict.SAT, (), stats())
    queue = deque([start])
    while queue:
        belief = queue.popleft()
        ex, members = belief
        for vec in vectors:
            ex2 = move(ex, vec)
            nxt = set()
            for univ, q in members:
                q2 = st.step(q, ex + univ)
                for dp in univ_moves:
                    nxt.add((move(univ, dp), q2))
            b2 = (ex2, frozenset(nxt))
            if b2 in parent:
                continue
            parent[b2] = (belief, vec)
            queue.append(b2)
            peak = max(peak, len(queue))
            if is_goal(b2):
                return SolveResult(Verdict.SAT, _trace(parent, b2), stats())
            if len(parent) > cap:
                raise ResourceLimit(len(parent))
    return SolveResult(Verdict.UNSAT, None, stats())


def _trace(parent, b) -> tuple:
    out = []
    while parent[b] is not None:
        b, vec = parent[b]
        out.append(vec)
    return tuple(reversed(out))


def enum_oracle(t: TransitionSystem, f: HyperFormula, cfg: OracleConfig) -> SolveResult:
    """One-sided bounded check: SAT if some existential prefix of length ``K`` works for
    every universal prefix of length ``K``, UNKNOWN otherwise.
    """
    if cfg.enum_bound is None:
        raise ValueError("enum_oracle needs OracleConfig.enum_bound")
    k_max = cfg.enum_bound
    started = time.perf_counter()
    d = compile_to_dfa(f.body)
    n, m = f.n, f.m
    st = _Stepper(d, t, f.path_vars)
    vectors = list(product(t.directions, repeat=n))
    univ_moves = list(product(t.directions, repeat=m))
    kappa = t.trans
    tried = 0

    def move(locs, dirs):
        return tuple(kappa[(l, dr)] for l, dr in zip(locs, dirs))

    def all_accept(seq, ex, univ, q, depth) -> bool:
        # the run reads one letter per step; accepting states are sinks
        if q in d.accepting:
            return True
        if depth == len(seq):
            return False
        q2 = st.step(q, ex + univ)
        ex2 = move(ex, seq[depth])
        return all(all_accept(seq, ex2, move(univ, dp), q2, depth + 1) for dp in univ_moves)

    init_ex, init_univ = (t.init,) * n, (t.init,) * m
    for seq in product(vectors, repeat=k_max):
        tried += 1
        if all_accept(seq, init_ex, init_univ, d.init, 0):
            stats = {"sequences": tried, "wall_ms": round((time.perf_counter() - started) * 1000, 3)}
            return SolveResult(Verdict.SAT, seq, stats)
    stats = {"sequences": tried, "wall_ms": round((time.perf_counter() - started) * 1000, 3)}
    return SolveResult(Verdict.UNKNOWN, None, stats)
