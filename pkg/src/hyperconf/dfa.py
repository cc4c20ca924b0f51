"""Tracking automata for co-safety LTL bodies.

States are residual formulas obtained by progressing the body through
letters.  Residuals are identified up to propositional equivalence, treating
atoms and temporal subformulas (``X``, ``U``) as opaque variables; the
equivalence is decided by truth table.  The residual ``true`` is the
accepting sink.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from . import boolexpr as bx
from . import ltl
from .errors import AtomUniverseTooLarge

DEFAULT_ATOM_CAP = 16


@dataclass(frozen=True, eq=False)
class Dfa:
    states: tuple
    init: str
    edges: Mapping  # (q, q') -> BoolFormula over atom keys; absent pairs are false
    accepting: frozenset
    atoms: tuple
    residuals: Mapping = field(default_factory=dict, repr=False)
    # per state: bit positions (into ``atoms``) it reads and the successor of each projected letter
    _reads: Mapping = field(default_factory=dict, repr=False)
    _targets: Mapping = field(default_factory=dict, repr=False)

    def __eq__(self, other):
        return (
            isinstance(other, Dfa)
            and self.states == other.states
            and self.init == other.init
            and dict(self.edges) == dict(other.edges)
            and self.accepting == other.accepting
            and self.atoms == other.atoms
        )

    __hash__ = None

    def edge(self, q: str, q2: str) -> bx.BoolFormula:
        return self.edges.get((q, q2), bx.FALSE)

    def letter_mask(self, letter: Iterable) -> int:
        index = {a: i for i, a in enumerate(self.atoms)}
        m = 0
        for a in letter:
            i = index.get(tuple(a))
            if i is not None:
                m |= 1 << i
        return m

    def successor(self, q: str, mask: int) -> str:
        """Table lookup of the unique successor on the letter encoded by ``mask``."""
        proj = 0
        for j, bit in enumerate(self._reads[q]):
            if mask >> bit & 1:
                proj |= 1 << j
        return self._targets[q][proj]

    def step(self, q: str, letter) -> str:
        """Successor found by evaluating the edge formulas on ``letter`` (a set of atom keys)."""
        letter = {tuple(a) for a in letter}
        found = [q2 for q2 in self.states if bx.evaluate(self.edge(q, q2), letter)]
        if len(found) != 1:
            raise AssertionError(f"automaton not deterministic at {q} on {sorted(letter)}")
        return found[0]

    def is_sink(self, q: str) -> bool:
        return bx.is_valid(self.edge(q, q))

    def check(self) -> None:
        """Verify determinism, totality and the accepting-sink property by enumeration."""
        for q in self.states:
            preds = {q2: bx.compile_predicate(self.edge(q, q2), {a: i for i, a in enumerate(self.atoms)})
                     for q2 in self.states}
            for m in range(1 << len(self.atoms)):
                hits = [q2 for q2, p in preds.items() if p(m)]
                if len(hits) != 1:
                    raise AssertionError(f"state {q}: letter {m:b} has {len(hits)} successors")
            if q in self.accepting:
                if not self.is_sink(q):
                    raise AssertionError(f"accepting state {q} is not a sink")


def dfa_accepts_prefix(d: Dfa, word) -> bool:
    """True iff the run on the finite ``word`` visits an accepting state."""
    q = d.init
    if q in d.accepting:
        return True
    for letter in word:
        q = d.step(q, letter)
        if q in d.accepting:
            return True
    return False


# ---------------------------------------------------------------------------
# construction


def compile_to_dfa(body: ltl.LtlBody, atom_cap: int = DEFAULT_ATOM_CAP, minimize: bool = False) -> Dfa:
    """Build the tracking automaton of a co-safety body."""
    nnf = ltl.to_nnf(body)
    ltl.check_cosafety(nnf)
    universe = ltl.sort_atoms(ltl.atoms(nnf))
    if len(universe) > atom_cap:
        raise AtomUniverseTooLarge(len(universe), atom_cap)
    position = {a: i for i, a in enumerate(universe)}

    init_key, init_formula = _canonical(nnf)
    names = {init_key: "q0"}
    formulas = {"q0": init_formula}
    queue = [init_key]
    edges = {}
    reads = {}
    targets = {}
    i = 0
    while i < len(queue):
        key = queue[i]
        i += 1
        q = names[key]
        f = formulas[q]
        rel = ltl.sort_atoms(ltl.atoms(f))
        row = []
        minterms: dict = {}
        for m in range(1 << len(rel)):
            letter = {rel[j] for j in range(len(rel)) if m >> j & 1}
            nkey, nf = _canonical(_progress(f, letter))
            if nkey not in names:
                names[nkey] = f"q{len(names)}"
                formulas[names[nkey]] = nf
                queue.append(nkey)
            q2 = names[nkey]
            row.append(q2)
            minterms.setdefault(q2, []).append(m)
        for q2, ms in minterms.items():
            edges[(q, q2)] = bx.from_minterms(ms, rel)
        reads[q] = tuple(position[a] for a in rel)
        targets[q] = tuple(row)

    accepting = frozenset(names[k] for k in names if k == _TRUE_KEY)
    d = Dfa(
        states=tuple(names[k] for k in queue),
        init="q0",
        edges=edges,
        accepting=accepting,
        atoms=universe,
        residuals=formulas,
        _reads=reads,
        _targets=targets,
    )
    return minimize_dfa(d) if minimize else d


_TRUE_KEY = ((), 1)
_FALSE_KEY = ((), 0)


def _progress(f: ltl.LtlBody, letter: set) -> ltl.LtlBody:
    if isinstance(f, ltl.BoolConst):
        return f
    if isinstance(f, ltl.Atom):
        return ltl.TRUE if f.key in letter else ltl.FALSE
    if isinstance(f, ltl.Not):
        return ltl.FALSE if f.arg.key in letter else ltl.TRUE
    if isinstance(f, ltl.And):
        return ltl.land(*(_progress(a, letter) for a in f.args))
    if isinstance(f, ltl.Or):
        return ltl.lor(*(_progress(a, letter) for a in f.args))
    if isinstance(f, ltl.Next):
        return f.arg
    if isinstance(f, ltl.Until):
        return ltl.lor(_progress(f.right, letter), ltl.land(_progress(f.left, letter), f))
    raise TypeError(f"unexpected node in co-safety NNF: {f!r}")


def _opaque(f: ltl.LtlBody, out: set) -> None:
    if isinstance(f, (ltl.And, ltl.Or)):
        for a in f.args:
            _opaque(a, out)
    elif isinstance(f, ltl.Not):
        out.add(f.arg)
    elif isinstance(f, ltl.BoolConst):
        pass
    else:
        out.add(f)


def _skeleton(f: ltl.LtlBody, val: Mapping) -> bool:
    if isinstance(f, ltl.BoolConst):
        return f.value
    if isinstance(f, ltl.And):
        return all(_skeleton(a, val) for a in f.args)
    if isinstance(f, ltl.Or):
        return any(_skeleton(a, val) for a in f.args)
    if isinstance(f, ltl.Not):
        return not val[f.arg]
    return val[f]


def _canonical(f: ltl.LtlBody):
    """Canonical key and representative of the propositional class of ``f``."""
    elems = set()
    _opaque(f, elems)
    order = sorted(elems, key=repr)
    k = len(order)
    table = []
    for bits in range(1 << k):
        val = {e: bool(bits >> j & 1) for j, e in enumerate(order)}
        table.append(_skeleton(f, val))
    # drop variables the function does not depend on
    j = 0
    while j < len(order):
        stride = 1 << j
        if all(table[i] == table[i | stride] for i in range(len(table)) if not i & stride):
            table = [table[i] for i in range(len(table)) if not i & stride]
            order.pop(j)
        else:
            j += 1
    packed = sum(1 << i for i, b in enumerate(table) if b)
    key = (tuple(order), packed)
    return key, _rebuild(table, order)


def _rebuild(rows: list, order: list) -> ltl.LtlBody:
    if all(rows):
        return ltl.TRUE
    if not any(rows):
        return ltl.FALSE
    half = len(rows) // 2
    e = order[-1]
    low = _rebuild(rows[:half], order[:-1])
    high = _rebuild(rows[half:], order[:-1])
    if isinstance(e, ltl.Atom):
        return ltl.lor(ltl.land(e, high), ltl.land(ltl.Not(e), low))
    # residuals are monotone in temporal subformulas, so low implies high
    assert all(h or not lo for lo, h in zip(rows[:half], rows[half:]))
    return ltl.lor(low, ltl.land(e, high))


def minimize_dfa(d: Dfa) -> Dfa:
    """Moore partition refinement over the full letter alphabet."""
    letters = range(1 << len(d.atoms))
    block = {q: int(q in d.accepting) for q in d.states}
    while True:
        sig = {q: (block[q],) + tuple(block[d.successor(q, m)] for m in letters) for q in d.states}
        ids: dict = {}
        new_block = {q: ids.setdefault(sig[q], len(ids)) for q in d.states}
        if len(ids) == len(set(block.values())):
            block = new_block
            break
        block = new_block
    rep = {}
    for q in d.states:
        rep.setdefault(block[q], q)
    states = tuple(q for q in d.states if rep[block[q]] == q)
    full = list(range(len(d.atoms)))
    edges = {}
    targets = {}
    reads = {}
    for q in states:
        row = [rep[block[d.successor(q, m)]] for m in letters]
        groups: dict = {}
        for m, q2 in enumerate(row):
            groups.setdefault(q2, []).append(m)
        for q2, ms in groups.items():
            edges[(q, q2)] = bx.from_minterms(ms, d.atoms)
        targets[q] = tuple(row)
        reads[q] = tuple(full)
    return Dfa(
        states=states,
        init=rep[block[d.init]],
        edges=edges,
        accepting=frozenset(q for q in states if q in d.accepting),
        atoms=d.atoms,
        residuals={q: d.residuals[q] for q in states if q in d.residuals},
        _reads=reads,
        _targets=targets,
    )


def all_words(atoms: tuple, max_len: int):
    """Every letter-word over ``atoms`` of length at most ``max_len``."""
    letters = [frozenset(a for j, a in enumerate(atoms) if m >> j & 1) for m in range(1 << len(atoms))]
    for n in range(max_len + 1):
        yield from product(letters, repeat=n)
