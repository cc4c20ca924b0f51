"""JSON documents for systems, problems and plans.

Every document carries a ``kind`` field and is validated against the
schema of that kind shipped in ``schemas/``.  Output is canonical: sorted
keys, two-space indent, trailing newline, so equal values serialise to equal
bytes.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .. import boolexpr as bx
from ..errors import SchemaError, ValidationError
from ..model import (
    Action,
    ConditionalEffect,
    GuardedDirection,
    Plan,
    PlanningProblem,
    StripsAction,
    StripsProblem,
    SymbolicTS,
    TransitionSystem,
)

KINDS = ("transition_system", "planning_problem", "strips_problem", "symbolic_ts", "plan")


@lru_cache(maxsize=None)
def schema(kind: str) -> dict:
    text = resources.files(__package__).joinpath("schemas", f"{kind}.schema.json").read_text("utf-8")
    return json.loads(text)


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def validate(doc, kind: str | None = None) -> str:
    if not isinstance(doc, dict):
        raise SchemaError("", "document must be an object")
    kind = kind or doc.get("kind")
    if kind not in KINDS:
        raise SchemaError("/kind", f"unknown kind {doc.get('kind')!r}")
    validator = jsonschema.Draft202012Validator(schema(kind))
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(e.absolute_path), e.message))
    if errors:
        e = errors[0]
        raise SchemaError(_pointer(e.absolute_path), e.message)
    return kind


# ---------------------------------------------------------------------------
# formulas


def formula_to_json(f: bx.BoolFormula):
    if isinstance(f, bx.Const):
        return f.value
    if isinstance(f, bx.Var):
        return {"var": f.name}
    if isinstance(f, bx.Not):
        return {"not": formula_to_json(f.arg)}
    if isinstance(f, bx.And):
        return {"and": [formula_to_json(a) for a in f.args]}
    if isinstance(f, bx.Or):
        return {"or": [formula_to_json(a) for a in f.args]}
    if isinstance(f, bx.Implies):
        return {"implies": [formula_to_json(f.left), formula_to_json(f.right)]}
    if isinstance(f, bx.Iff):
        return {"iff": [formula_to_json(f.left), formula_to_json(f.right)]}
    raise TypeError(f"not a boolean formula: {f!r}")


def formula_from_json(x) -> bx.BoolFormula:
    if isinstance(x, bool):
        return bx.Const(x)
    if "var" in x:
        return bx.Var(x["var"])
    if "not" in x:
        return bx.Not(formula_from_json(x["not"]))
    if "and" in x:
        return bx.And(tuple(formula_from_json(a) for a in x["and"]))
    if "or" in x:
        return bx.Or(tuple(formula_from_json(a) for a in x["or"]))
    if "implies" in x:
        return bx.Implies(*(formula_from_json(a) for a in x["implies"]))
    return bx.Iff(*(formula_from_json(a) for a in x["iff"]))


# ---------------------------------------------------------------------------
# values -> documents


def _sorted_by(items, order) -> list:
    pos = {x: i for i, x in enumerate(order)}
    return sorted(items, key=lambda x: (pos.get(x, len(pos)), x))


def to_document(value) -> dict:
    if isinstance(value, TransitionSystem):
        return {
            "kind": "transition_system",
            "locations": list(value.locations),
            "init": value.init,
            "directions": list(value.directions),
            "transitions": [
                {"from": l, "dir": d, "to": value.trans[(l, d)]}
                for l in value.locations for d in value.directions
            ],
            "labels": {l: sorted(value.labels[l]) for l in value.locations},
        }
    if isinstance(value, PlanningProblem):
        return {
            "kind": "planning_problem",
            "states": list(value.states),
            "init": value.init,
            "goals": _sorted_by(value.goals, value.states),
            "actions": [
                {
                    "name": a.name,
                    "pre": _sorted_by(a.pre, value.states),
                    "effects": {s: _sorted_by(a.eff[s], value.states) for s in _sorted_by(a.pre, value.states)},
                }
                for a in value.actions
            ],
        }
    if isinstance(value, StripsProblem):
        doc = {
            "kind": "strips_problem",
            "props": list(value.props),
            "init": _sorted_by(value.init, value.props),
            "goals": _sorted_by(value.goals, value.props),
            "actions": [
                {
                    "name": a.name,
                    "pre": _sorted_by(a.pre, value.props),
                    "effects": [
                        {
                            "condition": formula_to_json(e.condition),
                            "add": _sorted_by(e.add, value.props),
                            "del": _sorted_by(e.delete, value.props),
                        }
                        for e in a.effects
                    ],
                }
                for a in value.actions
            ],
        }
        if value.meta:
            doc["meta"] = _plain(value.meta)
        return doc
    if isinstance(value, SymbolicTS):
        doc = {
            "kind": "symbolic_ts",
            "vars": list(value.vars),
            "init": _sorted_by(value.init, value.vars),
            "directions": [
                {
                    "name": d.name,
                    "guard": formula_to_json(d.guard),
                    "pos": _sorted_by(d.pos, value.vars),
                    "neg": _sorted_by(d.neg, value.vars),
                }
                for d in value.directions
            ],
        }
        if value.meta:
            doc["meta"] = _plain(value.meta)
        return doc
    if isinstance(value, Plan):
        return {"kind": "plan", "actions": list(value.actions)}
    raise TypeError(f"cannot serialise {type(value).__name__}")


def _plain(x):
    if isinstance(x, dict) or hasattr(x, "items"):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in x]
        return sorted(items) if isinstance(x, (set, frozenset)) else items
    return x


# ---------------------------------------------------------------------------
# documents -> values


def from_document(doc):
    kind = validate(doc)
    try:
        return _BUILDERS[kind](doc)
    except ValidationError as exc:
        raise SchemaError("", str(exc)) from None


def _ts(doc) -> TransitionSystem:
    trans = {}
    for i, t in enumerate(doc["transitions"]):
        key = (t["from"], t["dir"])
        if key in trans:
            raise SchemaError(f"/transitions/{i}", "duplicate transition")
        trans[key] = t["to"]
    locs, dirs = doc["locations"], doc["directions"]
    if any((l, d) not in trans for l in locs for d in dirs):
        raise SchemaError("/transitions", "not total")
    for i, t in enumerate(doc["transitions"]):
        if t["from"] not in locs or t["to"] not in locs or t["dir"] not in dirs:
            raise SchemaError(f"/transitions/{i}", "unknown location or direction")
    missing = set(locs) - set(doc["labels"])
    if missing:
        raise SchemaError("/labels", f"missing labels for {sorted(missing)}")
    return TransitionSystem(tuple(locs), doc["init"], tuple(dirs), trans, doc["labels"])


def _pp(doc) -> PlanningProblem:
    actions = []
    for i, a in enumerate(doc["actions"]):
        if set(a["pre"]) != set(a["effects"]):
            raise SchemaError(f"/actions/{i}/effects", "effect domain differs from precondition")
        actions.append(Action(a["name"], frozenset(a["pre"]), a["effects"]))
    return PlanningProblem(tuple(doc["states"]), doc["init"], frozenset(doc["goals"]), tuple(actions))


def _strips(doc) -> StripsProblem:
    actions = []
    for a in doc["actions"]:
        effects = [ConditionalEffect(formula_from_json(e["condition"]), e["add"], e["del"]) for e in a["effects"]]
        actions.append(StripsAction(a["name"], a["pre"], effects))
    p = StripsProblem(tuple(doc["props"]), doc["init"], doc["goals"], tuple(actions), doc.get("meta", {}))
    p.warn_empty_effects()
    return p


def _sts(doc) -> SymbolicTS:
    dirs = [GuardedDirection(d["name"], formula_from_json(d["guard"]), d["pos"], d["neg"]) for d in doc["directions"]]
    return SymbolicTS(tuple(doc["vars"]), doc["init"], tuple(dirs), doc.get("meta", {}))


def _plan(doc) -> Plan:
    return Plan(tuple(doc["actions"]))


_BUILDERS = {
    "transition_system": _ts,
    "planning_problem": _pp,
    "strips_problem": _strips,
    "symbolic_ts": _sts,
    "plan": _plan,
}


# ---------------------------------------------------------------------------
# text and files


def dumps(value) -> str:
    return json.dumps(to_document(value), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_document(doc)


def save(value, path) -> None:
    Path(path).write_text(dumps(value), encoding="utf-8", newline="\n")


def load(path):
    return loads(Path(path).read_text(encoding="utf-8"))
