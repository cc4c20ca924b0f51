"""Command-line front end.

Every subcommand prints one machine-readable ``key=value`` record on stdout,
optionally followed by human-readable detail (``-v``).  Diagnostics go to
stderr.  Exit codes: 0 success or SAT, 1 UNSAT or UNKNOWN (or a round-trip
disagreement), 2 usage or input error, 3 resource limit or internal error.
"""
from __future__ import annotations

import argparse
import logging
import random
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import encode_backward as bwd
from . import encode_forward as fwd
from .errors import HyperconfError, InternalError, ResourceLimit, ValidationError
from .io import hyperltl, jsonio, nusmv, pddl
from .ltl import HyperFormula
from .model import (
    Action,
    PlanningProblem,
    StripsProblem,
    SymbolicTS,
    TransitionSystem,
    explicit_of_symbolic,
    strips_of_explicit,
)
from .random_instances import random_formula, random_problem, random_ts
from .solve import OracleConfig, conformant_search, enum_oracle, mc_oracle
from .solve.planner import DEFAULT_CAP

log = logging.getLogger("hyperconf")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
DEFAULT_SEED = 0


class UsageError(HyperconfError):
    pass


def _record(**fields) -> str:
    return " ".join(f"{k}={v}" for k, v in fields.items())


def _plan_text(plan) -> str:
    return ",".join(plan.actions)


def _witness_text(witness) -> str:
    return ",".join(fwd.DirectionVector(v).name for v in witness)


def _read_formula(path) -> HyperFormula:
    return hyperltl.parse_hyperltl(Path(path).read_text(encoding="utf-8"))


_KIND = {
    TransitionSystem: "transition_system",
    PlanningProblem: "planning_problem",
    StripsProblem: "strips_problem",
    SymbolicTS: "symbolic_ts",
}


def _load(path, *kinds):
    value = jsonio.load(path)
    if kinds and not isinstance(value, kinds):
        names = " or ".join(_KIND[k] for k in kinds)
        got = _KIND.get(type(value), type(value).__name__)
        raise UsageError(f"{path}: expected a {names} document, got {got}")
    return value


def _explicit(t) -> TransitionSystem:
    return explicit_of_symbolic(t) if isinstance(t, SymbolicTS) else t


# ---------------------------------------------------------------------------
# subcommands


def cmd_ground(args) -> int:
    dom, prob = pddl.parse_pddl(Path(args.domain).read_text(encoding="utf-8"),
                                Path(args.problem).read_text(encoding="utf-8"))
    p = pddl.ground(dom, prob)
    jsonio.save(p, args.output)
    print(_record(props=len(p.props), actions=len(p.actions)))
    if args.verbose:
        print("actions: " + " ".join(p.action_names))
    return EXIT_OK


def cmd_mc2plan(args) -> int:
    t = _load(args.system, TransitionSystem, SymbolicTS)
    f = _read_formula(args.formula)
    if args.symbolic:
        if not isinstance(t, SymbolicTS):
            raise UsageError("--symbolic needs a symbolic_ts document")
        p = fwd.encode_symbolic(t, f)
        jsonio.save(p, args.output)
        print(_record(kind="strips_problem", props=len(p.props), actions=len(p.actions)))
    else:
        p = fwd.encode_explicit(_explicit(t), f)
        jsonio.save(p, args.output)
        print(_record(kind="planning_problem", states=len(p.states), actions=len(p.actions)))
    return EXIT_OK


def cmd_plan2mc(args) -> int:
    p = _load(args.problem, PlanningProblem, StripsProblem)
    out = Path(args.output)
    if out.suffix == ".smv":
        sts = bwd.encode_sts(p if isinstance(p, StripsProblem) else strips_of_explicit(p))
        out.write_text(nusmv.emit_nusmv(sts), encoding="utf-8", newline="\n")
        system = sts
        print(_record(kind="nusmv", vars=len(sts.vars), directions=len(sts.directions)))
    elif out.suffix == ".json":
        if isinstance(p, PlanningProblem):
            system = bwd.encode_ts(p)
            print(_record(kind="transition_system", locations=len(system.locations),
                          directions=len(system.directions)))
        else:
            system = bwd.encode_sts(p)
            print(_record(kind="symbolic_ts", vars=len(system.vars), directions=len(system.directions)))
        jsonio.save(system, out)
    else:
        raise UsageError(f"{out}: output must end in .smv or .json")
    f = bwd.build_formula(p)
    if args.formula:
        Path(args.formula).write_text(hyperltl.emit_hyperltl(f) + "\n", encoding="utf-8", newline="\n")
    if args.verify:
        plan_res = conformant_search(p, cap=args.cap)
        mc_res = mc_oracle(_explicit(system), f, cap=args.cap)
        if plan_res.verdict != mc_res.verdict:
            raise InternalError(f"planner says {plan_res.verdict}, model checker says {mc_res.verdict}")
        print(_record(verify="agree", verdict=plan_res.verdict))
    return EXIT_OK


def cmd_solve(args) -> int:
    p = _load(args.problem, PlanningProblem, StripsProblem)
    res = conformant_search(p, cap=args.cap, backend=args.backend)
    if res.sat:
        print(_record(verdict=res.verdict, plan=_plan_text(res.witness), beliefs=res.stats["beliefs"]))
    else:
        print(_record(verdict=res.verdict, beliefs=res.stats["beliefs"]))
    if args.verbose:
        print(res.stats_block())
        if res.sat:
            for i, a in enumerate(res.witness.actions, 1):
                print(f"  {i}. {a}")
    return EXIT_OK if res.sat else EXIT_NEGATIVE


def cmd_check(args) -> int:
    t = _explicit(_load(args.system, TransitionSystem, SymbolicTS))
    f = _read_formula(args.formula)
    if args.enum is not None:
        res = enum_oracle(t, f, OracleConfig(args.enum))
        fields = {"verdict": res.verdict, "sequences": res.stats["sequences"]}
    else:
        res = mc_oracle(t, f, cap=args.cap)
        fields = {"verdict": res.verdict, "beliefs": res.stats["beliefs"]}
    if res.sat:
        fields["witness"] = _witness_text(res.witness)
    print(_record(**fields))
    if args.verbose:
        print(res.stats_block())
    return EXIT_OK if res.sat else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# randomized round trip


@dataclass(frozen=True)
class RoundtripConfig:
    seed: int = DEFAULT_SEED
    count: int = 100
    max_locations: int = 4
    max_dirs: int = 3
    max_quants: int = 3
    max_states: int = 5
    max_actions: int = 3
    direction: str = "both"
    cap: int = DEFAULT_CAP


def instance_direction(cfg: RoundtripConfig, i: int) -> str:
    if cfg.direction == "both":
        return "fwd" if i % 2 == 0 else "bwd"
    return cfg.direction


def make_instance(cfg: RoundtripConfig, i: int):
    """Instance ``i`` of the stream; independent of every other index."""
    rng = random.Random(f"{cfg.seed}:{i}")
    if instance_direction(cfg, i) == "fwd":
        return random_ts(rng, cfg.max_locations, cfg.max_dirs), random_formula(rng, cfg.max_quants)
    return (random_problem(rng, cfg.max_states, cfg.max_actions),)


def verdicts(instance, cap: int = DEFAULT_CAP) -> tuple:
    """(planner verdict, model-checker verdict) for a forward or backward instance."""
    if len(instance) == 2:
        t, f = instance
        return conformant_search(fwd.encode_explicit(t, f), cap=cap).verdict, mc_oracle(t, f, cap=cap).verdict
    (p,) = instance
    return conformant_search(p, cap=cap).verdict, mc_oracle(bwd.encode_ts(p), bwd.build_formula(p), cap=cap).verdict


def disagrees(instance, cap: int = DEFAULT_CAP) -> bool:
    a, b = verdicts(instance, cap)
    return a != b


def _ts_shrinks(t: TransitionSystem):
    for l in t.locations:
        if l == t.init:
            continue
        locs = tuple(x for x in t.locations if x != l)
        trans = {(x, d): (t.init if y == l else y) for (x, d), y in t.trans.items() if x != l}
        yield replace(t, locations=locs, trans=trans, labels={x: t.labels[x] for x in locs})
    if len(t.directions) > 1:
        for d in t.directions:
            dirs = tuple(x for x in t.directions if x != d)
            trans = {k: v for k, v in t.trans.items() if k[1] != d}
            yield replace(t, directions=dirs, trans=trans)


def _problem_shrinks(p: PlanningProblem):
    if len(p.actions) > 1:
        for a in p.actions:
            yield replace(p, actions=tuple(x for x in p.actions if x is not a))
    for s in p.states:
        if s == p.init:
            continue
        actions = []
        for a in p.actions:
            eff = {x: set(a.eff[x]) - {s} for x in a.pre if x != s}
            actions.append(Action.from_effects(a.name, {x: v for x, v in eff.items() if v}))
        yield replace(p, states=tuple(x for x in p.states if x != s),
                      goals=p.goals - {s}, actions=tuple(actions))


def minimize(instance, cap: int = DEFAULT_CAP):
    """Greedily delete locations, directions or actions while the disagreement persists."""
    while True:
        if len(instance) == 2:
            t, f = instance
            candidates = ((c, f) for c in _ts_shrinks(t))
        else:
            candidates = ((c,) for c in _problem_shrinks(instance[0]))
        for c in candidates:
            try:
                if disagrees(c, cap):
                    instance = c
                    break
            except (ValidationError, ValueError, TypeError):
                continue
        else:
            return instance


def run_roundtrip(cfg: RoundtripConfig, detail=None) -> tuple:
    """Returns (agreements, first disagreeing instance or None)."""
    agree, bad = 0, None
    for i in range(cfg.count):
        inst = make_instance(cfg, i)
        a, b = verdicts(inst, cfg.cap)
        if detail is not None:
            detail(f"instance={i} direction={instance_direction(cfg, i)} planner={a} checker={b}")
        if a == b:
            agree += 1
        elif bad is None:
            bad = inst
    return agree, bad


def cmd_roundtrip(args) -> int:
    cfg = RoundtripConfig(args.seed, args.count, args.max_locations, args.max_dirs, args.max_quants,
                          args.max_states, args.max_actions, args.direction, args.cap)
    agree, bad = run_roundtrip(cfg, print if args.verbose else None)
    print(_record(agreements=agree, disagreements=cfg.count - agree))
    if bad is None:
        return EXIT_OK
    small = minimize(bad, cfg.cap)
    dump = Path(args.dump)
    if len(small) == 2:
        jsonio.save(small[0], dump.with_suffix(".ts.json"))
        dump.with_suffix(".hltl").write_text(hyperltl.emit_hyperltl(small[1]) + "\n", encoding="utf-8")
        log.error("minimized counterexample written to %s and %s",
                  dump.with_suffix(".ts.json"), dump.with_suffix(".hltl"))
    else:
        jsonio.save(small[0], dump.with_suffix(".problem.json"))
        log.error("minimized counterexample written to %s", dump.with_suffix(".problem.json"))
    return EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# parser


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _unsigned(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="print human-readable detail")
    capped = argparse.ArgumentParser(add_help=False)
    capped.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="belief cap (default: %(default)s)")

    parser = argparse.ArgumentParser(prog="hyperconf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("ground", parents=[common], help="ground a PDDL domain and problem")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("mc2plan", parents=[common], help="encode a model-checking instance as planning")
    p.add_argument("system", help="transition_system or symbolic_ts JSON")
    p.add_argument("formula", help="HyperLTL text file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--symbolic", action="store_true", help="emit a STRIPS problem from a symbolic system")
    p.set_defaults(func=cmd_mc2plan)

    p = sub.add_parser("plan2mc", parents=[common, capped], help="encode a planning problem as model checking")
    p.add_argument("problem", help="planning_problem or strips_problem JSON")
    p.add_argument("-o", "--output", required=True, help="model file, .smv or .json")
    p.add_argument("--formula", help="write the HyperLTL formula to this file")
    p.add_argument("--verify", action="store_true", help="check the model against the planner verdict")
    p.set_defaults(func=cmd_plan2mc)

    p = sub.add_parser("solve", parents=[common, capped], help="conformant planning by belief search")
    p.add_argument("problem")
    p.add_argument("--backend", choices=sorted(_backends()), default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", parents=[common, capped], help="model check an exists*forall* formula")
    p.add_argument("system")
    p.add_argument("formula")
    p.add_argument("--enum", type=_positive, metavar="K", help="bounded one-sided check instead")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("roundtrip", parents=[common, capped], help="randomized planner/checker agreement")
    p.add_argument("--seed", type=_unsigned, default=DEFAULT_SEED, help="default: %(default)s")
    p.add_argument("--count", type=_positive, default=100)
    p.add_argument("--max-locations", type=_positive, default=4)
    p.add_argument("--max-dirs", type=_positive, default=3)
    p.add_argument("--max-quants", type=_positive, default=3)
    p.add_argument("--max-states", type=_positive, default=5)
    p.add_argument("--max-actions", type=_positive, default=3)
    p.add_argument("--direction", choices=("fwd", "bwd", "both"), default="both")
    p.add_argument("--dump", default="counterexample", help="path stem for a minimized counterexample")
    p.set_defaults(func=cmd_roundtrip)
    return parser


def _backends():
    from .solve.kernels import BACKENDS
    return BACKENDS


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ResourceLimit, InternalError) as exc:
        log.error("%s", exc)
        return EXIT_LIMIT
    except (HyperconfError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
