"""Translations between conformant planning and exists*forall* HyperLTL model checking."""
from .encode_backward import build_formula, encode_sts, encode_ts
from .encode_forward import encode_explicit, encode_symbolic
from .errors import HyperconfError
from .ltl import HyperFormula
from .model import (
    Action,
    ConditionalEffect,
    GuardedDirection,
    Plan,
    PlanningProblem,
    StripsAction,
    StripsProblem,
    SymbolicTS,
    TransitionSystem,
    exec_plan,
    is_conformant,
)
from .solve import OracleConfig, SolveResult, Verdict, conformant_search, enum_oracle, mc_oracle

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ConditionalEffect",
    "GuardedDirection",
    "HyperFormula",
    "HyperconfError",
    "OracleConfig",
    "Plan",
    "PlanningProblem",
    "SolveResult",
    "StripsAction",
    "StripsProblem",
    "SymbolicTS",
    "TransitionSystem",
    "Verdict",
    "build_formula",
    "conformant_search",
    "encode_explicit",
    "encode_ts",
    "encode_sts",
    "encode_symbolic",
    "enum_oracle",
    "exec_plan",
    "is_conformant",
    "mc_oracle",
]
