from .kernels import DEFAULT_BACKEND, BACKENDS
from .oracle import enum_oracle, mc_oracle
from .planner import compile_problem, conformant_search
from .result import OracleConfig, SolveResult, Verdict

__all__ = [
    "BACKENDS",
    "DEFAULT_BACKEND",
    "OracleConfig",
    "SolveResult",
    "Verdict",
    "compile_problem",
    "conformant_search",
    "enum_oracle",
    "mc_oracle",
]
