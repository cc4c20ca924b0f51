from .hyperltl import emit_hyperltl, parse_hyperltl
from .jsonio import dumps, load, loads, save
from .nusmv import emit_nusmv
from .pddl import ground, parse_pddl

__all__ = [
    "dumps",
    "emit_hyperltl",
    "emit_nusmv",
    "ground",
    "load",
    "loads",
    "parse_hyperltl",
    "parse_pddl",
    "save",
]
