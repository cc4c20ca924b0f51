"""Selects the belief-search kernel at import.

The compiled extension is used when it was built; setting
``HYPERCONF_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
from __future__ import annotations

import logging
import os

from . import _belief_py

logger = logging.getLogger(__name__)

BACKENDS = {"python": _belief_py.belief_bfs}

try:
    from . import _belief
except ImportError:  # extension not built
    _belief = None
else:
    BACKENDS["cython"] = _belief.belief_bfs

if os.environ.get("HYPERCONF_PURE_PYTHON") == "1" or "cython" not in BACKENDS:
    DEFAULT_BACKEND = "python"
else:
    DEFAULT_BACKEND = "cython"

logger.debug("belief kernel: %s", DEFAULT_BACKEND)

SAT, UNSAT, CAPPED = _belief_py.SAT, _belief_py.UNSAT, _belief_py.CAPPED


def get_kernel(name: str | None = None):
    name = name or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"belief kernel {name!r} is not available; have {sorted(BACKENDS)}") from None
