"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
twin takes over. ``use_backend`` switches explicitly (benchmarks, tests).
"""

from __future__ import annotations

import logging
from types import ModuleType

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

BACKEND = ""
gf_rank = _pykernels.gf_rank
forest_acyclic = _pykernels.forest_acyclic
latin_transversals = _pykernels.latin_transversals
latin_pack = _pykernels.latin_pack


def available() -> list[str]:
    return sorted(_BACKENDS)


def use_backend(name: str) -> None:
    """Rebind the kernel functions to backend ``name`` ("compiled" or "python")."""
    global BACKEND, gf_rank, forest_acyclic, latin_transversals, latin_pack
    try:
        mod = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {available()}") from None
    BACKEND = name
    gf_rank = mod.gf_rank
    forest_acyclic = mod.forest_acyclic
    latin_transversals = mod.latin_transversals
    latin_pack = mod.latin_pack


def backend_module(name: str) -> ModuleType:
    return _BACKENDS[name]


use_backend("compiled" if _ckernels is not None else "python")
if _ckernels is None:
    log.debug("compiled kernels unavailable, using pure-Python fallback")
