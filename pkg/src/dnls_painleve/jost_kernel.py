"""Selects the compiled Jost propagator when it is importable.

Setting ``DNLS_PURE_PYTHON=1`` in the environment forces the numpy path,
which is also used automatically when the extension was not built.
"""

from __future__ import annotations

import os

from . import _jost_py

BACKEND = "python"
propagate = _jost_py.propagate
propagate_path = _jost_py.propagate_path

if os.environ.get("DNLS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _jost_ext  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        propagate = _jost_ext.propagate
        propagate_path = _jost_ext.propagate_path

__all__ = ["BACKEND", "propagate", "propagate_path"]
