"""Select the pivot kernel: compiled if importable, numpy otherwise.

Set ``QVIABILITY_PURE_PYTHON=1`` to force the numpy kernel.
"""

import os

from . import _simplex_py

BACKENDS = {"python": _simplex_py.run_phase1}

try:
    from ._simplex_core import run_phase1 as _compiled
except ImportError:
    _compiled = None
else:
    BACKENDS["cython"] = _compiled

if _compiled is not None and not os.environ.get("QVIABILITY_PURE_PYTHON"):
    BACKEND = "cython"
else:
    BACKEND = "python"

run_phase1 = BACKENDS[BACKEND]
