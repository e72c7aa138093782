"""Statevector kernel backend selection.

Imports the compiled extension when it was built, otherwise the numpy
implementation.  Set ONECLEAN_PURE_PYTHON=1 to force the numpy kernels,
e.g. for benchmark baselines.
"""

import os

from . import _statevec_py

if os.environ.get("ONECLEAN_PURE_PYTHON", "0") not in ("", "0"):
    ops = _statevec_py
    BACKEND = "python"
else:
    try:
        from . import _statevec as ops  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        ops = _statevec_py
        BACKEND = "python"


def available():
    """Importable kernel implementations, keyed by backend name."""
    impls = {"python": _statevec_py}
    try:
        from . import _statevec
        impls["compiled"] = _statevec
    except ImportError:
        pass
    return impls
