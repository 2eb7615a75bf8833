"""Select the compiled kernels when available, else the pure-Python ones.

Set ``SL2REPS_PURE=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("SL2REPS_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._ckernels import base_angle, compose, lift_eval, word_lift  # noqa: F401

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

if BACKEND == "python":
    from ._kernels_py import base_angle, compose, lift_eval, word_lift  # noqa: F401
