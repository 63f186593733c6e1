"""Backend selection for the hot kernels.

The compiled extension ``rscd._kernels`` is used when it has been built;
otherwise (or when ``RSCD_PURE_PYTHON=1``) the numpy versions are used.
``BACKEND`` records the choice and ``BACKENDS`` lists every importable one.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

if _compiled is None or os.environ.get("RSCD_PURE_PYTHON", "") not in ("", "0"):
    BACKEND = "python"
else:
    BACKEND = "cython"

coeff_products = BACKENDS[BACKEND].coeff_products
grouped_exp_sums = BACKENDS[BACKEND].grouped_exp_sums
