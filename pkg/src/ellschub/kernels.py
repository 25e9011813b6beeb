"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise the numpy
fallback. Set ``ELLSCHUB_PURE_PYTHON=1`` to force the fallback.
"""
import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("ELLSCHUB_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure python backend requested")
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"


def theta_product(x, q, nterms):
    return _impl.theta_product(x, complex(q), int(nterms))


def twisted_fma(out, a, ra, ca, b, rb, cb):
    if _impl is _pykernels:
        _pykernels.twisted_fma(out, a, ra, ca, b, rb, cb)
        return
    _impl.twisted_fma(
        out,
        np.ascontiguousarray(a),
        np.ascontiguousarray(ra, dtype=np.intp),
        np.ascontiguousarray(ca, dtype=np.intp),
        np.ascontiguousarray(b),
        np.ascontiguousarray(rb, dtype=np.intp),
        np.ascontiguousarray(cb, dtype=np.intp),
    )
