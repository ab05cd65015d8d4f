"""Backend selection for the hot sum-over-states kernels.

The compiled extension ``magicpol._kernels`` is used when importable;
otherwise the NumPy fallback. Setting ``MAGICPOL_PURE_PYTHON=1`` forces the
fallback.

``valence_sum(delta_e, d2, omega)`` returns, for every omega, the
compensated sum over channels of ``delta_e*d2 / (delta_e**2 - omega**2) / 3``.
``running_sum(values)`` returns compensated prefix sums.
"""

import os

import numpy as np

from . import _kernels_py

_backend = _kernels_py
BACKEND = "python"
if os.environ.get("MAGICPOL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _backend  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _backend = _kernels_py

BACKENDS = {"python": _kernels_py}
if BACKEND == "cython":
    BACKENDS["cython"] = _backend


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def valence_sum(delta_e, d2, omega, backend=None):
    impl = BACKENDS[backend] if backend else _backend
    omega = np.asarray(omega, dtype=np.float64)
    out = impl.valence_sum(_f64(delta_e), _f64(d2), _f64(omega.ravel()))
    return out.reshape(omega.shape)


def running_sum(values, backend=None):
    impl = BACKENDS[backend] if backend else _backend
    return impl.running_sum(_f64(values))
