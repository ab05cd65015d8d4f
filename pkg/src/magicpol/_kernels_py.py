"""Pure-NumPy fallback for the compiled kernels in ``_kernels.pyx``.

Neumaier-compensated summation over channels, vectorized over the
frequency grid. Operation order matches the Cython code exactly.
"""

import numpy as np


def valence_sum(delta_e, d2, omega):
    w2 = omega * omega
    s = np.zeros_like(omega)
    c = np.zeros_like(omega)
    with np.errstate(divide="ignore", invalid="ignore"):
        for k in range(delta_e.shape[0]):
            de = delta_e[k]
            x = (de * d2[k]) / (de * de - w2) / 3.0
            t = s + x
            c += np.where(np.abs(s) >= np.abs(x), (s - t) + x, (x - t) + s)
            s = t
    return s + c


def running_sum(values):
    out = np.empty_like(values)
    s = 0.0
    c = 0.0
    for k, x in enumerate(values.tolist()):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[k] = s + c
    return out
