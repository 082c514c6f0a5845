"""Pure-Python Graeffe kernel.

Used when the compiled ``_ckernels`` module is unavailable or when
``GRAEFFE_PURE_PYTHON`` is set.  Keep the operation order in sync with
``_ckernels.pyx``: the two are compared bit-for-bit in the test suite.
"""
import math

import numpy as np

from .renarith import LN2, NEG_INF, PI, renplus_raw, wrap

NAME = "python"


def graeffe_step(mags, args, k):
    """One renormalized Graeffe step from index ``k`` to ``k + 1``.

    Parameters
    ----------
    mags, args : 1-D float arrays of length d + 1
        Coefficients f_0..f_d at index ``k``.
    k : int

    Returns
    -------
    (ndarray, ndarray)
        Magnitudes and arguments of the iterate at index ``k + 1``.
    """
    m = [0.5 * v for v in np.asarray(mags, dtype=np.float64).tolist()]
    a = np.asarray(args, dtype=np.float64).tolist()
    d = len(m) - 1
    if len(a) != d + 1:
        raise ValueError("mags and args must have the same length")
    kk = k + 1
    two = math.ldexp(LN2, -kk)
    out_m = [0.0] * (d + 1)
    out_a = [0.0] * (d + 1)
    for i in range(d + 1):
        mi = m[i]
        if mi == NEG_INF:
            sq_m, sq_a = NEG_INF, 0.0
        else:
            sq_m = 2.0 * mi
            sq_a = wrap(2.0 * a[i])
            if (d + i) & 1:
                sq_a = wrap(sq_a + PI)
        acc_m, acc_a = NEG_INF, 0.0
        for j in range(1, min(i, d - i) + 1):
            x = m[i - j]
            y = m[i + j]
            if x == NEG_INF or y == NEG_INF:
                continue
            t_a = wrap(a[i - j] + a[i + j])
            if (d + i - j) & 1:
                t_a = wrap(t_a + PI)
            acc_m, acc_a = renplus_raw(acc_m, acc_a, x + y, t_a, kk)
        if acc_m != NEG_INF:
            acc_m = acc_m + two
        out_m[i], out_a[i] = renplus_raw(sq_m, sq_a, acc_m, acc_a, kk)
    return np.array(out_m, dtype=np.float64), np.array(out_a, dtype=np.float64)
