"""Fused accumulation kernel for group-shifted sampling on N_2 grids.

For a batch of group offsets m = (x0, a0) with weights w, accumulates
sum_m w_m f(n . m^{-1}) over the whole grid.  The generator shift is uniform
(bilinear interpolation with scalar fractional offsets); the center shift
varies linearly with (x1, x2) through the bracket twist, but its fractional
part is constant along the center axis, so each (i, j) column needs one
row blend.  Zero extension outside the box.
"""

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:                                 # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap if not (args and callable(args[0])) else args[0]


@njit(cache=True, fastmath=True)
def _accum_kernel(values, out, axis, h, x0a, x0b, a0, w, cubic):
    n = values.shape[0]
    tmp = np.empty(n)
    for m in range(len(w)):
        d1 = x0a[m] / h
        d2 = x0b[m] / h
        wm = w[m]
        for i in range(n):
            t1 = i - d1
            i0 = int(np.floor(t1))
            w1 = t1 - i0
            if i0 < -1 or i0 >= n:
                continue
            xi = axis[i]
            for j in range(n):
                t2 = j - d2
                j0 = int(np.floor(t2))
                w2 = t2 - j0
                if j0 < -1 or j0 >= n:
                    continue
                xj = axis[j]
                t3 = -(a0[m] + 0.5 * (xi * x0b[m] - xj * x0a[m])) / h
                k0 = int(np.floor(t3))
                w3 = t3 - k0
                if k0 <= -n - 2 or k0 >= n + 2:
                    continue
                c00 = (1.0 - w1) * (1.0 - w2)
                c01 = (1.0 - w1) * w2
                c10 = w1 * (1.0 - w2)
                c11 = w1 * w2
                for k in range(n):
                    tmp[k] = 0.0
                if 0 <= i0 < n:
                    if 0 <= j0 < n and c00 != 0.0:
                        row = values[i0, j0]
                        for k in range(n):
                            tmp[k] += c00 * row[k]
                    if 0 <= j0 + 1 < n and c01 != 0.0:
                        row = values[i0, j0 + 1]
                        for k in range(n):
                            tmp[k] += c01 * row[k]
                if 0 <= i0 + 1 < n:
                    if 0 <= j0 < n and c10 != 0.0:
                        row = values[i0 + 1, j0]
                        for k in range(n):
                            tmp[k] += c10 * row[k]
                    if 0 <= j0 + 1 < n and c11 != 0.0:
                        row = values[i0 + 1, j0 + 1]
                        for k in range(n):
                            tmp[k] += c11 * row[k]
                orow = out[i, j]
                if cubic:
                    # Catmull-Rom along the center axis (C^1, kills the
                    # quadrature kinks of piecewise-linear sampling)
                    u = w3
                    cm1 = -0.5 * u * (1.0 - u) * (1.0 - u)
                    c0 = 1.0 + 0.5 * u * u * (3.0 * u - 5.0)
                    c1 = 0.5 * u * (1.0 + 4.0 * u - 3.0 * u * u)
                    c2 = 0.5 * u * u * (u - 1.0)
                    for k in range(n):
                        kk = k + k0
                        v = 0.0
                        if 0 <= kk - 1 < n:
                            v += cm1 * tmp[kk - 1]
                        if 0 <= kk < n:
                            v += c0 * tmp[kk]
                        if 0 <= kk + 1 < n:
                            v += c1 * tmp[kk + 1]
                        if 0 <= kk + 2 < n:
                            v += c2 * tmp[kk + 2]
                        orow[k] += wm * v
                else:
                    lo = max(0, -k0)
                    hi = min(n, n - k0)
                    for k in range(lo, hi):
                        kk = k + k0
                        v = (1.0 - w3) * tmp[kk]
                        if kk + 1 < n:
                            v += w3 * tmp[kk + 1]
                        orow[k] += wm * v
    return out


def accumulate_group_shifts(values, axis, h, x0s, a0s, weights, out=None,
                            cubic=False):
    """sum over offsets of weight * field(n . m^{-1}) on the full grid."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    if out is None:
        out = np.zeros_like(values)
    _accum_kernel(values, out, np.ascontiguousarray(axis, dtype=np.float64), h,
                  np.ascontiguousarray(x0s[:, 0], dtype=np.float64),
                  np.ascontiguousarray(x0s[:, 1], dtype=np.float64),
                  np.ascontiguousarray(a0s, dtype=np.float64),
                  np.ascontiguousarray(weights, dtype=np.float64), cubic)
    return out
