# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for torus-lift iteration and planar convex hulls.

State convention (shared with ``_kernel_py``): a lifted point is stored as a
fractional part ``f`` in [0, 1) plus an integer count ``k`` held in a double,
so that integer deck translations never perturb the fractional dynamics.
"""

from libc.math cimport sin, cos, floor, M_PI

DEF T_TRANSLATE = 0
DEF T_HSHEAR = 1
DEF T_VSHEAR = 2
DEF P_SINE = 0
DEF P_RAISED_COSINE = 1


cdef inline double _profile(int code, double t) nogil:
    if code == P_SINE:
        return sin(2.0 * M_PI * t)
    return 0.5 * (1.0 - cos(2.0 * M_PI * t))


def iterate(double[::1] fx, double[::1] fy, double[::1] kx, double[::1] ky,
            long[::1] codes, double[:, ::1] params, long nsteps):
    """Apply the composition ``nsteps`` times to every point, in place."""
    cdef Py_ssize_t i, j, npts = fx.shape[0], nprim = codes.shape[0]
    cdef long s
    cdef double x, y, cx, cy, c
    with nogil:
        for i in range(npts):
            x = fx[i]
            y = fy[i]
            cx = kx[i]
            cy = ky[i]
            for s in range(nsteps):
                for j in range(nprim):
                    if codes[j] == T_TRANSLATE:
                        x = x + params[j, 0]
                        c = floor(x)
                        x = x - c
                        cx = cx + c + params[j, 2]
                        y = y + params[j, 1]
                        c = floor(y)
                        y = y - c
                        cy = cy + c + params[j, 3]
                    elif codes[j] == T_HSHEAR:
                        x = x + params[j, 0] * _profile(<int>params[j, 1], y)
                        c = floor(x)
                        x = x - c
                        cx = cx + c
                    else:
                        y = y + params[j, 0] * _profile(<int>params[j, 1], x)
                        c = floor(y)
                        y = y - c
                        cy = cy + c
            fx[i] = x
            fy[i] = y
            kx[i] = cx
            ky[i] = cy


cdef inline double _cross(double ox, double oy, double ax, double ay,
                          double bx, double by) nogil:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def hull_sorted(double[:, ::1] pts):
    """Monotone-chain hull of lexicographically sorted points.

    Returns the indices of the counterclockwise hull, collinear points
    dropped; one index for a single distinct point.
    """
    cdef Py_ssize_t n = pts.shape[0], i, k = 0, t
    if n == 0:
        return []
    cdef long[::1] H
    import numpy as np
    H_arr = np.empty(2 * n + 1, dtype=np.int64)
    H = H_arr
    with nogil:
        for i in range(n):
            while k >= 2 and _cross(pts[H[k - 2], 0], pts[H[k - 2], 1],
                                    pts[H[k - 1], 0], pts[H[k - 1], 1],
                                    pts[i, 0], pts[i, 1]) <= 0:
                k -= 1
            H[k] = i
            k += 1
        t = k + 1
        for i in range(n - 2, -1, -1):
            while k >= t and _cross(pts[H[k - 2], 0], pts[H[k - 2], 1],
                                    pts[H[k - 1], 0], pts[H[k - 1], 1],
                                    pts[i, 0], pts[i, 1]) <= 0:
                k -= 1
            H[k] = i
            k += 1
    out = list(H_arr[:k - 1]) if k > 1 else [0]
    if len(out) == 2 and pts[out[0], 0] == pts[out[1], 0] and pts[out[0], 1] == pts[out[1], 1]:
        out = out[:1]
    return out
