"""Pure-numpy twin of ``_kernel.pyx``; same signatures, same state layout."""

import numpy as np

T_TRANSLATE, T_HSHEAR, T_VSHEAR = 0, 1, 2
P_SINE, P_RAISED_COSINE = 0, 1

_TWO_PI = 2.0 * np.pi


def _profile(code, t):
    if code == P_SINE:
        return np.sin(_TWO_PI * t)
    return 0.5 * (1.0 - np.cos(_TWO_PI * t))


def iterate(fx, fy, kx, ky, codes, params, nsteps):
    """Apply the composition ``nsteps`` times to every point, in place."""
    prims = [(int(c), p) for c, p in zip(codes, params)]
    for _ in range(int(nsteps)):
        for code, p in prims:
            if code == T_TRANSLATE:
                fx += p[0]
                c = np.floor(fx)
                fx -= c
                kx += c + p[2]
                fy += p[1]
                c = np.floor(fy)
                fy -= c
                ky += c + p[3]
            elif code == T_HSHEAR:
                fx += p[0] * _profile(int(p[1]), fy)
                c = np.floor(fx)
                fx -= c
                kx += c
            else:
                fy += p[0] * _profile(int(p[1]), fx)
                c = np.floor(fy)
                fy -= c
                ky += c


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_sorted(pts):
    """Monotone-chain hull of lexicographically sorted points (indices, CCW)."""
    n = len(pts)
    if n == 0:
        return []
    P = pts.tolist()
    H = []
    for i in range(n):
        while len(H) >= 2 and _cross(P[H[-2]], P[H[-1]], P[i]) <= 0:
            H.pop()
        H.append(i)
    t = len(H) + 1
    for i in range(n - 2, -1, -1):
        while len(H) >= t and _cross(P[H[-2]], P[H[-1]], P[i]) <= 0:
            H.pop()
        H.append(i)
    out = H[:-1] if len(H) > 1 else [0]
    if len(out) == 2 and P[out[0]] == P[out[1]]:
        out = out[:1]
    return out
