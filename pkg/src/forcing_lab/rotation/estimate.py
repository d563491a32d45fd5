"""Numerical experiments on torus lifts: rotation sets, deviation, measures.

All sweeps start from the grid ``(i/m, j/m)``, ``0 <= i, j < m``, in
row-major order (x index outer), and every budget that shaped a result is
kept in its ``meta``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import InputError
from . import backend
from .lift import TorusLift
from .polygon import RotationPolygon, _cross, convex_hull, hausdorff

# points closer than this to the running hull cannot change it measurably
_HULL_SLACK = 1e-13
_N_DIRECTIONS = 16


def default_threads() -> int:
    env = os.environ.get("FORCING_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"FORCING_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def grid_points(m: int) -> np.ndarray:
    if m < 1:
        raise InputError("grid resolution must be >= 1")
    i, j = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    return np.column_stack([i.ravel() / m, j.ravel() / m])


class _Sweep:
    """A batch of orbits advanced in lockstep, optionally over worker threads."""

    def __init__(self, g: TorusLift, z, kernel=None, threads: int | None = None):
        self.g = g
        self.kern = backend.get(kernel)
        self.state = g.state(z)
        self.start = [a.copy() for a in self.state]
        self.steps = 0
        self.threads = max(1, threads or 1)
        n = len(self.state[0])
        k = min(self.threads, max(1, n // 1024))
        bounds = np.linspace(0, n, k + 1).astype(int)
        self.chunks = [slice(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]

    def advance(self, nsteps: int = 1):
        codes, params = self.g._codes, self.g._params

        def run(sl):
            fx, fy, kx, ky = (a[sl] for a in self.state)
            self.kern.iterate(fx, fy, kx, ky, codes, params, int(nsteps))

        if len(self.chunks) == 1:
            run(self.chunks[0])
        else:
            with ThreadPoolExecutor(len(self.chunks)) as ex:
                list(ex.map(run, self.chunks))
        self.steps += nsteps

    def total_displacement(self) -> np.ndarray:
        return self.g.displacement_of(self.state, self.start)


@dataclass(frozen=True)
class DisplacementSample:
    z: tuple[float, float]
    n: int
    value: tuple[float, float]

    def __post_init__(self):
        if self.n < 1:
            raise InputError("n must be >= 1")


def displacement(g: TorusLift, z, n: int, kernel=None) -> np.ndarray:
    """Average displacement (g^n(z) - z)/n; ``z`` may be one point or an array."""
    if n < 1:
        raise InputError("n must be >= 1")
    return g.total_displacement(z, n, kernel) / n


def displacement_sample(g: TorusLift, z, n: int, kernel=None) -> DisplacementSample:
    v = displacement(g, np.asarray(z, dtype=float).reshape(2), n, kernel)
    return DisplacementSample(tuple(map(float, z)), n, (float(v[0]), float(v[1])))


def _extreme_polygon(P: np.ndarray) -> np.ndarray:
    """Hull of the extreme points of ``P`` in a fixed fan of directions."""
    ang = np.arange(_N_DIRECTIONS) * (2 * np.pi / _N_DIRECTIONS)
    U = np.column_stack([np.cos(ang), np.sin(ang)])
    idx = np.unique(np.argmax(U @ P.T, axis=1))
    return convex_hull(P[idx])


def _outside(filter_poly: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Mask of points that could still be hull vertices (not within the slack of ``filter_poly``)."""
    V = filter_poly
    if len(V) >= 3:
        keep = np.zeros(len(Z), dtype=bool)
        for i in range(len(V)):
            a, b = V[i], V[(i + 1) % len(V)]
            L = np.hypot(*(b - a))
            keep |= _cross(a, b, Z) < -_HULL_SLACK * L
        return keep
    return RotationPolygon(V).distance(Z) > _HULL_SLACK


def rotation_set_estimate(g: TorusLift, m: int, N: int, n: int, kernel=None, threads: int | None = None) -> RotationPolygon:
    """Hull of the averages (g^k(z) - z)/k over grid points z and N < k <= n."""
    if m < 2:
        raise InputError("grid resolution m must be >= 2")
    if not 0 <= N < n:
        raise InputError(f"need 0 <= N < n, got N={N}, n={n}")
    sweep = _Sweep(g, grid_points(m), kernel, threads)
    if N:
        sweep.advance(N)
    acc = None
    for k in range(N + 1, n + 1):
        sweep.advance(1)
        D = sweep.total_displacement() / k
        ext = _extreme_polygon(D if acc is None else np.vstack([acc, D]))
        cand = D[_outside(ext, D)]
        pool = [ext, cand] if acc is None else [acc, ext, cand]
        acc = convex_hull(np.vstack(pool), kernel)
    meta = {"grid": m, "N": N, "n": n, "backend": getattr(sweep.kern, "__name__", "?").rsplit(".", 1)[-1]}
    return RotationPolygon(acc, meta)


def check_homogeneity(g: TorusLift, k: int, m: int, N: int, n: int, kernel=None, threads=None) -> float:
    """Hausdorff distance between the estimates for g^k and k times the estimate for g.

    Both estimates use the same (m, N, n), counted in iterates of the map
    being estimated.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    base = rotation_set_estimate(g, m, N, n, kernel, threads)
    if k == 1:
        return hausdorff(base, base)
    powered = rotation_set_estimate(g.power(k), m, N, n, kernel, threads)
    return hausdorff(powered, base.scaled(k))


def deviation_profile(g: TorusLift, rho: RotationPolygon, m: int, n_list, kernel=None, threads=None) -> list[tuple[int, float]]:
    """(n, max over the grid of dist(g^n(z) - z, n * rho)) for each n in ``n_list``."""
    ns = [int(v) for v in n_list]
    if not ns or any(v < 1 for v in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise InputError("n_list must be a strictly increasing list of positive integers")
    sweep = _Sweep(g, grid_points(m), kernel, threads)
    out = []
    for n in ns:
        sweep.advance(n - sweep.steps)
        D = sweep.total_displacement()
        out.append((n, float(rho.scaled(n).distance(D).max())))
    return out


# -- invariant measures at sampling resolution --------------------------------

@dataclass(frozen=True)
class EmpiricalMeasure:
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.points, dtype=float).reshape(-1, 2)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(P) != len(w) or len(P) == 0:
            raise InputError("a measure needs one weight per point and at least one point")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InputError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise InputError(f"weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "points", P)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform_grid(cls, m: int) -> "EmpiricalMeasure":
        P = grid_points(m)
        return cls(P, np.full(len(P), 1.0 / len(P)))

    @classmethod
    def point_mass(cls, z) -> "EmpiricalMeasure":
        return cls(np.asarray(z, dtype=float).reshape(1, 2), np.ones(1))

    @classmethod
    def from_dict(cls, d: dict) -> "EmpiricalMeasure":
        if "grid" in d:
            return cls.uniform_grid(int(d["grid"]))
        return cls(d["points"], d["weights"])


def measure_rotation(g: TorusLift, mu: EmpiricalMeasure, kernel=None) -> np.ndarray:
    """Integral of the one-step displacement g(z) - z against ``mu``."""
    D = g.total_displacement(mu.points, 1, kernel)
    return mu.weights @ D


# -- boundary diagnostic -------------------------------------------------------

@dataclass(frozen=True)
class FlaggedEdge:
    index: int
    start: tuple[float, float]
    end: tuple[float, float]
    slope: float
    rational_point: tuple[str, str]


def _near_rational(v: float, D: int, tol: float) -> Fraction | None:
    r = Fraction(v).limit_denominator(D)
    return r if abs(float(r) - v) <= tol else None


def boundary_diagnostic(P: RotationPolygon, D: int, tol: float = 1e-9) -> list[FlaggedEdge]:
    """Edges with irrational slope whose interior holds a rational point of height <= D.

    A true rotation set has no such edge, so each flag marks a numerical
    artifact of the estimate.
    """
    if D < 1:
        raise InputError("denominator bound D must be >= 1")
    flags = []
    for idx, (a, b) in enumerate(P.edges()):
        dx, dy = b - a
        L = float(np.hypot(dx, dy))
        if L == 0.0 or abs(dx) <= tol * L:
            continue  # vertical: slope infinity counts as rational
        slope = dy / dx
        if _near_rational(slope, D, tol) is not None:
            continue
        witness = _interior_rational_point(a, b, D, tol)
        if witness is not None:
            flags.append(FlaggedEdge(idx, tuple(map(float, a)), tuple(map(float, b)), float(slope),
                                     (str(witness[0]), str(witness[1]))))
    return flags


def _interior_rational_point(a, b, D, tol):
    """Some (x, y) in the open segment with x, y rationals of denominator <= D."""
    x0, x1 = sorted((float(a[0]), float(b[0])))
    dx, dy = b[0] - a[0], b[1] - a[1]
    for q in range(1, D + 1):
        lo = int(np.floor(x0 * q)) + 1
        hi = int(np.ceil(x1 * q)) - 1
        for p in range(lo, hi + 1):
            x = Fraction(p, q)
            if not x0 < float(x) < x1:
                continue
            y = a[1] + (float(x) - a[0]) * dy / dx
            ry = _near_rational(y, D, tol)
            if ry is not None:
                return x, ry
    return None


__all__ = [
    "DisplacementSample",
    "EmpiricalMeasure",
    "FlaggedEdge",
    "boundary_diagnostic",
    "check_homogeneity",
    "default_threads",
    "deviation_profile",
    "displacement",
    "displacement_sample",
    "grid_points",
    "measure_rotation",
    "rotation_set_estimate",
]
