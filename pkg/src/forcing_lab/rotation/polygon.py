"""Convex polygons in the plane: hulls, point distances, Hausdorff distance.

Polygons may be degenerate. A single vertex is a point, two vertices a
segment; otherwise vertices run counterclockwise with no three consecutive
ones collinear.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from . import backend

BOUNDARY_SAMPLES = 512


def _cross(o, a, b):
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - (a[..., 1] - o[..., 1]) * (b[..., 0] - o[..., 0])


def _collapse(V: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """Drop duplicate and (numerically) collinear vertices of a CCW chain."""
    V = np.asarray(V, dtype=float).reshape(-1, 2)
    if len(V) == 0:
        return V
    scale = 1.0 + float(np.max(np.abs(V)))
    tol = rel_tol * scale
    changed = True
    while changed and len(V) > 1:
        changed = False
        k = len(V)
        for i in range(k):
            a, b = V[i - 1], V[(i + 1) % k]
            v = V[i]
            if np.hypot(*(v - a)) <= tol:
                V = np.delete(V, i, axis=0)
                changed = True
                break
            if k >= 3:
                ab = b - a
                L = np.hypot(*ab)
                if L > tol and abs(_cross(a, b, v)) / L <= tol:
                    t = np.dot(v - a, ab) / L**2
                    if 0 <= t <= 1:
                        V = np.delete(V, i, axis=0)
                        changed = True
                        break
    if len(V) == 2 and np.hypot(*(V[1] - V[0])) <= tol:
        V = V[:1]
    return V


def convex_hull(points, kernel=None) -> np.ndarray:
    """CCW hull vertices of a point cloud (shape (N, 2))."""
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(P) == 0:
        raise InputError("hull of an empty point set")
    order = np.lexsort((P[:, 1], P[:, 0]))
    S = np.ascontiguousarray(P[order])
    idx = backend.get(kernel).hull_sorted(S)
    return _collapse(S[np.asarray(idx, dtype=np.int64)])


def _segment_distance(Z, a, b):
    ab = b - a
    L2 = float(ab @ ab)
    if L2 == 0.0:
        return np.hypot(Z[:, 0] - a[0], Z[:, 1] - a[1])
    t = np.clip(((Z - a) @ ab) / L2, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return np.hypot(Z[:, 0] - proj[:, 0], Z[:, 1] - proj[:, 1])


@dataclass(frozen=True)
class RotationPolygon:
    """Convex polygon with the budgets that produced it in ``meta``."""

    vertices: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if len(V) == 0:
            raise InputError("a polygon needs at least one vertex")
        if len(V) >= 3:
            V = convex_hull(V)
        else:
            V = _collapse(V)
        V.setflags(write=False)
        object.__setattr__(self, "vertices", V)

    @classmethod
    def from_points(cls, points, meta=None) -> "RotationPolygon":
        return cls(convex_hull(points), dict(meta or {}))

    def __len__(self):
        return len(self.vertices)

    @property
    def kind(self) -> str:
        return {1: "point", 2: "segment"}.get(len(self.vertices), "polygon")

    def edges(self) -> list[tuple[np.ndarray, np.ndarray]]:
        V = self.vertices
        if len(V) == 1:
            return []
        if len(V) == 2:
            return [(V[0], V[1])]
        return [(V[i], V[(i + 1) % len(V)]) for i in range(len(V))]

    @property
    def area(self) -> float:
        V = self.vertices
        if len(V) < 3:
            return 0.0
        x, y = V[:, 0], V[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def scaled(self, c: float) -> "RotationPolygon":
        return RotationPolygon(self.vertices * float(c), dict(self.meta))

    def translated(self, v) -> "RotationPolygon":
        return RotationPolygon(self.vertices + np.asarray(v, dtype=float), dict(self.meta))

    def transformed(self, M) -> "RotationPolygon":
        """Image under the linear map ``M`` (re-hulled, so orientation is kept CCW)."""
        return RotationPolygon(self.vertices @ np.asarray(M, dtype=float).T, dict(self.meta))

    def distance(self, points) -> np.ndarray:
        """Euclidean distance from each point to the (filled) polygon."""
        Z = np.atleast_2d(np.asarray(points, dtype=float))
        V = self.vertices
        if len(V) == 1:
            return np.hypot(Z[:, 0] - V[0, 0], Z[:, 1] - V[0, 1])
        if len(V) == 2:
            return _segment_distance(Z, V[0], V[1])
        d = np.full(len(Z), np.inf)
        inside = np.ones(len(Z), dtype=bool)
        for a, b in self.edges():
            inside &= _cross(a, b, Z) >= 0
            d = np.minimum(d, _segment_distance(Z, a, b))
        d[inside] = 0.0
        return d

    def contains(self, point, tol: float = 0.0) -> bool:
        return bool(self.distance(point)[0] <= tol)

    def boundary_samples(self, count: int = BOUNDARY_SAMPLES) -> np.ndarray:
        """``count`` points equally spaced in arc length, plus every vertex."""
        V = self.vertices
        if len(V) == 1:
            return V.copy()
        ring = np.vstack([V, V[:1]]) if len(V) > 2 else V
        seg = np.hypot(*np.diff(ring, axis=0).T)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        s = np.linspace(0.0, cum[-1], count, endpoint=len(V) == 2)
        x = np.interp(s, cum, ring[:, 0])
        y = np.interp(s, cum, ring[:, 1])
        return np.vstack([np.column_stack([x, y]), V])

    def __repr__(self):
        pts = ", ".join(f"({x:.6g}, {y:.6g})" for x, y in self.vertices)
        return f"RotationPolygon([{pts}])"


def hausdorff(A: RotationPolygon, B: RotationPolygon, samples: int = BOUNDARY_SAMPLES) -> float:
    """Hausdorff distance of two convex polygons.

    For convex sets the directed distance is attained at a vertex, and the
    vertices are always among the samples, so the value is exact up to
    rounding; the extra boundary samples only guard degenerate inputs.
    """
    if A.vertices.shape == B.vertices.shape and np.array_equal(A.vertices, B.vertices):
        return 0.0
    da = B.distance(A.boundary_samples(samples)).max()
    db = A.distance(B.boundary_samples(samples)).max()
    return float(max(da, db))
