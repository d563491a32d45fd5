"""Oriented proper lines in the plane and the intersection tests they need.

A :class:`ProperLine` is a PL chain whose first and last segments continue
as rays. Travel follows the vertex order, and the right side R is to the
right of the direction of travel. That co-orientation is fixed here, in
:data:`RIGHT_OF_TRAVEL`, and nowhere else.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import InputError

RIGHT_OF_TRAVEL = True  # R(line) lies to the right of the direction of travel
ON_TOL = 1e-12
SIDE_TOL = 1e-9


class Side(enum.IntEnum):
    LEFT = -1
    ON = 0
    RIGHT = 1


# -- boxes ----------------------------------------------------------------------

@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise InputError(f"degenerate box {self.as_tuple()}")

    @classmethod
    def bounding(cls, points, margin: float | None = None) -> "Rect":
        P = np.asarray(points, dtype=float).reshape(-1, 2)
        lo, hi = P.min(axis=0), P.max(axis=0)
        if margin is None:
            margin = max(1.0, 0.1 * float(np.max(hi - lo)))
        return cls(float(lo[0] - margin), float(hi[0] + margin), float(lo[1] - margin), float(hi[1] + margin))

    def as_tuple(self):
        return (self.x0, self.x1, self.y0, self.y1)

    def union(self, other: "Rect") -> "Rect":
        return Rect(min(self.x0, other.x0), max(self.x1, other.x1), min(self.y0, other.y0), max(self.y1, other.y1))

    def contains(self, Z, tol: float = 0.0) -> np.ndarray:
        Z = np.atleast_2d(Z)
        return ((Z[:, 0] >= self.x0 - tol) & (Z[:, 0] <= self.x1 + tol)
                & (Z[:, 1] >= self.y0 - tol) & (Z[:, 1] <= self.y1 + tol))

    def corners(self) -> np.ndarray:
        """Clockwise from the top-left corner."""
        return np.array([[self.x0, self.y1], [self.x1, self.y1], [self.x1, self.y0], [self.x0, self.y0]])

    def grid(self, n: int) -> np.ndarray:
        xs = np.linspace(self.x0, self.x1, n)
        ys = np.linspace(self.y0, self.y1, n)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel()])

    def exit_point(self, p, d) -> np.ndarray:
        """Where the ray p + s d (s > 0) leaves the box; ``p`` must be inside."""
        p, d = np.asarray(p, float), np.asarray(d, float)
        s_best = np.inf
        for k, (lo, hi) in enumerate(((self.x0, self.x1), (self.y0, self.y1))):
            if d[k] > 0:
                s_best = min(s_best, (hi - p[k]) / d[k])
            elif d[k] < 0:
                s_best = min(s_best, (lo - p[k]) / d[k])
        return p + s_best * d

    def clockwise_param(self, z) -> float:
        """Position of a boundary point along the clockwise perimeter from the top-left corner."""
        x, y = z
        w, h = self.x1 - self.x0, self.y1 - self.y0
        eps = 1e-12 * (w + h)
        if abs(y - self.y1) <= eps:
            return x - self.x0
        if abs(x - self.x1) <= eps:
            return w + (self.y1 - y)
        if abs(y - self.y0) <= eps:
            return w + h + (self.x1 - x)
        return 2 * w + h + (y - self.y0)


# -- segment / ray primitives ------------------------------------------------------

def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def piece_intersections(P, D, smax, Q, E, umax, tol: float = 1e-12) -> list[np.ndarray]:
    """Intersection points of {P + s D : 0 <= s <= smax} and {Q + u E : 0 <= u <= umax}.

    ``smax`` / ``umax`` may be ``inf`` for rays. Collinear overlaps return
    the two ends of the overlap.
    """
    P, D, Q, E = (np.asarray(v, dtype=float) for v in (P, D, Q, E))
    den = _cross2(D, E)
    w = Q - P
    scale = max(1.0, float(np.hypot(*D)), float(np.hypot(*E)))
    if abs(den) > tol * scale * scale:
        s = _cross2(w, E) / den
        u = _cross2(w, D) / den
        es = tol / max(float(np.hypot(*D)), 1e-300)
        eu = tol / max(float(np.hypot(*E)), 1e-300)
        if -es <= s <= smax + es and -eu <= u <= umax + eu:
            return [P + s * D]
        return []
    # parallel
    if abs(_cross2(w, D)) > tol * scale * max(1.0, float(np.hypot(*w))):
        return []
    dd = float(D @ D)
    u0 = float(w @ D) / dd
    u1 = u0 + float(E @ D) / dd * umax
    lo, hi = max(0.0, min(u0, u1)), min(smax, max(u0, u1))
    if lo > hi + tol:
        return []
    pts = [P + lo * D]
    if np.isfinite(hi) and hi - lo > tol:
        pts.append(P + hi * D)
    elif not np.isfinite(hi):
        pts.append(P + (lo + 1.0) * D)
    return pts


def segments_intersect_mask(A0, A1, B0, B1, tol: float = 1e-12) -> np.ndarray:
    """Vectorized closed-segment intersection test (broadcasting over leading axes)."""
    A0, A1, B0, B1 = (np.asarray(v, dtype=float) for v in (A0, A1, B0, B1))
    d1 = _cross2(B1 - B0, A0 - B0)
    d2 = _cross2(B1 - B0, A1 - B0)
    d3 = _cross2(A1 - A0, B0 - A0)
    d4 = _cross2(A1 - A0, B1 - A0)
    proper = (((d1 > tol) & (d2 < -tol)) | ((d1 < -tol) & (d2 > tol))) & \
             (((d3 > tol) & (d4 < -tol)) | ((d3 < -tol) & (d4 > tol)))

    def on_seg(p, q, r, d):
        return (np.abs(d) <= tol) & (np.minimum(p[..., 0], q[..., 0]) - tol <= r[..., 0]) & \
               (r[..., 0] <= np.maximum(p[..., 0], q[..., 0]) + tol) & \
               (np.minimum(p[..., 1], q[..., 1]) - tol <= r[..., 1]) & \
               (r[..., 1] <= np.maximum(p[..., 1], q[..., 1]) + tol)

    touch = on_seg(B0, B1, A0, d1) | on_seg(B0, B1, A1, d2) | on_seg(A0, A1, B0, d3) | on_seg(A0, A1, B1, d4)
    return proper | touch


def point_segment_distance(Z, a, b, ray: bool = False) -> np.ndarray:
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    a, b = np.asarray(a, float), np.asarray(b, float)
    ab = b - a
    L2 = float(ab @ ab)
    t = ((Z - a) @ ab) / L2
    t = np.maximum(t, 0.0) if ray else np.clip(t, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return np.hypot(Z[:, 0] - proj[:, 0], Z[:, 1] - proj[:, 1])


def polygon_contains(poly: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Even-odd ray casting (to +x) for each point in ``Z``."""
    Z = np.atleast_2d(Z)
    x, y = Z[:, 0], Z[:, 1]
    inside = np.zeros(len(Z), dtype=bool)
    n = len(poly)
    for i in range(n):
        (xa, ya), (xb, yb) = poly[i], poly[(i + 1) % n]
        if ya == yb:
            continue
        crosses = (ya > y) != (yb > y)
        xint = xa + (y - ya) * (xb - xa) / (yb - ya)
        inside ^= crosses & (x < xint)
    return inside


# -- proper lines ----------------------------------------------------------------

class ProperLine:
    """Oriented PL line; the end segments continue as rays to infinity."""

    def __init__(self, vertices, label: str | None = None):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or len(V) < 2:
            raise InputError("a proper line needs at least 2 vertices")
        if not np.all(np.isfinite(V)):
            raise InputError("vertices must be finite")
        if np.any(np.hypot(*np.diff(V, axis=0).T) == 0):
            raise InputError("consecutive vertices must be distinct")
        V.setflags(write=False)
        self.vertices = V
        self.label = label
        seg = np.hypot(*np.diff(V, axis=0).T)
        self._cum = np.concatenate([[0.0], np.cumsum(seg)])

    # pieces: (origin, direction, max parameter)
    def pieces(self):
        V = self.vertices
        out = [(V[0], V[0] - V[1], np.inf)]
        for i in range(len(V) - 1):
            out.append((V[i], V[i + 1] - V[i], 1.0))
        out.append((V[-1], V[-1] - V[-2], np.inf))
        return out

    @property
    def length(self) -> float:
        return float(self._cum[-1])

    def reversed(self) -> "ProperLine":
        return ProperLine(self.vertices[::-1], self.label)

    def translated(self, v, label=None) -> "ProperLine":
        return ProperLine(self.vertices + np.asarray(v, dtype=float), label if label is not None else self.label)

    def to_dict(self) -> dict:
        return {"label": self.label, "vertices": self.vertices.tolist()}

    def __repr__(self):
        return f"ProperLine({self.label!r}, {self.vertices.tolist()})"

    # -- metric queries ---------------------------------------------------------
    def distance(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        V = self.vertices
        d = np.minimum(point_segment_distance(Z, V[0], 2 * V[0] - V[1], ray=True),
                       point_segment_distance(Z, V[-1], 2 * V[-1] - V[-2], ray=True))
        for i in range(len(V) - 1):
            d = np.minimum(d, point_segment_distance(Z, V[i], V[i + 1]))
        return d

    def point_at(self, t: float) -> np.ndarray:
        """Arc-length parametrisation; t < 0 on the first ray, t > length on the last."""
        V, cum = self.vertices, self._cum
        if t <= 0:
            d = V[0] - V[1]
            return V[0] + (-t) * d / np.hypot(*d)
        if t >= cum[-1]:
            d = V[-1] - V[-2]
            return V[-1] + (t - cum[-1]) * d / np.hypot(*d)
        i = int(np.searchsorted(cum, t, side="right") - 1)
        return V[i] + (t - cum[i]) / (cum[i + 1] - cum[i]) * (V[i + 1] - V[i])

    def parameter_of(self, z) -> float:
        """Arc-length parameter of the nearest point of the line to ``z``."""
        z = np.asarray(z, dtype=float)
        V, cum = self.vertices, self._cum
        best_d, best_t = np.inf, 0.0
        for k, (P, D, smax) in enumerate(self.pieces()):
            dd = float(D @ D)
            s = float((z - P) @ D) / dd
            s = max(0.0, s) if not np.isfinite(smax) else min(max(0.0, s), 1.0)
            d = float(np.hypot(*(P + s * D - z)))
            if k == 0:
                t = -s * np.sqrt(dd)
            elif k == len(V):
                t = cum[-1] + s * np.sqrt(dd)
            else:
                t = cum[k - 1] + s * (cum[k] - cum[k - 1])
            if d < best_d:
                best_d, best_t = d, t
        return float(best_t)

    # -- the portion inside a box --------------------------------------------------
    def clipped(self, box: Rect) -> np.ndarray:
        """The chain from where the first ray enters ``box`` to where the last ray leaves."""
        V = self.vertices
        if not np.all(box.contains(V)):
            raise InputError(f"line {self.label!r} has vertices outside the box {box.as_tuple()}")
        p_in = box.exit_point(V[0], V[0] - V[1])
        p_out = box.exit_point(V[-1], V[-1] - V[-2])
        return np.vstack([p_in, V, p_out])

    def sample(self, box: Rect, spacing: float) -> np.ndarray:
        """Points along the clipped chain, consecutive ones at most ``spacing`` apart."""
        C = self.clipped(box)
        out = [C[:1]]
        for a, b in zip(C[:-1], C[1:]):
            k = max(1, int(np.ceil(np.hypot(*(b - a)) / spacing)))
            t = np.arange(1, k + 1)[:, None] / k
            out.append(a + t * (b - a))
        return np.vstack(out)

    def side_of(self, Z, box: Rect | None = None) -> np.ndarray:
        """Side of each point: closes the clipped chain clockwise around a box and ray-casts."""
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        local = Rect.bounding(np.vstack([self.vertices, Z]))
        box = local if box is None else box.union(local)
        C = self.clipped(box)
        p_out, p_in = C[-1], C[0]
        perim = 2 * ((box.x1 - box.x0) + (box.y1 - box.y0))
        t_out, t_in = box.clockwise_param(p_out), box.clockwise_param(p_in)
        span = (t_in - t_out) % perim
        corners = []
        for c in box.corners():
            tc = (box.clockwise_param(c) - t_out) % perim
            if 0 < tc < span:
                corners.append((tc, c))
        corners.sort(key=lambda item: item[0])
        poly = np.vstack([C] + [c[None, :] for _, c in corners])
        if not RIGHT_OF_TRAVEL:
            raise NotImplementedError  # single switch point for the co-orientation convention
        right = polygon_contains(poly, Z)
        out = np.where(right, Side.RIGHT, Side.LEFT).astype(int)
        out[self.distance(Z) <= ON_TOL] = Side.ON
        return out

    def signed_distance(self, Z, box: Rect | None = None) -> np.ndarray:
        """Distance to the line, positive on the right side, negative on the left."""
        return self.side_of(Z, box) * self.distance(Z)

    # -- intersections -------------------------------------------------------------
    def intersections(self, other: "ProperLine") -> list[np.ndarray]:
        pts = []
        for P, D, sm in self.pieces():
            for Q, E, um in other.pieces():
                pts.extend(piece_intersections(P, D, sm, Q, E, um))
        return pts

    def intersects(self, other: "ProperLine") -> bool:
        return bool(self.intersections(other))

    def polyline_intersections(self, W: np.ndarray) -> np.ndarray:
        """Intersection points of the line with the open polyline ``W`` (shape (k, 2))."""
        W = np.asarray(W, dtype=float)
        if len(W) < 2:
            return np.empty((0, 2))
        A0, A1 = W[:-1], W[1:]
        out = []
        for P, D, sm in self.pieces():
            if np.isfinite(sm):
                B0, B1 = P, P + D
            else:
                # a ray only matters up to the far end of the polyline
                reach = float(np.max(np.hypot(*(W - P).T))) + 1.0
                B0, B1 = P, P + D / np.hypot(*D) * reach
            hit = np.flatnonzero(segments_intersect_mask(A0, A1, B0[None, :], B1[None, :]))
            for i in hit:
                out.extend(piece_intersections(A0[i], A1[i] - A0[i], 1.0, P, D, sm))
        return np.array(out).reshape(-1, 2)

    def is_simple(self) -> bool:
        pcs = self.pieces()
        n = len(pcs)
        for i in range(n):
            for j in range(i + 1, n):
                pts = piece_intersections(*pcs[i], *pcs[j])
                if not pts:
                    continue
                if j == i + 1:
                    # neighbours share exactly their common vertex
                    if len(pts) > 1 or np.hypot(*(pts[0] - pcs[j][0])) > 1e-12:
                        return False
                    continue
                return False
        return True
