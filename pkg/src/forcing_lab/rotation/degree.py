"""Winding-number search for points with g^q(z) = z + p.

The field F(z) = g^q(z) - z - p is sampled along the counterclockwise
boundary of a box; any consecutive pair of samples whose direction turns by
pi/2 or more is split until none remain. A nonzero winding number means F
vanishes somewhere inside.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import IndeterminateBoundary, InputError
from .lift import TorusLift

ZERO_THRESHOLD = 1e-9
MAX_SAMPLES = 2**20
INITIAL_PER_SIDE = 4
MIN_DIAMETER = 1e-10
MAX_DEPTH = 40
RESIDUAL_TOL = 1e-8
MAX_RETRIES = 8


@dataclass(frozen=True)
class Box:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise InputError(f"degenerate box {self.as_tuple()}")

    @classmethod
    def around(cls, c, r: float) -> "Box":
        return cls(c[0] - r, c[0] + r, c[1] - r, c[1] + r)

    def as_tuple(self):
        return (self.x0, self.x1, self.y0, self.y1)

    @property
    def center(self) -> np.ndarray:
        return np.array([(self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2])

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.x1 - self.x0, self.y1 - self.y0))

    def boundary_point(self, s):
        """Counterclockwise boundary parametrised by s in [0, 4), starting at (x0, y0)."""
        s = np.asarray(s, dtype=float)
        side = np.minimum(np.floor(s).astype(int), 3)
        t = s - side
        w, h = self.x1 - self.x0, self.y1 - self.y0
        x = np.choose(side, [self.x0 + t * w, np.full_like(t, self.x1), self.x1 - t * w, np.full_like(t, self.x0)])
        y = np.choose(side, [np.full_like(t, self.y0), self.y0 + t * h, np.full_like(t, self.y1), self.y1 - t * h])
        return np.column_stack([x, y])

    def split(self, fx: float = 0.5, fy: float = 0.5) -> list["Box"]:
        xm = self.x0 + fx * (self.x1 - self.x0)
        ym = self.y0 + fy * (self.y1 - self.y0)
        return [Box(self.x0, xm, self.y0, ym), Box(xm, self.x1, self.y0, ym),
                Box(self.x0, xm, ym, self.y1), Box(xm, self.x1, ym, self.y1)]

    def shifted(self, fx: float, fy: float) -> "Box":
        dx, dy = fx * (self.x1 - self.x0), fy * (self.y1 - self.y0)
        return Box(self.x0 + dx, self.x1 + dx, self.y0 + dy, self.y1 + dy)


@dataclass(frozen=True)
class DegreeCertificate:
    box: tuple[float, float, float, float]
    q: int
    p: tuple[int, int]
    degree: int
    min_norm: float
    threshold: float
    samples: int

    def to_dict(self) -> dict:
        return {"box": list(self.box), "q": self.q, "p": list(self.p), "degree": self.degree,
                "min_norm": self.min_norm, "threshold": self.threshold, "samples": self.samples}


def _field(g: TorusLift, q: int, p, kernel):
    pv = np.asarray(p, dtype=float)

    def F(z):
        return g.total_displacement(np.atleast_2d(z), q, kernel) - pv

    return F


def _check_inputs(q, p):
    if int(q) != q or q < 1:
        raise InputError("q must be a positive integer")
    p = tuple(int(v) for v in p)
    if len(p) != 2:
        raise InputError("p must be an integer 2-vector")
    return int(q), p


def degree_on_box(g: TorusLift, q: int, p, box: Box, kernel=None, threshold: float = ZERO_THRESHOLD) -> DegreeCertificate:
    """Winding number of z -> g^q(z) - z - p around ``box``.

    Raises :class:`IndeterminateBoundary` if the field comes within
    ``threshold`` of zero on a boundary sample, or if the refinement would
    need more than 2^20 samples.
    """
    q, p = _check_inputs(q, p)
    if not isinstance(box, Box):
        box = Box(*box)
    F = _field(g, q, p, kernel)
    s = np.arange(4 * INITIAL_PER_SIDE, dtype=float) / INITIAL_PER_SIDE
    Z = box.boundary_point(s)
    V = F(Z)
    while True:
        norms = np.hypot(V[:, 0], V[:, 1])
        k = int(np.argmin(norms))
        if norms[k] <= threshold:
            raise IndeterminateBoundary(
                f"field vanishes within {threshold:g} on the boundary of {box.as_tuple()}", Z[k], float(norms[k]))
        ang = np.arctan2(V[:, 1], V[:, 0])
        turn = np.angle(np.exp(1j * (np.roll(ang, -1) - ang)))
        bad = np.flatnonzero(np.abs(turn) >= np.pi / 2)
        if len(bad) == 0:
            break
        if len(s) + len(bad) > MAX_SAMPLES:
            raise IndeterminateBoundary(
                f"winding not resolved with {MAX_SAMPLES} samples on {box.as_tuple()}", Z[k], float(norms[k]))
        s_next = np.where(bad == len(s) - 1, 4.0, s[(bad + 1) % len(s)])
        mids = (s[bad] + s_next) / 2
        Zm = box.boundary_point(mids)
        Vm = F(Zm)
        s = np.insert(s, bad + 1, mids)
        Z = np.insert(Z, bad + 1, Zm, axis=0)
        V = np.insert(V, bad + 1, Vm, axis=0)
    degree = int(round(turn.sum() / (2 * np.pi)))
    return DegreeCertificate(box.as_tuple(), q, p, degree, float(norms.min()), threshold, len(s))


@dataclass
class PeriodicSearchResult:
    success: bool
    z: tuple[float, float] | None = None
    residual: float | None = None
    certificates: list[DegreeCertificate] = field(default_factory=list)
    reason: str = ""

    @property
    def degrees(self) -> list[int]:
        return [c.degree for c in self.certificates]

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "z": None if self.z is None else list(self.z),
            "residual": self.residual,
            "reason": self.reason,
            "certificates": [c.to_dict() for c in self.certificates],
        }


# split fractions tried in turn when a split line runs through a zero
_SPLITS = [(0.5, 0.5), (0.5 + 1 / 7, 0.5 - 1 / 11), (0.5 - 1 / 13, 0.5 + 1 / 9), (0.25, 0.75),
           (0.75, 0.25), (0.5 + 1 / 5, 0.5 + 1 / 17), (0.5 - 1 / 19, 0.5 - 1 / 3), (0.4, 0.6), (0.6, 0.4)]


def find_periodic(g: TorusLift, p, q: int, box, kernel=None, scan_depth: int = 2) -> PeriodicSearchResult:
    """Search ``box`` for z with g^q(z) = z + p by degree-guided subdivision.

    The seed box, and if its degree is zero the cells of ``scan_depth``
    uniform subdivisions of it, are tested for a nonzero degree; the search
    then descends into nonzero-degree children until the box diameter drops
    below 1e-10. A boundary sample where the field already vanishes counts
    as a solution once its residual is confirmed.
    """
    q, p = _check_inputs(q, p)
    if not isinstance(box, Box):
        box = Box(*box)
    F = _field(g, q, p, kernel)
    res = PeriodicSearchResult(False)

    def accept(z, why):
        r = float(np.hypot(*F(z)[0]))
        if r < RESIDUAL_TOL:
            res.success, res.z, res.residual, res.reason = True, (float(z[0]), float(z[1])), r, why
            return True
        return False

    def degree(b):
        for attempt in range(MAX_RETRIES + 1):
            cand = b if attempt == 0 else b.shifted(*[(f - 0.5) / 2 for f in _SPLITS[attempt]])
            try:
                cert = degree_on_box(g, q, p, cand, kernel)
            except IndeterminateBoundary as e:
                if accept(np.asarray(e.point), "field vanishes at a boundary sample"):
                    return None
                continue
            res.certificates.append(cert)
            return cert
        return False

    # locate a seed cell with nonzero degree
    level = [box]
    seed = None
    for _ in range(scan_depth + 1):
        for b in level:
            cert = degree(b)
            if cert is None:
                return res
            if cert and cert.degree != 0:
                seed = Box(*cert.box)
                break
        if seed is not None:
            break
        level = [c for b in level for c in b.split()]
    if seed is None:
        res.reason = "no box with nonzero degree"
        return res

    current = seed
    for _ in range(MAX_DEPTH):
        if current.diameter < MIN_DIAMETER:
            break
        nxt = None
        for fx, fy in _SPLITS:
            children = current.split(fx, fy)
            certs = []
            for c in children:
                try:
                    certs.append(degree_on_box(g, q, p, c, kernel))
                except IndeterminateBoundary as e:
                    if accept(np.asarray(e.point), "field vanishes at a boundary sample"):
                        return res
                    certs = None
                    break
            if certs is None:
                continue
            for cert in certs:
                if cert.degree != 0:
                    res.certificates.append(cert)
                    nxt = Box(*cert.box)
                    break
            if nxt is not None:
                break
        if nxt is None:
            res.reason = "subdivision lost the nonzero degree"
            return res
        current = nxt
    if accept(current.center, "box diameter below 1e-10"):
        return res
    res.reason = "residual check failed at the final box"
    return res
