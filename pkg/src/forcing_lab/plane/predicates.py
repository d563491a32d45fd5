"""Desk-scale geometric predicates on oriented lines, maps and transverse paths.

Every check samples finitely many points inside a box, so outcomes come as
a :class:`Verdict` where "inconclusive" is a first-class value, distinct
from false.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import InputError, PreconditionError, WitnessNotFound
from .chart import FoliationChart, TransversePath
from .geometry import ON_TOL, SIDE_TOL, ProperLine, Rect, Side, piece_intersections, segments_intersect_mask
from .maps import PlanarMap

_TOUCH = 1e-9


class Verdict(str, enum.Enum):
    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class BrouwerCheck:
    verdict: Verdict
    margin: float
    worst_point: tuple[float, float]
    samples: int

    def __bool__(self):
        return self.verdict is Verdict.TRUE

    def to_dict(self):
        return {"verdict": self.verdict.value, "margin": self.margin,
                "worst_point": list(self.worst_point), "samples": self.samples}


def is_brouwer_line(line: ProperLine, f: PlanarMap, box: Rect | None = None, grid: int = 65,
                    spacing: float | None = None) -> BrouwerCheck:
    """Sampled test of closure(f(R)) inside R for the right side R of ``line``.

    Samples are the grid points of ``box`` on the closed right side plus a
    dense sampling of the part of the line inside ``box``; the margin of a sample is the signed
    distance of its image to the line (positive on the right). True needs
    every margin above 1e-9; a worst margin in (0, 1e-9] is inconclusive.
    """
    if box is None:
        box = Rect.bounding(line.vertices)
    if spacing is None:
        spacing = min(box.x1 - box.x0, box.y1 - box.y0) / (grid - 1)
    # the line may have vertices outside the sampling box; side tests use a box holding both
    full = box.union(Rect.bounding(line.vertices))
    G = box.grid(grid)
    G = G[line.side_of(G, full) >= Side.ON]
    S = line.sample(full, spacing)
    Z = np.vstack([G, S[box.contains(S)]])
    W = f(Z)
    margins = line.signed_distance(W, full)
    k = int(np.argmin(margins))
    m = float(margins[k])
    verdict = Verdict.TRUE if m > SIDE_TOL else (Verdict.INCONCLUSIVE if m > 0 else Verdict.FALSE)
    return BrouwerCheck(verdict, m, (float(Z[k, 0]), float(Z[k, 1])), len(Z))


# -- "above relative to" --------------------------------------------------------

def _line_probe(line: ProperLine, box: Rect) -> np.ndarray:
    """Vertices, segment midpoints and two points on each ray inside ``box``."""
    V = line.vertices
    C = line.clipped(box)
    mids = (V[:-1] + V[1:]) / 2
    ends = np.vstack([(C[0] + V[0]) / 2, C[0], (C[-1] + V[-1]) / 2, C[-1]])
    return np.vstack([V, mids, ends])


def check_above_preconditions(phi2: ProperLine, phi1: ProperLine, phi: ProperLine, box: Rect) -> None:
    lines = {"phi": phi, "phi1": phi1, "phi2": phi2}
    names = list(lines)
    for i in range(3):
        for j in range(i + 1, 3):
            a, b = names[i], names[j]
            if lines[a].intersects(lines[b]):
                raise PreconditionError("disjoint", f"{a} and {b} intersect")
    for sep in names:
        others = [n for n in names if n != sep]
        sides = []
        for n in others:
            s = set(lines[sep].side_of(_line_probe(lines[n], box), box).tolist())
            s.discard(int(Side.ON))
            if len(s) != 1:
                raise PreconditionError("disjoint", f"{n} meets both sides of {sep}")
            sides.append(s.pop())
        if sides[0] != sides[1]:
            raise PreconditionError("separation", f"{sep} separates {others[0]} from {others[1]}")


def _arc_family(line: ProperLine, phi: ProperLine, box: Rect, samples: int):
    """Straight and corner-detour arcs from ``line`` to ``phi`` as (K, 3, 2) polylines."""
    P = _even_points(line, box, samples)
    Q = _even_points(phi, box, samples)
    tq = np.array([phi.parameter_of(q) for q in Q])
    arcs, ts = [], []
    for p in P:
        for q, t in zip(Q, tq):
            arcs.append([p, (p + q) / 2, q])
            ts.append(t)
            for c in box.corners():
                arcs.append([p, c, q])
                ts.append(t)
    return np.array(arcs), np.array(ts)


def _even_points(line: ProperLine, box: Rect, count: int) -> np.ndarray:
    C = line.clipped(box)
    seg = np.hypot(*np.diff(C, axis=0).T)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    s = np.linspace(0, cum[-1], count + 2)[1:-1]
    pts = np.column_stack([np.interp(s, cum, C[:, 0]), np.interp(s, cum, C[:, 1])])
    return np.vstack([pts, line.vertices])


def _hits(line: ProperLine, A0: np.ndarray, A1: np.ndarray, reach: float):
    """(segment index, point) for every meeting of ``line`` with segments A0[i]A1[i]."""
    out = []
    for P, D, smax in line.pieces():
        B1 = P + D if np.isfinite(smax) else P + D / np.hypot(*D) * reach
        for i in np.flatnonzero(segments_intersect_mask(A0, A1, P[None, :], B1[None, :])):
            for z in piece_intersections(A0[i], A1[i] - A0[i], 1.0, P, D, smax):
                out.append((int(i), z))
    return out


def _valid_arcs(arcs: np.ndarray, own: ProperLine, phi: ProperLine, third: ProperLine, reach: float) -> np.ndarray:
    """Mask of arcs meeting ``own`` only at the start, ``phi`` only at the end, and missing ``third``."""
    K = len(arcs)
    A0 = arcs[:, :-1].reshape(-1, 2)
    A1 = arcs[:, 1:].reshape(-1, 2)
    nseg = arcs.shape[1] - 1
    ok = np.ones(K, dtype=bool)
    for i, _ in _hits(third, A0, A1, reach):
        ok[i // nseg] = False
    for i, z in _hits(phi, A0, A1, reach):
        k = i // nseg
        if np.hypot(*(z - arcs[k, -1])) > _TOUCH:
            ok[k] = False
    for i, z in _hits(own, A0, A1, reach):
        k = i // nseg
        if np.hypot(*(z - arcs[k, 0])) > _TOUCH:
            ok[k] = False
    # a degenerate arc (zero-length piece) is not a path we can certify
    lens = np.hypot(*(arcs[:, 1:] - arcs[:, :-1]).transpose(2, 0, 1))
    ok &= np.all(lens > _TOUCH, axis=1)
    return ok


@dataclass(frozen=True)
class AboveWitness:
    """Outcome of the witness search: the pairs checked and the extreme parameters seen."""

    holds: bool
    pairs: int
    t1_range: tuple[float, float]
    t2_range: tuple[float, float]


def above_witnesses(phi2: ProperLine, phi1: ProperLine, phi: ProperLine, box: Rect | None = None,
                    samples: int = 10) -> AboveWitness:
    """Check t2 > t1 over every disjoint pair in the finite witness-arc family.

    The family joins evenly spaced points (plus vertices) of each line to
    points of ``phi`` by straight segments and by two-segment detours through
    the box corners.
    """
    if box is None:
        box = Rect.bounding(np.vstack([phi.vertices, phi1.vertices, phi2.vertices]))
    check_above_preconditions(phi2, phi1, phi, box)
    reach = 4.0 * float(np.hypot(box.x1 - box.x0, box.y1 - box.y0))
    arcs1, t1 = _arc_family(phi1, phi, box, samples)
    arcs2, t2 = _arc_family(phi2, phi, box, samples)
    m1 = _valid_arcs(arcs1, phi1, phi, phi2, reach)
    m2 = _valid_arcs(arcs2, phi2, phi, phi1, reach)
    arcs1, t1, arcs2, t2 = arcs1[m1], t1[m1], arcs2[m2], t2[m2]
    if len(arcs1) == 0 or len(arcs2) == 0:
        raise WitnessNotFound(f"no valid witness arc from {'phi1' if len(arcs1) == 0 else 'phi2'} to phi")
    # pairwise disjointness of 2-segment arcs: (K1, K2, 2, 2) segment tests
    a0, a1 = arcs1[:, None, :-1, None, :], arcs1[:, None, 1:, None, :]
    b0, b1 = arcs2[None, :, None, :-1, :], arcs2[None, :, None, 1:, :]
    meet = segments_intersect_mask(a0, a1, b0, b1).any(axis=(2, 3))
    disjoint = ~meet
    if not disjoint.any():
        raise WitnessNotFound("no disjoint pair of witness arcs in the family")
    i, j = np.nonzero(disjoint)
    holds = bool(np.all(t2[j] > t1[i]))
    return AboveWitness(holds, int(len(i)), (float(t1[i].min()), float(t1[i].max())),
                        (float(t2[j].min()), float(t2[j].max())))


def is_above(phi2: ProperLine, phi1: ProperLine, phi: ProperLine, box: Rect | None = None, samples: int = 10) -> bool:
    """Whether ``phi2`` lies above ``phi1`` relative to ``phi``.

    Raises :class:`PreconditionError` naming the failed condition
    ("disjoint" or "separation"), or :class:`WitnessNotFound` when the arc
    family holds no disjoint witness pair.
    """
    return above_witnesses(phi2, phi1, phi, box, samples).holds


# -- transverse intersections ----------------------------------------------------------

@dataclass(frozen=True)
class TransverseIntersection:
    """gamma1(t1) == gamma2(t2) on ``leaf``; ``sign`` +1 when the endpoint leaves
    of gamma2 start above and end below those of gamma1, -1 for the mirror case."""

    leaf: str
    t1: float
    t2: float
    sign: int
    gamma1: TransversePath
    gamma2: TransversePath

    @property
    def point(self) -> np.ndarray:
        return self.gamma1.point_at(self.t1)

    def swapped(self) -> "TransverseIntersection":
        return TransverseIntersection(self.leaf, self.t2, self.t1, -self.sign, self.gamma2, self.gamma1)

    def to_dict(self) -> dict:
        return {"leaf": self.leaf, "t1": self.t1, "t2": self.t2, "sign": self.sign,
                "point": self.point.tolist(), "gamma1": self.gamma1.to_dict(), "gamma2": self.gamma2.to_dict()}


def _above_or_none(chart, upper: str, lower: str, phi: ProperLine, box) -> bool | None:
    if upper == lower:
        return False
    key = (upper, lower, phi.label, box.as_tuple())
    if key not in chart.above_cache:
        try:
            chart.above_cache[key] = is_above(chart[upper], chart[lower], phi, box)
        except WitnessNotFound:
            chart.above_cache[key] = None
    return chart.above_cache[key]


def _meet(chart: FoliationChart, phi: ProperLine, g1: TransversePath, t1: float, g2: TransversePath, t2: float):
    """Reroute the paths near their crossings of ``phi`` so both pass through one point.

    Candidates are the midpoint (in the leaf's arc length) of the two
    crossing points, then the crossing points themselves in leaf order; the
    choice does not depend on which path comes first.
    """
    z1, z2 = g1.point_at(t1), g2.point_at(t2)
    if np.hypot(*(z1 - z2)) <= ON_TOL:
        return g1, t1, g2, t2
    s1, s2 = phi.parameter_of(z1), phi.parameter_of(z2)
    ends = [phi.point_at(s) for s in sorted((s1, s2))]
    for z in [phi.point_at((s1 + s2) / 2)] + ends:
        try:
            h1, u1 = g1.through(t1, z)
            h2, u2 = g2.through(t2, z)
            return chart.validate_path(h1), u1, chart.validate_path(h2), u2
        except InputError:
            continue
    return None


def find_transverse_intersection(g1: TransversePath, g2: TransversePath, chart: FoliationChart,
                                 box: Rect | None = None) -> TransverseIntersection | None:
    """First common crossed leaf, in crossing order along ``g1``, where the paths cross F-transversally.

    Candidates whose "above" tests raise :class:`WitnessNotFound` are
    skipped; precondition errors propagate.
    """
    box = box or chart.box
    for label, t1 in g1.crossings:
        for label2, t2 in g2.crossings:
            if label2 != label:
                continue
            phi = chart[label]
            for sign in (1, -1):
                lo_a, hi_a = (g1.start_leaf, g2.start_leaf)[::sign]
                hi_b, lo_b = (g1.end_leaf, g2.end_leaf)[::sign]
                if _above_or_none(chart, hi_a, lo_a, phi, box) and _above_or_none(chart, hi_b, lo_b, phi, box):
                    met = _meet(chart, phi, g1, t1, g2, t2)
                    if met is not None:
                        return TransverseIntersection(label, met[1], met[3], sign, met[0], met[2])
    return None


# -- admissibility by leaf images ----------------------------------------------------

@dataclass(frozen=True)
class AdmissibilityCheck:
    verdict: Verdict
    n: int
    point: tuple[float, float] | None
    samples: int

    def __bool__(self):
        return self.verdict is Verdict.TRUE

    def to_dict(self):
        return {"verdict": self.verdict.value, "n": self.n,
                "point": None if self.point is None else list(self.point), "samples": self.samples}


def leaves_meet_after(start: ProperLine, end: ProperLine, n: int, f: PlanarMap, box: Rect,
                      spacing: float = 1e-3) -> AdmissibilityCheck:
    """Does f^n(start) meet ``end`` inside ``box``? ``start`` is densified inside the box first."""
    if n < 1:
        raise InputError("order n must be >= 1")
    Z = start.sample(box, spacing)
    W = f(Z, n)
    hits = end.polyline_intersections(W)
    if len(hits):
        hits = hits[box.contains(hits, 1e-9)]
    if len(hits):
        z = hits[0]
        return AdmissibilityCheck(Verdict.TRUE, n, (float(z[0]), float(z[1])), len(Z))
    inside = bool(np.all(box.contains(W, 1e-9)))
    return AdmissibilityCheck(Verdict.FALSE if inside else Verdict.INCONCLUSIVE, n, None, len(Z))


def is_admissible_geometric(gamma: TransversePath, n: int, f: PlanarMap, chart: FoliationChart,
                            box: Rect | None = None, spacing: float = 1e-3) -> AdmissibilityCheck:
    """Sampled test that f^n maps the start leaf of ``gamma`` onto a curve meeting its end leaf."""
    return leaves_meet_after(chart[gamma.start_leaf], chart[gamma.end_leaf], n, f, box or chart.box, spacing)
