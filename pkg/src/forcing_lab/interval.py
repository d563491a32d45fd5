"""Covering graphs of piecewise-linear interval maps and forced periodic orbits.

Everything here is exact: breakpoints and partition endpoints are
:class:`fractions.Fraction`, so a certified orbit satisfies ``f^T(x) == x``
as an equality of rationals rather than up to a tolerance.

Typical use, on the map through (0,1), (1,2), (2,0) whose 3-cycle
0 -> 1 -> 2 -> 0 forces every period::

    >>> f = PLMap([(0, 1), (1, 2), (2, 0)])
    >>> P = IntervalPartition([0, 1, 2])
    >>> sorted(forced_minimal_periods(build_covering_graph(f, P), f, 5))
    [1, 2, 3, 4, 5]
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DeductionError, GuardError, InputError
from .symbolic import CycleWord, TransitionMatrix, iter_cycle_words, minimal_rotation

MAX_PERIOD_GUARD = 20


def as_rational(v) -> Fraction:
    """Exact conversion; strings like ``"2/3"`` are accepted."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v)  # exact binary value, never rounded
    try:
        return Fraction(v)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {v!r}") from None


class PLMap:
    """Continuous piecewise-linear map given by its breakpoints."""

    def __init__(self, breakpoints: Iterable[Sequence]):
        pts = [(as_rational(x), as_rational(y)) for x, y in breakpoints]
        if len(pts) < 2:
            raise InputError("a PL map needs at least 2 breakpoints")
        if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
            raise InputError("breakpoint x-coordinates must be strictly increasing")
        self.breakpoints = tuple(pts)
        self.xs = tuple(p[0] for p in pts)
        self.ys = tuple(p[1] for p in pts)

    @classmethod
    def identity(cls, a=0, b=1) -> "PLMap":
        return cls([(a, a), (b, b)])

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.xs[0], self.xs[-1]

    def _piece(self, x: Fraction) -> int:
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise InputError(f"{x} outside the domain [{lo}, {hi}]")
        for k in range(len(self.xs) - 1):
            if x <= self.xs[k + 1]:
                return k
        return len(self.xs) - 2

    def slope_intercept(self, k: int) -> tuple[Fraction, Fraction]:
        (x0, y0), (x1, y1) = self.breakpoints[k], self.breakpoints[k + 1]
        m = (y1 - y0) / (x1 - x0)
        return m, y0 - m * x0

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        m, c = self.slope_intercept(self._piece(x))
        return m * x + c

    def iterate(self, x, n: int) -> Fraction:
        x = as_rational(x)
        for _ in range(n):
            x = self(x)
        return x

    def __eq__(self, other):
        return isinstance(other, PLMap) and self.breakpoints == other.breakpoints

    def __repr__(self):
        return f"PLMap({[(str(x), str(y)) for x, y in self.breakpoints]})"


class IntervalPartition:
    """Ordered endpoints a_0 < ... < a_k; interval j is (a_j, a_{j+1})."""

    def __init__(self, endpoints: Iterable):
        pts = [as_rational(a) for a in endpoints]
        if len(pts) < 2:
            raise InputError("a partition needs at least 2 endpoints")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise InputError("partition endpoints must be strictly increasing")
        self.endpoints = tuple(pts)

    def __len__(self):
        return len(self.endpoints) - 1

    def closure(self, j: int) -> tuple[Fraction, Fraction]:
        return self.endpoints[j], self.endpoints[j + 1]

    def __repr__(self):
        return f"IntervalPartition({[str(a) for a in self.endpoints]})"


def image_bounds(f: PLMap, interval) -> tuple[Fraction, Fraction]:
    """Exact ``[min, max]`` of ``f`` on the closed interval."""
    a, b = (as_rational(v) for v in interval)
    if a > b:
        raise InputError(f"empty interval [{a}, {b}]")
    lo, hi = f.domain
    if a < lo or b > hi:
        raise InputError(f"[{a}, {b}] is not inside the domain [{lo}, {hi}]")
    values = [f(a), f(b)] + [y for x, y in f.breakpoints if a < x < b]
    return min(values), max(values)


@dataclass(frozen=True)
class CoveringGraph:
    """Partition intervals with an edge I -> J iff f(closure I) contains closure J."""

    partition: IntervalPartition
    edges: frozenset

    @property
    def nodes(self) -> range:
        return range(len(self.partition))

    def successors(self, i: int) -> list[int]:
        return sorted(j for (a, j) in self.edges if a == i)

    def adjacency(self) -> TransitionMatrix:
        n = len(self.partition)
        return TransitionMatrix([[int((i, j) in self.edges) for j in range(n)] for i in range(n)])


def build_covering_graph(f: PLMap, P: IntervalPartition) -> CoveringGraph:
    edges = set()
    images = [image_bounds(f, P.closure(i)) for i in range(len(P))]
    for i, (lo, hi) in enumerate(images):
        for j in range(len(P)):
            a, b = P.closure(j)
            if lo <= a and b <= hi:
                edges.add((i, j))
    return CoveringGraph(P, frozenset(edges))


# -- exact pullback along an itinerary ---------------------------------------

@dataclass(frozen=True)
class _Branch:
    """x in [lo, hi] with f^j(x) = slope * x + offset along the itinerary so far."""

    lo: Fraction
    hi: Fraction
    slope: Fraction
    offset: Fraction


def _restrict(lo, hi, m, c, a, b):
    """Sub-interval of [lo, hi] where a <= m*x + c <= b (affine, exact)."""
    if m == 0:
        return (lo, hi) if a <= c <= b else None
    u, v = (a - c) / m, (b - c) / m
    if u > v:
        u, v = v, u
    lo2, hi2 = max(lo, u), min(hi, v)
    return (lo2, hi2) if lo2 <= hi2 else None


def itinerary_branches(f: PLMap, P: IntervalPartition, itinerary: Sequence[int]) -> list[_Branch]:
    """Exact pullback of the closed cylinder set of ``itinerary``.

    Returns the monotone affine branches of f^T restricted to
    {x : f^j(x) in closure(I_{w_j}), 0 <= j < T, and f^T(x) in closure(I_{w_0})}.
    """
    T = len(itinerary)
    a0, b0 = P.closure(itinerary[0])
    branches = [_Branch(a0, b0, Fraction(1), Fraction(0))]
    for j in range(T):
        target = P.closure(itinerary[(j + 1) % T])
        nxt = []
        for br in branches:
            # split at pullbacks of f's breakpoints so f is affine on each piece
            cuts = {br.lo, br.hi}
            if br.slope != 0:
                for xb in f.xs:
                    t = (xb - br.offset) / br.slope
                    if br.lo < t < br.hi:
                        cuts.add(t)
            cuts = sorted(cuts)
            for lo, hi in zip(cuts, cuts[1:] or cuts):
                mid = (lo + hi) / 2
                y_mid = br.slope * mid + br.offset
                m, c = f.slope_intercept(f._piece(y_mid))
                slope, offset = m * br.slope, m * br.offset + c
                piece = _restrict(lo, hi, slope, offset, *target)
                if piece is not None:
                    nxt.append(_Branch(piece[0], piece[1], slope, offset))
        branches = _merge_points(nxt)
        if not branches:
            break
    return branches


def _merge_points(branches):
    seen, out = set(), []
    for br in branches:
        key = (br.lo, br.hi, br.slope, br.offset)
        if key not in seen:
            seen.add(key)
            out.append(br)
    return out


def orbit(f: PLMap, x, n: int) -> list[Fraction]:
    pts = [as_rational(x)]
    for _ in range(n - 1):
        pts.append(f(pts[-1]))
    return pts


def exact_minimal_period(f: PLMap, x, bound: int) -> int | None:
    """Smallest k in 1..bound with f^k(x) == x, else None."""
    x0 = as_rational(x)
    y = x0
    for k in range(1, bound + 1):
        y = f(y)
        if y == x0:
            return k
    return None


@dataclass(frozen=True)
class PeriodicPoint:
    """A certified periodic point following a prescribed itinerary."""

    itinerary: tuple[int, ...]
    point: Fraction
    orbit: tuple[Fraction, ...]
    minimal_period: int
    boundary: bool

    @property
    def period(self) -> int:
        return len(self.itinerary)


def _fixed_points_of_branches(branches):
    pts = []
    for br in branches:
        if br.slope != 1:
            x = br.offset / (1 - br.slope)
            if br.lo <= x <= br.hi:
                pts.append(x)
        elif br.offset == 0:
            # f^T is the identity on this branch; every point is fixed
            pts.append(br.lo)
            if br.hi != br.lo:
                pts.append((br.lo + br.hi) / 2)
    return sorted(set(pts))


def _check_admissible(G: CoveringGraph, itinerary):
    T = len(itinerary)
    for j in range(T):
        a, b = itinerary[j], itinerary[(j + 1) % T]
        if a not in G.nodes or b not in G.nodes:
            raise InputError(f"interval index out of range in itinerary {itinerary}")
        if (a, b) not in G.edges:
            raise DeductionError(f"itinerary {itinerary} is not a cycle of the covering graph: no edge {a}->{b}")


def periodic_points_from_itinerary(f: PLMap, P: IntervalPartition, w, graph: CoveringGraph | None = None) -> list[PeriodicPoint]:
    """Every fixed point of f^T on the exact pullback of the cycle ``w``."""
    itinerary = tuple(w.symbols if isinstance(w, CycleWord) else w)
    if not itinerary:
        raise InputError("empty itinerary")
    G = graph if graph is not None else build_covering_graph(f, P)
    _check_admissible(G, itinerary)
    T = len(itinerary)
    ends = set(P.endpoints)
    found = []
    for x in _fixed_points_of_branches(itinerary_branches(f, P, itinerary)):
        orb = tuple(orbit(f, x, T))
        if f(orb[-1]) != x:  # defensive: equality is exact
            continue
        found.append(PeriodicPoint(
            itinerary=itinerary,
            point=x,
            orbit=orb,
            minimal_period=exact_minimal_period(f, x, T),
            boundary=any(p in ends for p in orb),
        ))
    return found


def point_from_itinerary(f: PLMap, P: IntervalPartition, w, graph: CoveringGraph | None = None) -> PeriodicPoint:
    """One periodic point realising the admissible cycle ``w``.

    Interior points of exact minimal period ``len(w)`` are preferred; when
    the pullback collapses onto partition endpoints the boundary point is
    returned with ``boundary=True``.
    """
    pts = periodic_points_from_itinerary(f, P, w, graph)
    if not pts:
        raise DeductionError(f"no fixed point of f^T on the pullback of {w}")
    T = len(pts[0].itinerary)
    return min(pts, key=lambda p: (p.minimal_period != T, p.boundary, p.point))


def forced_periodic_orbits(G: CoveringGraph, f: PLMap, maxT: int) -> dict[int, PeriodicPoint]:
    """One certificate per minimal period T <= maxT that the graph forces."""
    if maxT > MAX_PERIOD_GUARD:
        raise GuardError(f"maxT={maxT} exceeds the exhaustive-enumeration limit {MAX_PERIOD_GUARD}")
    A = G.adjacency()
    certs: dict[int, PeriodicPoint] = {}
    for T in range(1, maxT + 1):
        for cw in iter_cycle_words(A, T):
            if not cw.is_primitive:
                continue
            for pp in periodic_points_from_itinerary(f, G.partition, cw.symbols, G):
                if pp.minimal_period == T:
                    best = certs.get(T)
                    if best is None or (best.boundary and not pp.boundary):
                        certs[T] = pp
                    break
            if T in certs and not certs[T].boundary:
                break
    return certs


def forced_minimal_periods(G: CoveringGraph, f: PLMap, maxT: int) -> set[int]:
    """Minimal periods <= maxT certified by an exact periodic orbit."""
    return set(forced_periodic_orbits(G, f, maxT))


def canonical_itinerary(itinerary) -> tuple[int, ...]:
    return minimal_rotation(itinerary)
