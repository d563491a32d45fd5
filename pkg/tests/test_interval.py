from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forcing_lab.errors import DeductionError, GuardError, InputError
from forcing_lab.interval import (
    IntervalPartition,
    PLMap,
    build_covering_graph,
    forced_minimal_periods,
    forced_periodic_orbits,
    image_bounds,
    periodic_points_from_itinerary,
    point_from_itinerary,
)
from forcing_lab.symbolic import count_periodic_points, iter_cycle_words

SHARKO = PLMap([(0, 1), (1, 2), (2, 0)])
P2 = IntervalPartition([0, 1, 2])


def pl_roots(f: PLMap, T: int) -> set:
    """Exact isolated roots of f^T(x) = x by splitting the domain where some
    iterate hits a breakpoint, then solving each affine piece."""
    a0, b0 = f.domain
    out = set()
    stack = [(a0, b0)]
    while stack:
        a, b = stack.pop()
        m, c = Fr(1), Fr(0)
        split = None
        for _ in range(T):
            ya, yb = m * a + c, m * b + c
            lo, hi = min(ya, yb), max(ya, yb)
            inner = [x for x in f.xs if lo < x < hi]
            if inner:
                split = (inner[0] - c) / m
                break
            mid = (lo + hi) / 2
            k = f._piece(mid) if lo < hi else f._piece(lo)
            s, d = f.slope_intercept(k)
            m, c = s * m, s * c + d
        if split is not None:
            stack += [(a, split), (split, b)]
            continue
        if m != 1:
            x = c / (1 - m)
            if a <= x <= b:
                out.add(x)
    return out


def iterate(f, x, n):
    for _ in range(n):
        x = f(x)
    return x


class TestImagesAndGraph:
    def test_image_bounds(self):
        assert image_bounds(SHARKO, (0, 1)) == (1, 2)
        assert image_bounds(SHARKO, (1, 2)) == (0, 2)
        I = PLMap.identity(0, 1)
        assert image_bounds(I, (Fr(1, 3), Fr(1, 2))) == (Fr(1, 3), Fr(1, 2))

    def test_image_outside_domain(self):
        with pytest.raises(InputError):
            image_bounds(SHARKO, (1, 3))

    def test_sharko_graph(self):
        assert build_covering_graph(SHARKO, P2).edges == {(0, 1), (1, 0), (1, 1)}

    def test_identity_graph(self):
        P = IntervalPartition([0, Fr(1, 4), Fr(1, 2), 1])
        assert build_covering_graph(PLMap.identity(), P).edges == {(0, 0), (1, 1), (2, 2)}

    def test_tent_graph(self):
        tent = PLMap([(0, 0), (Fr(1, 2), 1), (1, 0)])
        G = build_covering_graph(tent, IntervalPartition([0, Fr(1, 2), 1]))
        assert G.edges == {(0, 0), (0, 1), (1, 0), (1, 1)}


class TestItineraries:
    def test_fixed_point(self):
        pp = point_from_itinerary(SHARKO, P2, [1])
        assert pp.point == Fr(4, 3) and pp.minimal_period == 1 and not pp.boundary

    def test_period_two(self):
        pp = point_from_itinerary(SHARKO, P2, [0, 1])
        assert pp.point == Fr(2, 3)
        assert set(pp.orbit) == {Fr(2, 3), Fr(5, 3)}
        assert pp.minimal_period == 2

    def test_boundary_three_cycle(self):
        pp = point_from_itinerary(SHARKO, P2, [0, 1, 1])
        assert pp.point == 0 and pp.boundary
        assert set(pp.orbit) == {0, 1, 2}

    def test_inadmissible(self):
        with pytest.raises(DeductionError):
            point_from_itinerary(SHARKO, P2, [0, 0])


class TestForcedPeriods:
    def test_sharkovsky_small(self):
        G = build_covering_graph(SHARKO, P2)
        assert forced_minimal_periods(G, SHARKO, 5) == {1, 2, 3, 4, 5}

    def test_identity(self):
        f = PLMap.identity()
        G = build_covering_graph(f, IntervalPartition([0, 1]))
        assert forced_minimal_periods(G, f, 6) == {1}

    def test_no_cycles(self):
        f = PLMap([(0, Fr(1, 2)), (1, Fr(1, 2))])
        G = build_covering_graph(f, IntervalPartition([0, 1]))
        assert G.edges == frozenset()
        assert forced_minimal_periods(G, f, 6) == set()

    def test_guard(self):
        G = build_covering_graph(SHARKO, P2)
        with pytest.raises(GuardError, match="20"):
            forced_periodic_orbits(G, SHARKO, 21)

    def test_certificates_are_exact(self):
        G = build_covering_graph(SHARKO, P2)
        for T, pp in forced_periodic_orbits(G, SHARKO, 10).items():
            x = pp.point
            assert iterate(SHARKO, x, T) == x
            assert all(iterate(SHARKO, x, j) != x for j in range(1, T))


coords = st.integers(0, 6)


@st.composite
def pl_maps(draw):
    inner = draw(st.lists(st.integers(1, 11), max_size=5, unique=True))
    xs = [Fr(0)] + sorted(Fr(v, 2) for v in inner) + [Fr(6)]
    ys = [Fr(draw(coords)) for _ in xs]
    return PLMap(list(zip(xs, ys)))


class TestRootOracle:
    def test_oracle_on_sharko(self):
        assert pl_roots(SHARKO, 1) == {Fr(4, 3)}
        assert pl_roots(SHARKO, 2) == {Fr(4, 3), Fr(2, 3), Fr(5, 3)}

    @given(pl_maps(), st.integers(1, 4))
    def test_engine_against_root_enumeration(self, f, T):
        P = IntervalPartition(f.xs)
        G = build_covering_graph(f, P)
        A = G.adjacency()
        roots = pl_roots(f, T)
        # a map with an interval of T-periodic points has no isolated roots to compare
        flat = any(iterate(f, (a + b) / 2, T) == (a + b) / 2 and iterate(f, a, T) == a
                   for a, b in zip(f.xs, f.xs[1:]))
        found = {}
        for cw in iter_cycle_words(A, T):
            for pp in periodic_points_from_itinerary(f, P, cw.symbols, G):
                assert iterate(f, pp.point, T) == pp.point
                if not flat:
                    assert pp.point in roots
                found.setdefault(cw.symbols, set()).update(pp.orbit)
        if flat:
            return
        ends = set(P.endpoints)
        for x in roots:
            orb = [iterate(f, x, j) for j in range(T)]
            if any(y in ends for y in orb):
                continue
            it = tuple(next(k for k in range(len(P)) if P.endpoints[k] < y < P.endpoints[k + 1]) for y in orb)
            admissible = all((it[j], it[(j + 1) % T]) in G.edges for j in range(T))
            if admissible:
                canon = min(it[i:] + it[:i] for i in range(T))
                assert x in found.get(canon, set())

    @given(pl_maps(), st.integers(1, 5))
    def test_certified_itineraries_bounded_by_trace(self, f, T):
        P = IntervalPartition(f.xs)
        G = build_covering_graph(f, P)
        words = [cw for cw in iter_cycle_words(G.adjacency(), T) if cw.is_primitive]
        certified = [cw for cw in words
                     if any(pp.minimal_period == T for pp in periodic_points_from_itinerary(f, P, cw.symbols, G))]
        assert T * len(certified) <= count_periodic_points(G.adjacency(), T)
