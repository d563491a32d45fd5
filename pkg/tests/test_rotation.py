import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from forcing_lab.errors import IndeterminateBoundary, InputError
from forcing_lab.rotation import (
    Box,
    EmpiricalMeasure,
    HShear,
    RotationPolygon,
    TorusLift,
    Translation,
    VShear,
    boundary_diagnostic,
    check_homogeneity,
    degree_on_box,
    deviation_profile,
    displacement,
    find_periodic,
    hausdorff,
    measure_rotation,
    rotation_set_estimate,
)

PHI = (1 + math.sqrt(5)) / 2
COSINE = TorusLift((HShear("raised-cosine", 1.0),))
COUPLED = TorusLift((HShear("sine", 0.4), VShear("sine", 0.4)))


def primitives():
    amp = st.floats(-0.6, 0.6, allow_nan=False)
    prof = st.sampled_from(["sine", "raised-cosine"])
    vec = st.tuples(st.floats(-2, 2, allow_nan=False), st.floats(-2, 2, allow_nan=False))
    return st.one_of(vec.map(Translation), st.builds(HShear, prof, amp), st.builds(VShear, prof, amp))


lifts = st.lists(primitives(), min_size=1, max_size=4).map(lambda c: TorusLift(tuple(c)))


class TestLift:
    @given(lifts, st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=1, max_size=10),
           st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
    def test_equivariance(self, g, zs, v):
        Z = np.array(zs)
        assert np.allclose(g(Z + np.array(v)) - g(Z), np.array(v, dtype=float), atol=1e-12, rtol=0)

    def test_bad_frame(self):
        with pytest.raises(InputError):
            TorusLift((), ((2, 0), (0, 1)))

    def test_translation_displacement(self):
        g = TorusLift.translation((0.5, 1 / 3))
        for n in (1, 7, 100):
            assert np.allclose(displacement(g, np.array([0.3, 0.9]), n), [0.5, 1 / 3], atol=1e-12)

    def test_raised_cosine_displacement(self):
        for n in (1, 10, 99):
            assert np.allclose(displacement(COSINE, np.array([0.0, 0.5]), n), [1.0, 0.0], atol=1e-12)
            assert np.allclose(displacement(COSINE, np.array([0.0, 0.0]), n), [0.0, 0.0], atol=1e-12)

    def test_n_must_be_positive(self):
        with pytest.raises(InputError):
            displacement(COSINE, np.zeros(2), 0)


class TestRotationSet:
    def test_translation_singleton(self):
        P = rotation_set_estimate(TorusLift.translation((0.5, 1 / 3)), 8, 2, 8)
        assert P.kind == "point"
        assert np.allclose(P.vertices[0], [0.5, 1 / 3], atol=1e-12)

    def test_raised_cosine_segment(self):
        P = rotation_set_estimate(COSINE, 64, 8, 32)
        assert hausdorff(P, RotationPolygon([[0, 0], [1, 0]])) <= 1e-2

    def test_coupled_shear_has_interior(self):
        P = rotation_set_estimate(COUPLED, 48, 32, 96)
        assert P.kind == "polygon" and P.area > 0
        res = find_periodic(COUPLED, (0, 0), 1, Box(-0.1, 0.1, -0.1, 0.1))
        assert res.success
        # (0, 0) is realised by a fixed point; the estimate holds a disk around it
        assert P.contains([0.0, 0.0])
        inner = min(np.hypot(*v) for v in P.boundary_samples())
        assert inner > 0.05

    def test_budgets_recorded(self):
        P = rotation_set_estimate(COSINE, 8, 1, 4)
        assert P.meta["grid"] == 8 and P.meta["N"] == 1 and P.meta["n"] == 4

    @pytest.mark.parametrize("m,N,n", [(1, 0, 2), (4, 3, 3), (4, -1, 2)])
    def test_bad_budgets(self, m, N, n):
        with pytest.raises(InputError):
            rotation_set_estimate(COSINE, m, N, n)

    def test_homogeneity(self):
        g = TorusLift.translation((0.25, -0.5))
        assert check_homogeneity(g, 3, 8, 2, 8) <= 1e-12
        assert check_homogeneity(COUPLED, 1, 8, 2, 8) == 0.0
        assert check_homogeneity(COSINE, 2, 32, 8, 32) <= 1e-2

    @pytest.mark.parametrize("v", [(1, 0), (-2, 3)])
    def test_lift_change_covariance(self, v):
        base = rotation_set_estimate(COUPLED, 16, 8, 24)
        moved = rotation_set_estimate(COUPLED.then(TorusLift.translation(v)), 16, 8, 24)
        assert hausdorff(moved, base.translated(v)) <= 1e-9

    def test_conjugacy(self):
        M = [[1, 1], [0, 1]]
        base = rotation_set_estimate(COUPLED, 16, 8, 24)
        conj = rotation_set_estimate(COUPLED.conjugate(M), 16, 8, 24)
        assert hausdorff(conj, base.transformed(M)) <= 1e-6


class TestDegree:
    def test_translation_has_degree_zero(self):
        g = TorusLift.translation((0.3, 0.0))
        assert degree_on_box(g, 1, (0, 0), Box(-0.4, 0.7, 0.1, 0.5)).degree == 0

    def test_coupled_shear_fixed_point(self):
        cert = degree_on_box(COUPLED, 1, (0, 0), Box(-0.1, 0.1, -0.1, 0.1))
        assert cert.degree != 0 and cert.min_norm > cert.threshold

    def test_identity_with_shift(self):
        assert degree_on_box(TorusLift.identity(), 1, (1, 0), Box(0, 1, 0, 1)).degree == 0

    def test_vanishing_boundary(self):
        with pytest.raises(IndeterminateBoundary):
            degree_on_box(COUPLED, 1, (0, 0), Box(0.0, 0.1, -0.1, 0.1))

    def test_find_periodic_examples(self):
        half = TorusLift.translation((0.5, 0.0))
        res = find_periodic(half, (1, 0), 2, Box(-0.1, 0.1, -0.1, 0.1))
        assert res.success and res.residual < 1e-12
        res = find_periodic(COUPLED, (0, 0), 1, Box(-0.13, 0.11, -0.07, 0.09))
        assert res.success and res.residual < 1e-8 and np.hypot(*res.z) < 1e-6
        res = find_periodic(half, (0, 1), 1, Box(-0.1, 0.1, -0.1, 0.1))
        assert not res.success and set(res.degrees) == {0}

    @given(st.floats(0.05, 0.45), st.floats(0.05, 0.45), st.floats(0.01, 0.04))
    def test_nonvanishing_box_has_degree_zero(self, cx, cy, r):
        # Lipschitz bound of z -> g(z) - z for the coupled shear (max norm)
        lip = (1 + 2 * math.pi * 0.4) ** 2 + 1
        box = Box(cx - r, cx + r, cy - r, cy + r)
        k = 41
        xs, ys = np.meshgrid(np.linspace(box.x0, box.x1, k), np.linspace(box.y0, box.y1, k))
        Z = np.column_stack([xs.ravel(), ys.ravel()])
        F = COUPLED(Z) - Z
        h = 2 * r / (k - 1)
        if np.abs(F).max(axis=1).min() > lip * h / 2:
            assert degree_on_box(COUPLED, 1, (0, 0), box).degree == 0

    def test_soundness(self):
        box = Box(-0.1, 0.1, -0.1, 0.1)
        if degree_on_box(COUPLED, 1, (0, 0), box).degree != 0:
            res = find_periodic(COUPLED, (0, 0), 1, box)
            if res.success:
                assert np.hypot(*(COUPLED(np.array(res.z)) - np.array(res.z))) < 1e-8


class TestProfilesAndMeasures:
    def test_deviation_zero_for_translation_and_cosine(self):
        g = TorusLift.translation((0.5, 1 / 3))
        rho = rotation_set_estimate(g, 8, 1, 4)
        assert all(d <= 1e-12 for _, d in deviation_profile(g, rho, 8, [1, 4, 16]))
        seg = RotationPolygon([[0, 0], [1, 0]])
        assert all(d <= 1e-12 for _, d in deviation_profile(COSINE, seg, 16, [2, 8, 32]))

    def test_deviation_needs_increasing_n(self):
        with pytest.raises(InputError):
            deviation_profile(COSINE, RotationPolygon([[0, 0]]), 4, [4, 2])

    def test_measure_rotation(self):
        v = np.array([0.25, -0.125])
        mu = EmpiricalMeasure([[0.1, 0.2], [0.7, 0.3]], [0.5, 0.5])
        assert np.allclose(measure_rotation(TorusLift.translation(v), mu), v, atol=1e-12)
        assert np.allclose(measure_rotation(COSINE, EmpiricalMeasure.uniform_grid(32)), [0.5, 0.0], atol=1e-6)
        assert np.allclose(measure_rotation(COUPLED, EmpiricalMeasure.point_mass([0, 0])), [0, 0], atol=1e-15)

    def test_measure_normalisation(self):
        with pytest.raises(InputError):
            EmpiricalMeasure([[0, 0], [0.5, 0.5]], [0.5, 0.6])

    def test_boundary_diagnostic(self):
        square = RotationPolygon([[0, 0], [1, 0], [1, 1], [0, 1]])
        assert boundary_diagnostic(square, 10) == []
        assert boundary_diagnostic(RotationPolygon([[0.2, 0.3]]), 10) == []
        assert boundary_diagnostic(RotationPolygon([[0, 0], [1, 1 / PHI]]), 50) == []
        flags = boundary_diagnostic(RotationPolygon([[-1, -1 / PHI], [1, 1 / PHI]]), 50)
        assert len(flags) == 1 and flags[0].rational_point == ("0", "0")
