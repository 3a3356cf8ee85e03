"""Frames, metric, curvature and Christoffel coefficients of parametrised surfaces."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gashell import ga3
from gashell.errors import DegenerateFrame, OutOfDomain
from gashell.fields import AnalyticField
from gashell.surface import (
    DEFAULT_POLICY,
    Chart,
    bivector_christoffel_table,
    christoffels,
    cylinder,
    frames_at,
    plane,
    second_fundamental_form,
    sphere,
)

SKEW = Chart.from_field(
    "skew",
    AnalyticField.monomial([1.0, 0.0, 0.0], p1=1)
    + AnalyticField.monomial([0.4, 1.0, 0.0], p2=1)
    + AnalyticField.monomial([0.0, 0.0, 0.2], p1=2)
    + AnalyticField.monomial([0.0, 0.0, 0.15], p1=1, p2=1)
    + AnalyticField.sine([0.0, 0.0, 0.1], k2=1.0),
)
CHARTS = [
    ("plane", plane()),
    ("skew graph", SKEW),
    ("cylinder R=0.5", cylinder(0.5)),
    ("cylinder R=2", cylinder(2.0)),
    ("sphere R=1", sphere(1.0)),
    ("sphere R=3", sphere(3.0)),
]
coord = st.floats(-1.5, 1.5, allow_nan=False)
colat = st.floats(0.2, math.pi - 0.2, allow_nan=False)


def fd_frame(chart, u, h=1e-5):
    """Unit normal and tangent frame by central differences of the position map only."""
    u = np.asarray(u, dtype=float)
    d = [(chart.position(u + h * e) - chart.position(u - h * e)) / (2 * h) for e in np.eye(2)]
    n = np.cross(d[0], d[1])
    return np.array(d), n / np.linalg.norm(n)


def fd_second_form(chart, u, h=1e-4):
    """B_ij = -E_i . d_j N with N differentiated numerically."""
    E, _ = fd_frame(chart, u)
    B = np.empty((2, 2))
    for j, e in enumerate(np.eye(2)):
        dN = (fd_frame(chart, u + h * e)[1] - fd_frame(chart, u - h * e)[1]) / (2 * h)
        B[:, j] = -E @ dN
    return B


def _point(name):
    return np.array([1.1, 0.4]) if name.startswith("sphere") else np.array([0.3, -0.7])


class TestFrames:
    def test_plane_is_orthonormal(self):
        f = frames_at(plane(), (0.4, -1.2))
        np.testing.assert_allclose(f.basis, np.eye(3), atol=1e-15)
        assert f.volume == pytest.approx(1.0)

    @given(coord, st.floats(-6, 6, allow_nan=False))
    def test_cylinder_arc_length_metric(self, x1, x2):
        f = frames_at(cylinder(2.0), (x1, x2))
        np.testing.assert_allclose(f.metric, np.eye(2), atol=1e-12)
        assert f.volume == pytest.approx(1.0)

    def test_sphere_metric(self):
        R, th = 1.0, math.pi / 3
        f = frames_at(sphere(R), (th, 0.8))
        np.testing.assert_allclose(f.metric, np.diag([R**2, (R * math.sin(th)) ** 2]), atol=1e-12)
        assert np.linalg.det(f.metric) == pytest.approx(f.volume**2, abs=1e-10)

    @pytest.mark.parametrize("name,chart", CHARTS)
    def test_reciprocal_frame(self, name, chart):
        f = frames_at(chart, _point(name))
        np.testing.assert_allclose(f.reciprocal @ f.basis.T, np.eye(3), atol=1e-12)

    @pytest.mark.parametrize("name,chart", CHARTS)
    def test_normal_matches_dual_of_pseudoscalar(self, name, chart):
        f = frames_at(chart, _point(name))
        np.testing.assert_allclose(ga3.dual(f.pseudoscalar).vector_part, f.normal, atol=1e-12)

    @pytest.mark.parametrize("name,chart", CHARTS)
    def test_exact_matches_independent_differences(self, name, chart):
        u = _point(name)
        f = frames_at(chart, u)
        E, N = fd_frame(chart, u)
        np.testing.assert_allclose(f.basis[:2], E, atol=1e-8)
        np.testing.assert_allclose(f.normal, N, atol=1e-8)


class TestSecondFundamentalForm:
    def test_plane_is_flat(self):
        B, c1, c2 = second_fundamental_form(plane(), (0.3, 0.2))
        np.testing.assert_array_equal(B, 0.0)
        assert (c1, c2) == (0.0, 0.0)

    def test_cylinder_curvatures(self):
        chart = cylinder(2.0)
        u = np.array([0.2, 0.9])
        _, c1, c2 = second_fundamental_form(chart, u)
        np.testing.assert_allclose([c1, c2], [0.0, 0.5], atol=1e-12)
        np.testing.assert_allclose(fd_second_form(chart, u), np.diag([0.0, 0.5]), atol=1e-6)

    @pytest.mark.parametrize("R", [0.5, 2.0, 3.0])
    def test_sphere_curvatures(self, R):
        chart = sphere(R)
        u = np.array([1.0, 0.3])
        f = frames_at(chart, u)
        np.testing.assert_allclose(np.abs(f.curvatures), [1.0 / R, 1.0 / R], atol=1e-10)
        assert f.curvatures[0] == pytest.approx(f.curvatures[1], abs=1e-10)
        B_fd = fd_second_form(chart, u)
        np.testing.assert_allclose(f.second_form, B_fd, atol=1e-5 * max(1.0, R))

    @pytest.mark.parametrize("name,chart", CHARTS)
    def test_numeric_policy_agrees(self, name, chart):
        u = _point(name)
        exact = frames_at(chart, u)
        num = frames_at(chart, u, DEFAULT_POLICY.numeric())
        np.testing.assert_allclose(num.second_form, exact.second_form, atol=1e-6)
        np.testing.assert_allclose(num.christoffel, exact.christoffel, atol=1e-6)


class TestChristoffels:
    def test_plane_vanishes(self):
        g, gb = christoffels(plane(), (0.1, 0.2))
        np.testing.assert_array_equal(g, 0.0)
        np.testing.assert_array_equal(gb, 0.0)

    @pytest.mark.parametrize("R", [0.5, 2.0])
    def test_cylinder_values(self, R):
        g, _ = christoffels(cylinder(R), (0.4, 1.3))
        np.testing.assert_allclose(g[:2, :, :2], 0.0, atol=1e-14)
        assert g[2, 1, 1] == pytest.approx(1.0 / R)  # Gamma^3_22
        assert g[1, 1, 2] == pytest.approx(-1.0 / R)  # Gamma^2_23
        expected = np.zeros((3, 2, 3))
        expected[2, 1, 1] = 1.0 / R
        expected[1, 1, 2] = -1.0 / R
        np.testing.assert_allclose(g, expected, atol=1e-14)

    @pytest.mark.parametrize("name,chart", CHARTS)
    def test_bivector_christoffel_by_differentiation(self, name, chart):
        # e^A . d_i e_B with the bivector basis field differenced in X^i
        u = _point(name)
        f = frames_at(chart, u)
        h = 1e-3

        def lower(p):
            return frames_at(chart, p).bivector_bases()[0]

        _, upper = f.bivector_bases()
        for i, e in enumerate(np.eye(2)):
            dlow = (8 * (lower(u + h * e) - lower(u - h * e)) - (lower(u + 2 * h * e) - lower(u - 2 * h * e))) / (12 * h)
            gb = ga3.bivector_dot(upper[:, None, :], dlow[None, :, :])
            np.testing.assert_allclose(f.bivector_christoffel[:, i, :], gb, atol=1e-8)

    @pytest.mark.parametrize("name,chart", CHARTS)
    def test_bivector_diagonal_entry(self, name, chart):
        f = frames_at(chart, _point(name))
        g, gb = f.christoffel, f.bivector_christoffel
        np.testing.assert_allclose(gb[0, :, 0], g[0, :, 0] + g[2, :, 2], atol=1e-12)

    @pytest.mark.parametrize("name,chart", CHARTS)
    def test_relations_at_random_points(self, name, chart, rng):
        (a1, b1), (a2, b2) = chart.domain
        lo = np.array([max(a1, -2.0) + 0.1, max(a2, -2.0) + 0.1])
        hi = np.array([min(b1, 2.0) - 0.1, min(b2, 2.0) - 0.1])
        for u in lo + (hi - lo) * rng.random((100, 2)):
            f = frames_at(chart, u)
            g = f.christoffel
            assert abs(np.linalg.det(f.metric) - f.volume**2) <= 1e-10 * max(1.0, f.volume**2)
            np.testing.assert_allclose(f.bivector_christoffel, bivector_christoffel_table(f), atol=1e-10)
            np.testing.assert_allclose(g[2, :, :2], f.second_form, atol=1e-10)
            np.testing.assert_allclose(g[:2, :, 2], -f.shape_operator, atol=1e-10)
            np.testing.assert_allclose(g[2, :, 2], 0.0, atol=1e-12)


class TestFailures:
    def test_degenerate_frame(self):
        collapsed = AnalyticField.monomial([1.0, 0.0, 0.0], p1=1) + AnalyticField.monomial([2.0, 0.0, 0.0], p2=1)
        with pytest.raises(DegenerateFrame):
            frames_at(Chart.from_field("collapsed", collapsed), (0.0, 0.0))

    def test_sphere_pole_is_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            frames_at(sphere(1.0), (0.0, 0.0))

    def test_invalid_radius(self):
        with pytest.raises(ValueError):
            cylinder(-1.0)
