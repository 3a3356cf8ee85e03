"""Analytic poly-trig fields and their exact derivatives."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gashell.fields import AnalyticField, cross, dot, from_table

coord = st.floats(-2, 2, allow_nan=False)


def _sample_field():
    return (
        AnalyticField.monomial([1.0, -2.0, 0.5], p1=2, p2=1)
        + AnalyticField.cosine([0.3, 0.1, -0.2], k1=0.7, k2=-1.1, w=0.4, phase=0.2)
        + AnalyticField.sine([0.0, 1.0, 2.0], k2=1.3, powers=(1, 0, 1))
    )


class TestEvaluation:
    def test_monomial(self):
        f = AnalyticField.monomial(3.0, p1=2, p2=1, r=1)
        assert f(2.0, 0.5, 3.0) == pytest.approx(3.0 * 4.0 * 0.5 * 3.0)

    def test_sine_cosine(self):
        assert AnalyticField.sine(2.0, k1=1.0)(0.3, 0.0) == pytest.approx(2.0 * math.sin(0.3))
        assert AnalyticField.cosine(1.0, k2=2.0, phase=0.1)(0.0, 0.4) == pytest.approx(math.cos(0.9))

    def test_zero_field(self):
        z = AnalyticField.zeros((3,))
        assert z.nterms == 0
        np.testing.assert_array_equal(z(0.2, 0.1), np.zeros(3))

    def test_vectorised(self):
        f = _sample_field()
        xs = np.linspace(-1, 1, 5)
        vals = f(xs, 0.3, 0.1)
        assert vals.shape == (5, 3)
        np.testing.assert_allclose(vals[2], f(xs[2], 0.3, 0.1))

    def test_duplicate_terms_merge(self):
        f = AnalyticField.monomial(1.0, p1=1) + AnalyticField.monomial(2.0, p1=1)
        assert f.nterms == 1
        assert (f - f).nterms == 0


class TestCalculus:
    @given(coord, coord, coord)
    def test_first_derivatives_match_differences(self, x1, x2, t):
        f = _sample_field()
        h = 1e-5
        for k, d in enumerate([(1, 0, 0), (0, 1, 0), (0, 0, 1)]):
            e = h * np.eye(3)[k]
            fd = (f(x1 + e[0], x2 + e[1], t + e[2]) - f(x1 - e[0], x2 - e[1], t - e[2])) / (2 * h)
            np.testing.assert_allclose(f.diff(*d)(x1, x2, t), fd, atol=1e-7)

    def test_mixed_partials_commute(self):
        f = _sample_field()
        a = f.diff(1, 0).diff(0, 1)(0.3, -0.2, 0.5)
        np.testing.assert_allclose(f.diff(1, 1)(0.3, -0.2, 0.5), a, atol=1e-14)

    def test_second_derivative_of_sine(self):
        f = AnalyticField.sine(1.0, k1=2.0)
        assert f.diff(2, 0)(0.4, 0.0) == pytest.approx(-4.0 * math.sin(0.8))

    def test_time_independence(self):
        assert AnalyticField.sine(1.0, k1=2.0).is_time_independent()
        assert not AnalyticField.sine(1.0, w=2.0).is_time_independent()


class TestAlgebra:
    def test_product_of_trig(self):
        f = AnalyticField.sine(1.0, k1=1.0) * AnalyticField.cosine(1.0, k2=1.0)
        assert f(0.3, 0.7) == pytest.approx(math.sin(0.3) * math.cos(0.7))

    def test_dot_and_cross(self):
        a, b = _sample_field(), AnalyticField.cosine([1.0, 0.5, -0.3], k1=0.4)
        p = (0.2, -0.7, 0.3)
        assert dot(a, b)(*p) == pytest.approx(a(*p) @ b(*p))
        np.testing.assert_allclose(cross(a, b)(*p), np.cross(a(*p), b(*p)), atol=1e-12)

    def test_stack_and_index(self):
        s = AnalyticField.stack([AnalyticField.sine(1.0, k1=1.0), AnalyticField.monomial(2.0, p2=1)])
        np.testing.assert_allclose(s(0.5, 3.0), [math.sin(0.5), 6.0])
        assert s[1](0.5, 3.0) == pytest.approx(6.0)

    def test_linear_map(self):
        f = _sample_field()
        A = np.arange(9.0).reshape(3, 3)
        np.testing.assert_allclose(f.linear_map(A)(0.1, 0.2), A @ f(0.1, 0.2))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            AnalyticField.monomial([1.0, 0.0]) + AnalyticField.monomial([1.0, 0.0, 0.0])


class TestFromTable:
    def test_records(self):
        f = from_table(
            [{"coef": [0, 0, 1], "powers": [2, 0, 0]}, {"coef": [1, 0, 0], "freqs": [0, 1, 0], "kind": "sin"}],
            (3,),
        )
        np.testing.assert_allclose(f(2.0, 0.5), [math.sin(0.5), 0.0, 4.0])
