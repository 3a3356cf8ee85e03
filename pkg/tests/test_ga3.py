"""Geometric algebra of three-dimensional Euclidean space."""

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gashell import ga3
from gashell.ga3 import E1, E2, E3, I3, Multivector

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vec3 = st.tuples(finite, finite, finite).map(np.array)
mv8 = st.lists(finite, min_size=8, max_size=8).map(lambda c: Multivector(np.array(c)))


def _blade_table():
    """Product of basis blades from the orthonormal rules, built independently of ga3."""
    names = [(), (1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)]

    def mul(a, b):
        seq = list(a) + list(b)
        sign = 1
        # bubble sort counting swaps, then cancel e_k e_k = 1
        for i in range(len(seq)):
            for j in range(len(seq) - 1 - i):
                if seq[j] > seq[j + 1]:
                    seq[j], seq[j + 1] = seq[j + 1], seq[j]
                    sign = -sign
        out = []
        for k in seq:
            if out and out[-1] == k:
                out.pop()
            else:
                out.append(k)
        return sign, tuple(out)

    return names, mul


class TestProducts:
    def test_vector_square(self):
        assert (E1 * E1).isclose(Multivector.scalar(1.0))

    def test_unit_bivector_squares_to_minus_one(self):
        I = E1 ^ E2
        assert (I * I).isclose(Multivector.scalar(-1.0))

    def test_pseudoscalar_squares_to_minus_one(self):
        assert (I3 * I3).isclose(Multivector.scalar(-1.0))
        assert (E1 * E2 * E3).isclose(I3)

    @pytest.mark.parametrize("a,b", list(itertools.product(range(8), repeat=2)))
    def test_blade_products_match_table(self, a, b):
        names, mul = _blade_table()
        sign, blade = mul(names[a], names[b])
        x = Multivector(np.eye(8)[a]) * Multivector(np.eye(8)[b])
        expected = np.zeros(8)
        expected[names.index(blade)] = sign
        np.testing.assert_array_equal(x.coeffs, expected)

    @given(vec3, vec3)
    def test_symmetric_and_antisymmetric_parts(self, a, b):
        A, B = Multivector.vector(a), Multivector.vector(b)
        dot = 0.5 * (A * B + B * A)
        wedge = 0.5 * (A * B - B * A)
        assert dot.isclose(Multivector.scalar(a @ b), atol=1e-9)
        assert wedge.isclose(A ^ B, atol=1e-9)
        assert (A | B).isclose(dot, atol=1e-9)

    @given(mv8, mv8, mv8)
    def test_associative(self, a, b, c):
        np.testing.assert_allclose(((a * b) * c).coeffs, (a * (b * c)).coeffs, atol=1e-8)

    @given(vec3, vec3)
    def test_wedge_coeffs_match_outer_product(self, a, b):
        np.testing.assert_allclose(ga3.wedge_coeffs(a, b), ga3.wedge(a, b).bivector_part, atol=1e-12)

    def test_scalar_multiplication_and_reverse(self):
        x = Multivector(np.arange(8.0))
        assert (2.0 * x).isclose(x * 2.0)
        np.testing.assert_array_equal(x.reverse().coeffs, [0, 1, 2, 3, -4, -5, -6, -7])

    def test_rejects_non_multivector(self):
        with pytest.raises(TypeError):
            Multivector.zero() + "x"


class TestDual:
    def test_dual_of_e12_is_e3(self):
        assert ga3.dual(E1 ^ E2).isclose(E3)

    def test_dual_of_e3(self):
        assert ga3.dual(E3).isclose(-(E1 ^ E2))

    def test_dual_of_zero(self):
        assert ga3.dual(Multivector.zero()).isclose(Multivector.zero())


class TestCrossProduct:
    def test_right_handed(self):
        np.testing.assert_allclose(ga3.cross_product([1, 0, 0], [0, 1, 0]), [0, 0, 1])

    @given(vec3)
    def test_antisymmetry(self, a):
        np.testing.assert_allclose(ga3.cross_product(a, a), 0.0, atol=1e-12)

    def test_determinant_oracle(self):
        np.testing.assert_allclose(ga3.cross_product([1, 2, 0], [0, 1, 0]), [0, 0, 1])

    @given(vec3, vec3)
    def test_matches_numpy(self, a, b):
        np.testing.assert_allclose(ga3.cross_product(a, b), np.cross(a, b), atol=1e-9)


class _Frame:
    def __init__(self, basis):
        self.basis = np.asarray(basis, dtype=float)
        self.reciprocal = np.linalg.inv(self.basis).T


class TestBivectorComponents:
    def test_orthonormal_e12(self):
        frame = _Frame(np.eye(3))
        w = E1 ^ E2
        comps = ga3.bivector_components(w, frame)
        np.testing.assert_allclose(comps, [0.0, 0.0, -1.0])
        assert ga3.bivector_from_components(comps, frame).isclose(w)

    def test_zero(self):
        frame = _Frame(np.eye(3))
        np.testing.assert_array_equal(ga3.bivector_components(Multivector.zero(), frame), 0.0)

    def test_round_trip_in_skew_frames(self, rng):
        for _ in range(200):
            basis = rng.normal(size=(3, 3)) + 2.0 * np.eye(3)
            frame = _Frame(basis)
            w = Multivector.bivector(*rng.normal(size=3))
            low = ga3.bivector_components(w, frame)
            up = ga3.bivector_contravariant_components(w, frame)
            assert ga3.bivector_from_components(low, frame, upper=True).isclose(w, atol=1e-12)
            assert ga3.bivector_from_components(up, frame, upper=False).isclose(w, atol=1e-12)

    def test_bases_are_reciprocal(self, rng):
        basis = rng.normal(size=(3, 3)) + 2.0 * np.eye(3)
        frame = _Frame(basis)
        lower, upper = ga3.bivector_basis(frame.basis, frame.reciprocal)
        np.testing.assert_allclose(ga3.bivector_dot(upper[:, None, :], lower[None, :, :]), np.eye(3), atol=1e-12)

    @given(vec3, vec3)
    def test_bivector_dot_is_scalar_product(self, p, q):
        P, Q = Multivector.bivector(*p), Multivector.bivector(*q)
        assert ga3.bivector_dot(p, q) == pytest.approx(ga3.scalar_product(P, Q), abs=1e-9)
