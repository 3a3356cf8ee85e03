"""Geometric algebra of Euclidean 3-space.

A multivector is stored as eight dense coefficients over the blade basis

    1, e1, e2, e3, e1^e2, e1^e3, e2^e3, e1^e2^e3

of a fixed orthonormal ambient frame.  The product tables are generated once
from bitmask blade labels, so the whole algebra is three small arrays.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass

import numpy as np

# blade bitmasks in storage order: bit0=e1, bit1=e2, bit2=e3
_MASKS = (0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111)
_INDEX = {m: k for k, m in enumerate(_MASKS)}
GRADES = np.array([bin(m).count("1") for m in _MASKS])

BIVECTOR_SLICE = slice(4, 7)  # e12, e13, e23


def _reorder_sign(a: int, b: int) -> int:
    # number of transpositions to bring blade a*b to canonical order
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def _build_tables():
    gp = np.zeros((8, 8, 8))
    outer = np.zeros((8, 8, 8))
    inner = np.zeros((8, 8, 8))
    for i, ma in enumerate(_MASKS):
        for j, mb in enumerate(_MASKS):
            k = _INDEX[ma ^ mb]
            s = _reorder_sign(ma, mb)
            gp[i, j, k] = s
            ga, gb, gk = GRADES[i], GRADES[j], GRADES[k]
            if gk == ga + gb:
                outer[i, j, k] = s
            # Hestenes inner product: scalars do not participate
            if ga and gb and gk == abs(int(ga) - int(gb)):
                inner[i, j, k] = s
    return gp, outer, inner


_GP, _OUTER, _INNER = _build_tables()


@dataclass(frozen=True, eq=False)
class Multivector:
    """Immutable element of G(3)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).reshape(8).copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls) -> Multivector:
        return cls(np.zeros(8))

    @classmethod
    def scalar(cls, s: float) -> Multivector:
        c = np.zeros(8)
        c[0] = s
        return cls(c)

    @classmethod
    def vector(cls, v) -> Multivector:
        c = np.zeros(8)
        c[1:4] = v
        return cls(c)

    @classmethod
    def bivector(cls, e12: float = 0.0, e13: float = 0.0, e23: float = 0.0) -> Multivector:
        c = np.zeros(8)
        c[4:7] = (e12, e13, e23)
        return cls(c)

    @classmethod
    def pseudoscalar(cls, s: float = 1.0) -> Multivector:
        c = np.zeros(8)
        c[7] = s
        return cls(c)

    # access ---------------------------------------------------------------
    def grade(self, r: int) -> Multivector:
        return Multivector(np.where(GRADES == r, self.coeffs, 0.0))

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    @property
    def vector_part(self) -> np.ndarray:
        return np.array(self.coeffs[1:4])

    @property
    def bivector_part(self) -> np.ndarray:
        """Coefficients of (e1^e2, e1^e3, e2^e3)."""
        return np.array(self.coeffs[BIVECTOR_SLICE])

    # algebra ---------------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        return Multivector(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Multivector(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Multivector(-self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.coeffs * other)
        return geometric_product(self, other)

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.coeffs * other)
        return geometric_product(_coerce(other), self)

    def __truediv__(self, s: float):
        return Multivector(self.coeffs / s)

    def __xor__(self, other):
        return outer_product(self, other)

    def __or__(self, other):
        return inner_product(self, other)

    def reverse(self) -> Multivector:
        sign = np.array([1, 1, 1, 1, -1, -1, -1, -1], dtype=float)
        return Multivector(self.coeffs * sign)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs**2)))

    def isclose(self, other, atol: float = 1e-12) -> bool:
        other = _coerce(other)
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= atol))

    def __repr__(self):
        names = ("1", "e1", "e2", "e3", "e12", "e13", "e23", "e123")
        terms = [f"{c:+.6g}*{n}" for c, n in zip(self.coeffs, names) if c != 0.0]
        return "Multivector(" + (" ".join(terms) if terms else "0") + ")"


def _coerce(x) -> Multivector:
    if isinstance(x, Multivector):
        return x
    if isinstance(x, numbers.Real):
        return Multivector.scalar(float(x))
    raise TypeError(f"cannot treat {type(x).__name__} as a multivector")


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return Multivector(np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, _GP))


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    return Multivector(np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, _OUTER))


def inner_product(a: Multivector, b: Multivector) -> Multivector:
    return Multivector(np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, _INNER))


def scalar_product(a: Multivector, b: Multivector) -> float:
    """Grade-0 part of ab; equals a.b for blades of equal grade."""
    return float(np.einsum("i,j,ij->", a.coeffs, b.coeffs, _GP[:, :, 0]))


I3 = Multivector.pseudoscalar()
E1 = Multivector.vector((1.0, 0.0, 0.0))
E2 = Multivector.vector((0.0, 1.0, 0.0))
E3 = Multivector.vector((0.0, 0.0, 1.0))


def dual(a: Multivector) -> Multivector:
    """Multiply by -I3 on the left (maps e1^e2 to e3)."""
    return geometric_product(-I3, a)


def wedge(a, b) -> Multivector:
    """Outer product of two plain 3-vectors."""
    return outer_product(Multivector.vector(a), Multivector.vector(b))


def cross_product(a, b) -> np.ndarray:
    """a x b = -I3 (a ^ b), for array-like 3-vectors."""
    return dual(wedge(a, b)).vector_part


def wedge_coeffs(a, b) -> np.ndarray:
    """(e12, e13, e23) coefficients of a ^ b, vectorised over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.stack(
        [
            a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0],
            a[..., 0] * b[..., 2] - a[..., 2] * b[..., 0],
            a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1],
        ],
        axis=-1,
    )


def bivector_dot(p, q) -> np.ndarray:
    """Scalar product of bivectors given as (e12, e13, e23) coefficient arrays.

    Every unit basis bivector squares to -1, so p.q = -(p12 q12 + p13 q13 + p23 q23).
    """
    return -np.sum(np.asarray(p) * np.asarray(q), axis=-1)


def bivector_basis(frame_vectors, reciprocal_vectors):
    """Frame and reciprocal bivector bases, ordered ((1,3), (2,3), (1,2)).

    ``frame_vectors[a]`` is e_a and ``reciprocal_vectors[a]`` is e^a, both
    as ambient 3-vectors.  Returns two (3, 3) arrays of bivector
    coefficients: e_(1,3) = e1^e3, e_(2,3) = e2^e3, e_(1,2) = e1^e2 and
    e^(1,3) = e^3^e^1, e^(2,3) = e^3^e^2, e^(1,2) = e^2^e^1.
    """
    e = np.asarray(frame_vectors, dtype=float)
    r = np.asarray(reciprocal_vectors, dtype=float)
    lower = np.stack([wedge_coeffs(e[0], e[2]), wedge_coeffs(e[1], e[2]), wedge_coeffs(e[0], e[1])])
    upper = np.stack([wedge_coeffs(r[2], r[0]), wedge_coeffs(r[2], r[1]), wedge_coeffs(r[1], r[0])])
    return lower, upper


def bivector_components(omega: Multivector, frame) -> np.ndarray:
    """Covariant components (w_(1,3), w_(2,3), w_(1,2)) with w_A = w . e_A.

    ``frame`` is anything exposing ``basis`` (rows e_a) and ``reciprocal``
    (rows e^a), e.g. a :class:`gashell.surface.SurfaceFrame`.  The bivector
    is recovered as ``sum_A w_A e^A``; see :func:`bivector_from_components`.
    """
    lower, _ = bivector_basis(frame.basis, frame.reciprocal)
    return bivector_dot(omega.bivector_part, lower)


def bivector_contravariant_components(omega: Multivector, frame) -> np.ndarray:
    """Contravariant components w^A = w . e^A."""
    _, upper = bivector_basis(frame.basis, frame.reciprocal)
    return bivector_dot(omega.bivector_part, upper)


def bivector_from_components(components, frame, upper: bool = True) -> Multivector:
    """Rebuild w = w_A e^A (``upper=True``) or w = w^A e_A."""
    lower_basis, upper_basis = bivector_basis(frame.basis, frame.reciprocal)
    basis = upper_basis if upper else lower_basis
    c = np.asarray(components, dtype=float) @ basis
    return Multivector.bivector(*c)
