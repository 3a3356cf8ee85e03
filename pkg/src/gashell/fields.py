"""Closed-form fields over (X1, X2, t) with exact derivatives of any order.

Each field is a finite sum of terms

    c * X1**p1 * X2**p2 * t**r * cos(k1*X1 + k2*X2 + w*t + phase)

with vector-valued coefficients ``c``.  The family is closed under partial
differentiation and under products (product-to-sum), which covers planes,
cylinders, spheres, rigid rotations and the polynomial/trigonometric
displacement tables accepted by the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TWO_PI = 2.0 * math.pi
_KEY_DIGITS = 12


def _canonical(powers, freqs, phase):
    freqs = np.array(freqs, dtype=float)
    phase = float(phase)
    nz = np.flatnonzero(np.abs(freqs) > 0.0)
    if nz.size and freqs[nz[0]] < 0.0:
        # cos(-x) = cos(x)
        freqs = -freqs
        phase = -phase
    phase = math.remainder(phase, _TWO_PI)
    return tuple(int(p) for p in powers), freqs, phase


@dataclass(frozen=True, eq=False)
class AnalyticField:
    """Sum of polynomial-times-cosine terms with coefficient shape ``shape``."""

    coefs: np.ndarray  # (n, *shape)
    powers: np.ndarray  # (n, 3) ints
    freqs: np.ndarray  # (n, 3)
    phases: np.ndarray  # (n,)

    def __post_init__(self):
        for name in ("coefs", "powers", "freqs", "phases"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "_cache", {})

    # construction -----------------------------------------------------------
    @classmethod
    def from_terms(cls, terms, shape=()) -> AnalyticField:
        """Build from ``(coef, (p1, p2, r), (k1, k2, w), phase)`` tuples, merging duplicates."""
        merged: dict = {}
        for coef, powers, freqs, phase in terms:
            coef = np.broadcast_to(np.asarray(coef, dtype=float), shape).copy()
            powers, freqs, phase = _canonical(powers, freqs, phase)
            if not np.any(freqs):
                # constant-argument cosine folds into the coefficient
                coef = coef * math.cos(phase)
                phase = 0.0
            key = (powers, tuple(np.round(freqs, _KEY_DIGITS)), round(phase, _KEY_DIGITS))
            if key in merged:
                merged[key][0] += coef
            else:
                merged[key] = [coef, powers, freqs, phase]
        items = [v for v in merged.values() if np.any(np.abs(v[0]) > 0.0)]
        if not items:
            return cls.zeros(shape)
        return cls(
            coefs=np.stack([v[0] for v in items]),
            powers=np.array([v[1] for v in items], dtype=int),
            freqs=np.array([v[2] for v in items], dtype=float),
            phases=np.array([v[3] for v in items], dtype=float),
        )

    @classmethod
    def zeros(cls, shape=()) -> AnalyticField:
        return cls(
            coefs=np.zeros((0, *shape)),
            powers=np.zeros((0, 3), dtype=int),
            freqs=np.zeros((0, 3)),
            phases=np.zeros(0),
        )

    @classmethod
    def constant(cls, value) -> AnalyticField:
        value = np.asarray(value, dtype=float)
        return cls.from_terms([(value, (0, 0, 0), (0, 0, 0), 0.0)], value.shape)

    @classmethod
    def monomial(cls, coef, p1=0, p2=0, r=0) -> AnalyticField:
        coef = np.asarray(coef, dtype=float)
        return cls.from_terms([(coef, (p1, p2, r), (0, 0, 0), 0.0)], coef.shape)

    @classmethod
    def cosine(cls, coef, k1=0.0, k2=0.0, w=0.0, phase=0.0, powers=(0, 0, 0)) -> AnalyticField:
        coef = np.asarray(coef, dtype=float)
        return cls.from_terms([(coef, powers, (k1, k2, w), phase)], coef.shape)

    @classmethod
    def sine(cls, coef, k1=0.0, k2=0.0, w=0.0, phase=0.0, powers=(0, 0, 0)) -> AnalyticField:
        return cls.cosine(coef, k1, k2, w, phase - 0.5 * math.pi, powers)

    @classmethod
    def stack(cls, components) -> AnalyticField:
        """Stack scalar fields into a vector field."""
        d = len(components)
        terms = []
        for k, comp in enumerate(components):
            if comp.shape != ():
                raise ValueError("stack expects scalar fields")
            for c, p, f, ph in comp.terms():
                v = np.zeros(d)
                v[k] = c
                terms.append((v, p, f, ph))
        return cls.from_terms(terms, (d,))

    # inspection -----------------------------------------------------------
    @property
    def shape(self) -> tuple:
        return tuple(self.coefs.shape[1:])

    @property
    def nterms(self) -> int:
        return self.coefs.shape[0]

    def terms(self):
        for n in range(self.nterms):
            yield self.coefs[n], tuple(self.powers[n]), tuple(self.freqs[n]), float(self.phases[n])

    def is_time_independent(self) -> bool:
        return not (np.any(self.powers[:, 2]) or np.any(self.freqs[:, 2]))

    def __getitem__(self, idx) -> AnalyticField:
        return AnalyticField.from_terms(
            [(c[idx], p, f, ph) for c, p, f, ph in self.terms()],
            np.empty(self.shape)[idx].shape,
        )

    # evaluation -----------------------------------------------------------
    def __call__(self, x1, x2, t=0.0):
        x1, x2, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x1, x2, t)))
        if self.nterms == 0:
            return np.zeros(x1.shape + self.shape)
        pts = np.stack([x1, x2, t], axis=-1)[..., None, :]  # (..., 1, 3)
        mono = np.prod(pts ** self.powers, axis=-1)  # (..., n)
        arg = np.sum(pts * self.freqs, axis=-1) + self.phases
        weights = mono * np.cos(arg)
        return np.tensordot(weights, self.coefs, axes=([-1], [0]))

    # calculus -------------------------------------------------------------
    def diff(self, d1: int = 0, d2: int = 0, dt: int = 0) -> AnalyticField:
        """Partial derivative of order (d1, d2, dt) in (X1, X2, t)."""
        key = (d1, d2, dt)
        if key == (0, 0, 0):
            return self
        cache = self._cache
        if key not in cache:
            # peel one derivative at a time so intermediate results are reused
            if dt:
                base, var = self.diff(d1, d2, dt - 1), 2
            elif d2:
                base, var = self.diff(d1, d2 - 1, 0), 1
            else:
                base, var = self.diff(d1 - 1, 0, 0), 0
            cache[key] = base._diff_once(var)
        return cache[key]

    def _diff_once(self, var: int) -> AnalyticField:
        terms = []
        for c, p, f, ph in self.terms():
            if p[var] > 0:
                q = list(p)
                q[var] -= 1
                terms.append((c * p[var], q, f, ph))
            if f[var] != 0.0:
                # d/dx cos(a) = -k sin(a) = k cos(a + pi/2)
                terms.append((c * f[var], p, f, ph + 0.5 * math.pi))
        return AnalyticField.from_terms(terms, self.shape)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: AnalyticField) -> AnalyticField:
        if not isinstance(other, AnalyticField):
            other = AnalyticField.constant(np.broadcast_to(np.asarray(other, float), self.shape))
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return AnalyticField.from_terms(list(self.terms()) + list(other.terms()), self.shape)

    __radd__ = __add__

    def __neg__(self) -> AnalyticField:
        return self.scale(-1.0)

    def __sub__(self, other: AnalyticField) -> AnalyticField:
        return self + (-other)

    def scale(self, s) -> AnalyticField:
        return AnalyticField.from_terms([(c * s, p, f, ph) for c, p, f, ph in self.terms()], self.shape)

    def linear_map(self, A) -> AnalyticField:
        """Apply a constant matrix to vector values: x -> A @ x."""
        A = np.asarray(A, dtype=float)
        return AnalyticField.from_terms([(A @ c, p, f, ph) for c, p, f, ph in self.terms()], (A.shape[0],))

    def __mul__(self, other) -> AnalyticField:
        if not isinstance(other, AnalyticField):
            return self.scale(other)
        return _product(self, other)

    __rmul__ = __mul__


def _product(a: AnalyticField, b: AnalyticField) -> AnalyticField:
    # at least one factor must be scalar valued
    if a.shape and b.shape:
        raise ValueError("product needs a scalar-valued factor")
    shape = a.shape or b.shape
    terms = []
    for ca, pa, fa, pha in a.terms():
        for cb, pb, fb, phb in b.terms():
            c = 0.5 * ca * cb
            p = tuple(x + y for x, y in zip(pa, pb))
            fa_, fb_ = np.asarray(fa), np.asarray(fb)
            terms.append((c, p, fa_ + fb_, pha + phb))
            terms.append((c, p, fa_ - fb_, pha - phb))
    return AnalyticField.from_terms(terms, shape)


def dot(a: AnalyticField, b: AnalyticField) -> AnalyticField:
    out = AnalyticField.zeros(())
    for k in range(a.shape[0]):
        out = out + a[k] * b[k]
    return out


def cross(a: AnalyticField, b: AnalyticField) -> AnalyticField:
    return AnalyticField.stack(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


def from_table(rows, shape=()) -> AnalyticField:
    """Build a field from JSON-style term records.

    Each record is a mapping with keys ``coef`` (scalar or list), optional
    ``powers`` ``[p1, p2, r]``, ``freqs`` ``[k1, k2, w]``, ``phase`` and
    ``kind`` (``"cos"`` default or ``"sin"``).
    """
    terms = []
    for row in rows:
        coef = np.asarray(row["coef"], dtype=float)
        phase = float(row.get("phase", 0.0))
        if row.get("kind", "cos") == "sin":
            phase -= 0.5 * math.pi
        terms.append((coef, tuple(row.get("powers", (0, 0, 0))), tuple(row.get("freqs", (0.0, 0.0, 0.0))), phase))
    return AnalyticField.from_terms(terms, shape)
