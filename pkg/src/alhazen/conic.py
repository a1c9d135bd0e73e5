"""Reflection points on conic mirrors.

A conic is stored in Hermitian form

    c(z) = conj(a) z^2 + p z conj(z) + a conj(z)^2 + conj(b) z + b conj(z) + q

with complex ``a, b`` and real ``p, q``.  Sources are first moved to the
canonical pair 1, -1 by a similarity; in that frame the points of tangency
between the mirror and the confocal ellipses/hyperbolas with foci +-1 are
roots of a sextic whose coefficients are polynomial in ``a, b, p, q``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, NoTangencyError
from .polynomial import (ComplexPolynomial, poly_divmod, poly_roots, poly_trim,
                         sort_roots)

ON_CURVE_TOL = 1e-6
PARALLEL_TOL = 1e-6


@dataclass(frozen=True)
class Conic:
    a: complex
    b: complex
    p: float
    q: float

    def __post_init__(self):
        for name in ("a", "b"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        for name in ("p", "q"):
            val = getattr(self, name)
            if isinstance(val, complex):
                if abs(val.imag) > 1e-12 * max(1.0, abs(val)):
                    raise ValueError(f"conic coefficient {name} must be real")
                val = val.real
            object.__setattr__(self, name, float(val))
        vals = (self.a.real, self.a.imag, self.b.real, self.b.imag, self.p, self.q)
        if not all(np.isfinite(vals)):
            raise ValueError("conic coefficients must be finite")

    def __call__(self, z):
        return conic_eval(self, z)

    @property
    def scale(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.p), abs(self.q))

    def scaled(self, lam: float) -> "Conic":
        return Conic(self.a * lam, self.b * lam, self.p * lam, self.q * lam)

    def normalized(self) -> "Conic":
        s = self.scale
        return self if s == 0 else self.scaled(1.0 / s)

    def conjugate(self) -> "Conic":
        """Mirror image under z -> conj(z)."""
        return Conic(self.a.conjugate(), self.b.conjugate(), self.p, self.q)

    def as_tuple(self):
        """Coefficients of (z^2, z zbar, zbar^2, z, zbar, 1)."""
        return (self.a.conjugate(), complex(self.p), self.a,
                self.b.conjugate(), self.b, complex(self.q))


class ConicClass(enum.Enum):
    ELLIPSE = "ellipse"
    HYPERBOLA = "hyperbola"
    PARABOLA = "parabola"
    CIRCLE = "circle"
    DEGENERATE = "degenerate-or-line"


@dataclass(frozen=True)
class Similarity:
    """The map ``z -> alpha*z + beta``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        if self.alpha == 0:
            raise DegenerateInputError("similarity needs a nonzero scale")

    def __call__(self, z):
        return self.alpha * np.asarray(z) + self.beta if np.ndim(z) else self.alpha * z + self.beta

    def inverse(self) -> "Similarity":
        return Similarity(1 / self.alpha, -self.beta / self.alpha)


def canonical_transform(z1: complex, z2: complex) -> Similarity:
    """Similarity taking ``z1`` to 1 and ``z2`` to -1."""
    if z1 == z2:
        raise DegenerateInputError("coincident points have no canonical frame")
    d = z1 - z2
    return Similarity(2 / d, -(z1 + z2) / d)


def _transform_coeffs(a, b, p, q, gamma, delta):
    """Coefficients of c(gamma*w + delta) as a conic in w (array friendly)."""
    ab = np.conj(a)
    bb = np.conj(b)
    a2 = a * np.conj(gamma) ** 2
    p2 = p * np.abs(gamma) ** 2
    b2 = np.conj(gamma) * (2 * a * np.conj(delta) + p * delta + b)
    q2 = np.real(2 * ab * delta ** 2 + p * np.abs(delta) ** 2 + 2 * bb * delta) + q
    return a2, b2, p2, q2


def transform_conic(C: Conic, A: Similarity) -> Conic:
    """The conic ``A(C)``: its equation is ``c(A^{-1}(w)) = 0``."""
    inv = A.inverse()
    return Conic(*_transform_coeffs(C.a, C.b, C.p, C.q, inv.alpha, inv.beta))


def conic_from_foci(f1: complex, f2: complex, r: float) -> Conic:
    """Conic through ``|z-f1| + |z-f2| = r`` or ``||z-f1| - |z-f2|| = r``.

    Squaring twice merges the two loci into one quadratic; for ``r`` larger
    than the focal distance only the ellipse is real, for smaller ``r`` only
    the hyperbola.  Coincident foci give the circle of radius ``r/2``.
    """
    f1, f2 = complex(f1), complex(f2)
    if not r > 0:
        raise DegenerateInputError("r must be positive")
    if np.isclose(r, abs(f1 - f2), rtol=1e-14, atol=0.0):
        raise DegenerateInputError("degenerate: segment/rays")
    g = f2 - f1
    h = abs(f1) ** 2 - abs(f2) ** 2
    r2 = r * r
    return Conic(
        a=g * g,
        b=2 * h * g + 2 * r2 * (f1 + f2),
        p=2 * abs(g) ** 2 - 4 * r2,
        q=h * h - 2 * r2 * (abs(f1) ** 2 + abs(f2) ** 2) + r2 * r2,
    )


def classify_conic(C: Conic, tol: float = 1e-10) -> ConicClass:
    scale = C.p ** 2 + 4 * abs(C.a) ** 2
    if scale == 0:
        return ConicClass.DEGENERATE
    if abs(C.a) ** 2 <= tol * scale:
        return ConicClass.CIRCLE
    disc = C.p ** 2 - 4 * abs(C.a) ** 2
    if abs(disc) <= tol * scale:
        return ConicClass.PARABOLA
    return ConicClass.ELLIPSE if disc > 0 else ConicClass.HYPERBOLA


def conic_eval(C: Conic, z):
    """Value of ``c(z)``; real by construction (imaginary part is dropped)."""
    z = np.asarray(z, dtype=complex)
    zb = np.conj(z)
    val = (np.conj(C.a) * z * z + C.p * z * zb + C.a * zb * zb
           + np.conj(C.b) * z + C.b * zb + C.q)
    out = val.real
    return float(out) if out.ndim == 0 else out


def conic_gradient(C: Conic, z):
    """Gradient of ``c`` at ``z`` as a complex number ``dc/dx + i dc/dy``."""
    z = np.asarray(z, dtype=complex)
    return 2 * (C.p * z + 2 * C.a * np.conj(z) + C.b)


def f4_coefficient_arrays(a, b, p, q):
    """W0..W6 for (possibly array-valued) conic coefficients.

    Returns an array whose last axis holds the ascending coefficients
    W0, ..., W6.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    ab = np.conj(a)
    bb = np.conj(b)

    W6 = 4 * ab * (bb * b * p - bb**2 * a - ab * b**2) * (p**2 - 4 * ab * a)

    W5 = -2 * (
        b * p**5
        - bb * (a + ab) * p**4
        - b * (4 * ab * q + 8 * ab * a + bb**2) * p**3
        + bb * (8 * ab * a * q + 8 * ab * a**2 + (8 * ab**2 + bb**2) * a
                - 3 * ab * b**2) * p**2
        + 4 * ab * b * (4 * ab * a * q + 4 * ab * a**2 + 4 * bb**2 * a
                        + ab * b**2) * p
        - 4 * a * ab * bb * (8 * ab * a * q + 4 * ab * a**2
                             + (4 * ab**2 + 3 * bb**2) * a + 3 * ab * b**2)
    )

    W4 = -(
        p**6
        - ((4 * a + 4 * ab) * q + a**2 + 10 * ab * a - 9 * b**2 + ab**2
           + bb**2) * p**4
        - 2 * b * bb * (2 * q + 11 * a + ab) * p**3
        + (16 * ab * a * q**2
           + 4 * (8 * ab * a**2 + (8 * ab**2 + 2 * bb**2) * a
                  - 5 * ab * b**2) * q
           + 8 * ab * a**3 + (32 * ab**2 + 14 * bb**2) * a**2
           + (-42 * ab * b**2 + 8 * ab**3 + 18 * bb**2 * ab) * a
           + (-6 * ab**2 - 5 * bb**2) * b**2) * p**2
        + 2 * b * bb * (48 * ab * a * q + 44 * ab * a**2
                        + (4 * ab**2 + 7 * bb**2) * a + ab * b**2) * p
        - 64 * ab**2 * a**2 * q**2
        - 16 * a**2 * ab * (4 * ab * a + 4 * ab**2 + 7 * bb**2) * q
        - 16 * ab**2 * a**4
        - (32 * ab**3 + 56 * bb**2 * ab) * a**3
        + (24 * ab**2 * b**2 - 16 * ab**4 - 56 * bb**2 * ab**2
           - 9 * bb**4) * a**2
        + (24 * ab**3 - 6 * bb**2 * ab) * b**2 * a
        + 3 * ab**2 * b**4
    )

    W3 = -2 * (
        2 * b * p**5
        - bb * (q + 4 * a) * p**4
        - b * ((14 * a + 2 * ab) * q + 2 * a**2 + 12 * ab * a - 8 * b**2
               + 2 * ab**2 + bb**2) * p**3
        + bb * (4 * a * q**2 + (20 * a**2 + 20 * ab * a - 7 * b**2) * q
                + 4 * a**3 + 24 * ab * a**2
                + (-24 * b**2 + 4 * ab**2 + 3 * bb**2) * a
                - ab * b**2) * p**2
        + b * (32 * ab * a * q**2
               + (56 * ab * a**2 + (8 * ab**2 + 26 * bb**2) * a
                  - 6 * ab * b**2) * q
               + 8 * ab * a**3 + (16 * ab**2 + 26 * bb**2) * a**2
               + (-18 * ab * b**2 + 8 * ab**3 + 2 * bb**2 * ab) * a
               + (-6 * ab**2 - bb**2) * b**2) * p
        - bb * (80 * ab * a**2 * q**2
                + 4 * a * (20 * ab * a**2 + (16 * ab**2 + 6 * bb**2) * a
                           - 3 * ab * b**2) * q
                + 16 * ab * a**4 + (32 * ab**2 + 12 * bb**2) * a**3
                + (-28 * ab * b**2 + 16 * ab**3 + 16 * bb**2 * ab) * a**2
                + (-24 * ab**2 - bb**2) * b**2 * a
                - ab * b**4)
    )

    W2 = 2 * (
        ((3 * a - ab) * q - 3 * b**2) * p**4
        + b * bb * (3 * q + 9 * a + ab) * p**3
        + (-2 * (6 * a**2 + 2 * ab * a - b**2) * q**2
           - (4 * a**3 + 16 * ab * a**2
              + (-27 * b**2 - 4 * ab**2 + 9 * bb**2) * a
              + 4 * ab * b**2) * q
           + 3 * (b**2 - 3 * bb**2) * a**2
           + (9 * ab * b**2 - bb**2 * ab) * a
           - 7 * b**4 + 2 * ab**2 * b**2) * p**2
        - b * bb * (28 * a * q**2 + (60 * a**2 - 5 * b**2) * q + 8 * a**3
                    + 20 * ab * a**2 - (19 * b**2 - 12 * ab**2) * a
                    - 5 * ab * b**2) * p
        + 32 * ab * a**2 * q**3
        + 4 * a * (12 * ab * a**2 + (4 * ab**2 + 11 * bb**2) * a
                   - 3 * ab * b**2) * q**2
        + (16 * ab * a**4 + (16 * ab**2 + 44 * bb**2) * a**3
           + (-32 * ab * b**2 + 40 * bb**2 * ab) * a**2
           - (12 * ab**2 + 9 * bb**2) * b**2 * a + ab * b**4) * q
        + 8 * bb**2 * a**4
        + (-4 * ab * b**2 + 20 * bb**2 * ab) * a**3
        + (-(4 * ab**2 + 15 * bb**2) * b**2 + 12 * bb**2 * ab**2
           + 3 * bb**4) * a**2
        + (5 * ab * b**4 - 15 * bb**2 * ab * b**2) * a
        + 2 * ab**2 * b**4
    )

    W1 = 2 * (
        2 * b * (q**2 + (3 * a - ab) * q - b**2) * p**3
        - bb * (8 * a * q**2 + (12 * a**2 - 4 * ab * a + b**2) * q
                - 6 * b**2 * a - 2 * ab * b**2) * p**2
        - b * (8 * a * q**3 + (32 * a**2 - 8 * ab * a - 2 * b**2) * q**2
               + (8 * a**3 + 8 * ab * a**2 + (-20 * b**2 - 2 * bb**2) * a
                  + 2 * ab * b**2) * q
               + (-2 * b**2 + 6 * bb**2) * a**2
               + (-2 * ab * b**2 + 6 * bb**2 * ab) * a
               + 3 * b**4 - bb**2 * b**2) * p
        + bb * (32 * a**2 * q**3
                + 4 * a * (12 * a**2 + 4 * ab * a - 3 * b**2) * q**2
                + (16 * a**4 + 16 * ab * a**3 + (-32 * b**2 + 8 * bb**2) * a**2
                   - 12 * ab * b**2 * a + b**4) * q
                + (-4 * b**2 + 4 * bb**2) * a**3
                + (-4 * ab * b**2 + 4 * bb**2 * ab) * a**2
                + (5 * b**4 - 3 * bb**2 * b**2) * a
                + 2 * ab * b**4)
    )

    W0 = (
        q**2 * p**4
        - 2 * bb * b * q * p**3
        + (-8 * a * q**3 + (-8 * a**2 + 2 * b**2) * q**2
           + (6 * b**2 + 2 * bb**2) * a * q - b**4 + bb**2 * b**2) * p**2
        + 2 * b * bb * (4 * a * q**2 + (-4 * a**2 - b**2) * q
                        + (b**2 - bb**2) * a) * p
        + 16 * a**2 * q**4
        + 8 * a * (4 * a**2 - b**2) * q**3
        + (16 * a**4 + (-32 * b**2 + 8 * bb**2) * a**2 + b**4) * q**2
        - 2 * a * ((4 * b**2 - 4 * bb**2) * a**2 - 5 * b**4
                   + 3 * bb**2 * b**2) * q
        + (b - bb) * (b + bb) * ((b**2 - bb**2) * a**2 - b**4)
    )

    return np.stack(np.broadcast_arrays(W0, W1, W2, W3, W4, W5, W6), axis=-1)


@dataclass(frozen=True)
class SexticF4:
    """Tangency sextic ``W6 z^6 + ... + W0``; ``W`` is ascending (W0 first)."""

    W: tuple[complex, ...]
    source_conic: Conic

    @property
    def poly(self) -> ComplexPolynomial:
        return ComplexPolynomial(self.W)


def f4_coefficients(C: Conic) -> SexticF4:
    """Sextic whose roots contain every point where a conic with foci +-1
    touches ``C``.

    Raises
    ------
    DegenerateInputError
        For a line (``a = p = 0``), or when every coefficient vanishes, which
        happens when ``C`` is itself confocal with +-1.
    """
    if classify_conic(C) is ConicClass.DEGENERATE:
        raise DegenerateInputError("degenerate: conic is a line")
    W = f4_coefficient_arrays(C.a, C.b, C.p, C.q)
    if _is_confocal(C) or not np.any(W):
        raise DegenerateInputError("confocal degeneracy: F4 vanishes identically")
    return SexticF4(tuple(complex(w) for w in W), C)


def _is_confocal(C: Conic, tol: float = 1e-12) -> bool:
    """Is ``C`` a multiple of a conic with foci +-1?

    Those are ``k (4 z^2 + (8 - 4 r^2) z zbar + 4 zbar^2 + r^4 - 4 r^2)``
    with ``k > 0``; every point of such a curve is a tangency, so the sextic
    vanishes identically.
    """
    Cn = C.normalized()
    if abs(Cn.b) > tol or abs(Cn.a.imag) > tol or Cn.a.real <= tol:
        return False
    k = Cn.a.real / 4
    r2 = (8 - Cn.p / k) / 4
    return abs(Cn.q - k * (r2 * r2 - 4 * r2)) <= 1e-10


def s_quartic(C: Conic, r2: float) -> ComplexPolynomial:
    """Quartic in ``z`` left after eliminating ``conj(z)`` between ``C`` and
    the confocal curve ``z^2 + (2-2 r2) z zbar + zbar^2 + r2^2 - 2 r2 = 0``."""
    a, b, p, q = C.a, C.b, C.p, C.q
    ab, bb = a.conjugate(), b.conjugate()
    r = r2
    c4 = 4 * ab * a * r**2 + 2 * ((a + ab) * p - 4 * ab * a) * r + (p - a - ab) ** 2
    c3 = (4 * bb * a * r**2 + 2 * (bb * p + (b - 4 * bb) * a + ab * b) * r
          + 2 * (b - bb) * (p - a - ab))
    c2 = (2 * a * p * r**3
          + (p**2 - 6 * a * p + 4 * a * q + 2 * a**2 - 2 * ab * a) * r**2
          - 2 * (p**2 - (q + 2 * a) * p + 4 * a * q + 2 * a**2 - 2 * ab * a
                 - bb * b) * r
          - 2 * q * p + (2 * a + 2 * ab) * q + b**2 - 2 * bb * b + bb**2)
    c1 = (2 * b * a * r**3 + 2 * (b * p + (-3 * b - bb) * a) * r**2
          - 2 * (2 * b * p - b * q + (-2 * b - 2 * bb) * a) * r
          - 2 * (b - bb) * q)
    c0 = (a**2 * r**4 - 4 * a**2 * r**3 + (-2 * a * q + 4 * a**2 + b**2) * r**2
          + (4 * a * q - 2 * b**2) * r + q**2)
    return ComplexPolynomial([c0, c1, c2, c3, c4])


def factor_f1(C: Conic) -> ComplexPolynomial:
    """Quadratic from ``conj(z) = -z``: intersections with the imaginary axis."""
    return ComplexPolynomial([-C.q, C.b - C.b.conjugate(),
                              C.p - C.a - C.a.conjugate()])


def factor_f2(C: Conic) -> ComplexPolynomial:
    """Quadratic from ``conj(z) = z``: intersections with the real axis."""
    return ComplexPolynomial([C.q, C.b + C.b.conjugate(),
                              C.p + C.a + C.a.conjugate()])


def factor_f3(C: Conic) -> ComplexPolynomial:
    a, b, p, q = C.a, C.b, C.p, C.q
    return ComplexPolynomial([b * b, 2 * b * p, p * p - 4 * a * q - 4 * a * a,
                              -4 * b.conjugate() * a, 4 * a * a - 4 * a.conjugate() * a])


def _real_roots_in_unit_interval(c2, c1, c0, slack=1e-12):
    """Does ``c2 x^2 + c1 x + c0`` have a real root in [-1, 1]? (arrays ok)"""
    c2, c1, c0 = (np.asarray(v, dtype=float) for v in (c2, c1, c0))
    scale = np.maximum.reduce([np.abs(c2), np.abs(c1), np.abs(c0)])
    scale = np.where(scale > 0, scale, 1.0)
    c2, c1, c0 = c2 / scale, c1 / scale, c0 / scale
    lo, hi = -1 - slack, 1 + slack
    disc = c1 * c1 - 4 * c2 * c0
    quad = np.abs(c2) > 1e-14
    with np.errstate(divide="ignore", invalid="ignore"):
        sq = np.sqrt(np.maximum(disc, 0.0))
        x1 = (-c1 - sq) / (2 * c2)
        x2 = (-c1 + sq) / (2 * c2)
        hit_quad = (disc >= 0) & (((x1 >= lo) & (x1 <= hi)) | ((x2 >= lo) & (x2 <= hi)))
        xl = -c0 / c1
        hit_lin = (np.abs(c1) > 1e-14) & (xl >= lo) & (xl <= hi)
        # all coefficients zero: the whole axis lies on the conic
        hit_zero = (np.abs(c1) <= 1e-14) & (np.abs(c0) <= 1e-14)
    out = np.where(quad, hit_quad, hit_lin | hit_zero)
    return bool(out) if out.ndim == 0 else out


def segment_blocked(C: Conic) -> bool:
    """True when ``C`` meets the segment [-1, 1]."""
    f2 = factor_f2(C).coeffs.real
    return _real_roots_in_unit_interval(f2[2], f2[1], f2[0])


class TangencyKind(enum.Enum):
    ELLIPSE = "ellipse"
    HYPERBOLA = "hyperbola"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class TangencyPoint:
    point: complex
    on_curve_residual: float
    sum: float
    tangency_kind: TangencyKind


@dataclass(frozen=True)
class TangencySolution:
    points: tuple[TangencyPoint, ...]
    minimizer_index: Optional[int]
    all_roots: tuple[complex, ...]
    f4: SexticF4
    blocked: bool

    @property
    def minimizer(self) -> Optional[TangencyPoint]:
        return None if self.minimizer_index is None else self.points[self.minimizer_index]


def on_curve_tolerance(C: Conic, z, tol: float = ON_CURVE_TOL):
    """``tol`` times the size of the individual terms of ``c(z)``."""
    r = np.abs(z)
    return tol * ((2 * abs(C.a) + abs(C.p)) * r * r + 2 * abs(C.b) * r + abs(C.q))


def tangency_kind(C: Conic, u: complex, tol: float = PARALLEL_TOL) -> TangencyKind:
    """Which confocal family (foci +-1) touches ``C`` at ``u``.

    Compares the unit normal of ``C`` with the gradients of
    ``|z-1| + |z+1|`` and ``|z-1| - |z+1|``.
    """
    n = complex(conic_gradient(C, u))
    e1 = (u - 1) / abs(u - 1) if u != 1 else 0j
    e2 = (u + 1) / abs(u + 1) if u != -1 else 0j
    if n == 0:
        return TangencyKind.UNDETERMINED
    n /= abs(n)
    best = TangencyKind.UNDETERMINED
    best_cross = tol
    for kind, g in ((TangencyKind.ELLIPSE, e1 + e2), (TangencyKind.HYPERBOLA, e1 - e2)):
        if abs(g) == 0:
            continue
        cross = abs((n.conjugate() * g / abs(g)).imag)
        if cross <= best_cross:
            best, best_cross = kind, cross
    return best


def conic_extent(C: Conic) -> float:
    """Rough distance from the origin to the bulk of ``C`` (at least 1)."""
    quad = max(abs(C.p), 2 * abs(C.a))
    return max(1.0, abs(C.b) / quad, np.sqrt(abs(C.q) / quad))


def tangency_points(C: Conic, on_curve_tol: float = ON_CURVE_TOL) -> TangencySolution:
    """Roots of the tangency sextic that lie on ``C``.

    ``minimizer_index`` marks the point with the smallest ``|z-1| + |z+1|``;
    it is left unset when ``C`` blocks the segment [-1, 1].
    """
    Cn = C.normalized()
    f4 = f4_coefficients(Cn)
    # solve in w = z / rho so that large mirrors do not spread the
    # coefficients over many orders of magnitude before trimming
    rho = conic_extent(Cn)
    balanced = ComplexPolynomial(np.asarray(f4.W) * rho ** np.arange(len(f4.W)))
    trimmed, _ = poly_trim(balanced)
    roots = (sort_roots(rho * poly_roots(trimmed).roots) if trimmed.degree >= 1
             else np.array([]))
    points = []
    for u in roots:
        u = complex(u)
        res = abs(conic_eval(Cn, u))
        if res <= on_curve_tolerance(Cn, u, on_curve_tol):
            points.append(TangencyPoint(u, res, abs(u - 1) + abs(u + 1),
                                        tangency_kind(Cn, u)))
    if not points:
        raise NoTangencyError("no tangency found")
    blocked = segment_blocked(Cn)
    idx = None
    if not blocked:
        sums = [pt.sum for pt in points]
        idx = int(np.argmin(sums))
    return TangencySolution(tuple(points), idx, tuple(complex(r) for r in roots),
                            SexticF4(f4.W, C), blocked)


def circle_specialization_quartic(b: complex, q: float) -> ComplexPolynomial:
    """Quartic cofactor of the sextic for the circle ``|z|^2 + conj(b) z + b conj(z) + q``."""
    bb = b.conjugate()
    return ComplexPolynomial([
        (b**2 + 1) * q**2 - 2 * bb * b * q - b**4 + bb**2 * b**2,
        2 * b * q**2 + 2 * bb * b**2 * q - 4 * b**3,
        6 * bb * b * q - 6 * b**2,
        2 * bb * q + (2 * bb**2 - 4) * b,
        bb**2 - 1,
    ])


def verify_circle_specialization(b: complex, q: float, tol: float = 1e-9) -> bool:
    """Check that the generic sextic at ``a=0, p=1`` splits as
    ``(2bz + b^2 + 1) * Q(z)`` with the closed-form quartic ``Q``."""
    b = complex(b)
    if abs(b) ** 2 <= q:
        raise DegenerateInputError("imaginary circle")
    W = f4_coefficient_arrays(0j, b, 1.0, q)
    linear = ComplexPolynomial([b * b + 1, 2 * b])
    quot, rem = poly_divmod(W, linear)
    expected = circle_specialization_quartic(b, q).coeffs
    scale = max(np.max(np.abs(W)), 1e-300)
    if np.max(np.abs(rem.coeffs)) > tol * scale:
        return False
    got = quot.coeffs
    if got.size > expected.size:
        if np.max(np.abs(got[expected.size:])) > tol * scale:
            return False
        got = got[:expected.size]
    got = np.pad(got, (0, expected.size - got.size))
    return bool(np.max(np.abs(got - expected)) <= tol * max(np.max(np.abs(expected)), 1e-300))
