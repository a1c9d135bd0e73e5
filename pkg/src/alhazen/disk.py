"""Reflection points on the unit circle.

Two independent routes are provided: the quartic obtained from the
reflective property of ellipses, and a quartic in the division ratio ``t``
of the segment [z1, z2] built from circles of Apollonius.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DegenerateInputError
from .polynomial import ComplexPolynomial, RootSet, poly_roots, sort_roots

UNIMODULAR_TOL = 1e-7
CLASSIFY_TOL = 1e-10
TRIPLE_CLUSTER = 1e-3


@dataclass(frozen=True)
class PointPair:
    z1: complex
    z2: complex

    def __post_init__(self):
        z1, z2 = complex(self.z1), complex(self.z2)
        if not (np.isfinite(z1) and np.isfinite(z2)):
            raise ValueError("points must be finite")
        object.__setattr__(self, "z1", z1)
        object.__setattr__(self, "z2", z2)

    @cached_property
    def s(self) -> complex:
        return self.z1 + self.z2

    @cached_property
    def p(self) -> complex:
        return self.z1 * self.z2

    def swapped(self) -> "PointPair":
        return PointPair(self.z2, self.z1)


class RootVariant(enum.Enum):
    FOUR_SIMPLE_UNIMODULAR = "four-simple-unimodular"
    TWO_UNIMODULAR_TWO_OFF = "two-unimodular-two-off"
    DOUBLE_PLUS_TWO_SIMPLE = "double-plus-two-simple"
    TRIPLE_PLUS_OPPOSITE = "triple-plus-opposite"


@dataclass(frozen=True)
class RootClassification:
    variant: RootVariant
    discriminant_value: float
    roots: tuple[complex, ...] = ()


@dataclass(frozen=True)
class PASolution:
    reflection_points: tuple[complex, ...]
    all_roots: RootSet
    metric_value: float
    blocked: bool
    minimizer_index: Optional[int] = None

    @property
    def minimizer(self) -> Optional[complex]:
        """Reflection point with the smallest path length."""
        if self.minimizer_index is None:
            return None
        return self.reflection_points[self.minimizer_index]


def pa_quartic(pair: PointPair) -> ComplexPolynomial:
    """``conj(p) u^4 - conj(s) u^3 + s u - p`` for ``s = z1+z2``, ``p = z1 z2``."""
    s, p = pair.s, pair.p
    return ComplexPolynomial([-p, s, 0, -s.conjugate(), p.conjugate()])


def pa_filter(u: complex, pair: PointPair) -> bool:
    """Keep a unimodular root only if it is a genuine reflection point."""
    val = pair.p.conjugate() * u * u - pair.s.conjugate() * u
    return bool(val.real + 1 > 0)


def segment_meets_circle(z1: complex, z2: complex) -> bool:
    """Does the closed segment [z1, z2] touch the unit circle?"""
    d = z2 - z1
    # |z1 + t d|^2 = 1, a real quadratic in t
    qa = abs(d) ** 2
    qb = 2 * (z1.conjugate() * d).real
    qc = abs(z1) ** 2 - 1
    if qa == 0:
        return abs(qc) <= 1e-15
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return False
    sq = np.sqrt(disc)
    return any(-1e-15 <= t <= 1 + 1e-15 for t in ((-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)))


def _path_sum(pair: PointPair, u: complex) -> float:
    return abs(pair.z1 - u) + abs(u - pair.z2)


def _solution(pair: PointPair, points, roots: RootSet) -> PASolution:
    points = tuple(complex(u) for u in sort_roots(points)) if len(points) else ()
    blocked = segment_meets_circle(pair.z1, pair.z2)
    dist = abs(pair.z1 - pair.z2)
    argmin = None
    if blocked:
        metric = 1.0
    elif not points:
        raise DegenerateInputError("no reflection point found")
    else:
        sums = [_path_sum(pair, u) for u in points]
        # argmin takes the first minimum, i.e. the lexicographically smallest
        argmin = int(np.argmin(sums))
        metric = dist / sums[argmin]
    return PASolution(points, roots, float(metric), blocked, argmin)


def pa_points_disk(pair: PointPair) -> PASolution:
    """Reflection points on the unit circle for the sources ``z1, z2``.

    When ``z1 = z2`` the metric value is 0 but the normal-incidence points
    are still reported.
    """
    if pair.z1 == 0 and pair.z2 == 0:
        raise DegenerateInputError("both points at the centre")
    if pair.z1 == 0 or pair.z2 == 0:
        w = pair.z2 if pair.z1 == 0 else pair.z1
        half = np.exp(0.5j * np.angle(w))
        # the cubic u (conj(w) u^2 - w) = 0 has roots 0, +-e^{i alpha/2}
        roots = RootSet(sort_roots([0.0, half, -half]), np.zeros(3), (1, 1, 1))
        return _solution(pair, [half, -half], roots)
    roots = poly_roots(pa_quartic(pair))
    points = [u for u in roots.roots
              if abs(abs(u) - 1) <= UNIMODULAR_TOL and pa_filter(u, pair)]
    # project onto the circle; the radial error is at rounding level
    points = [u / abs(u) for u in points]
    return _solution(pair, points, roots)


def discriminant(pair: PointPair) -> float:
    """Discriminant of the reflection quartic,
    ``4(|s|^2 - 4|p|^2)^3 - 27 (s^2 conj(p) - conj(s)^2 p)^2`` (real)."""
    if pair.z1 == 0 or pair.z2 == 0:
        raise DegenerateInputError("discriminant needs nonzero points")
    s, p = pair.s, pair.p
    im = (s * s * p.conjugate()).imag
    return float(4 * (abs(s) ** 2 - 4 * abs(p) ** 2) ** 3 + 108 * im * im)


def discriminant_scale(pair: PointPair) -> float:
    return (abs(pair.s) ** 2 + abs(pair.p) ** 2) ** 3


def e1(pair: PointPair) -> float:
    return abs(pair.s) - abs(pair.p)


def e2(pair: PointPair) -> float:
    return abs(pair.s) - 2 * abs(pair.p)


def unimodular_count(roots, tol: float = UNIMODULAR_TOL, cluster_tol: float = 1e-6) -> int:
    """Number of distinct roots on the unit circle."""
    on = [u for u in roots if abs(abs(u) - 1) <= tol]
    distinct: list[complex] = []
    for u in on:
        if all(abs(u - v) > cluster_tol for v in distinct):
            distinct.append(u)
    return len(distinct)


def _tightest_triple(roots: np.ndarray):
    best = None
    n = roots.size
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                trip = roots[[i, j, k]]
                diam = max(abs(trip[0] - trip[1]), abs(trip[0] - trip[2]),
                           abs(trip[1] - trip[2]))
                if best is None or diam < best[0]:
                    rest = [m for m in range(n) if m not in (i, j, k)]
                    best = (diam, trip, roots[rest])
    return best


def classify_roots(pair: PointPair, tol: float = CLASSIFY_TOL) -> RootClassification:
    """Root structure of the reflection quartic from the discriminant sign.

    A discriminant within ``tol * (|s|^2 + |p|^2)^3`` of zero signals a
    multiple root.  Triple roots split by roughly the cube root of the
    perturbation, so they are recognised as a cluster of three roots of
    diameter below ``TRIPLE_CLUSTER`` whose remaining root sits opposite.
    """
    D = discriminant(pair)
    thresh = tol * discriminant_scale(pair)
    roots = poly_roots(pa_quartic(pair)).roots
    if D < -thresh:
        variant = RootVariant.FOUR_SIMPLE_UNIMODULAR
    elif D > thresh:
        variant = RootVariant.TWO_UNIMODULAR_TWO_OFF
    else:
        diam, trip, rest = _tightest_triple(roots)
        centre = complex(np.mean(trip))
        if diam <= TRIPLE_CLUSTER and abs(rest[0] + centre) <= 10 * TRIPLE_CLUSTER:
            variant = RootVariant.TRIPLE_PLUS_OPPOSITE
        else:
            variant = RootVariant.DOUBLE_PLUS_TWO_SIMPLE
    return RootClassification(variant, D, tuple(complex(r) for r in roots))


def triple_root(pair: PointPair) -> tuple[complex, complex]:
    """(triple root, simple root) estimate for a cusp configuration."""
    roots = poly_roots(pa_quartic(pair)).roots
    _, trip, rest = _tightest_triple(roots)
    centre = complex(np.mean(trip))
    # a triple root also annihilates P'' = 12 conj(p) u^2 - 6 conj(s) u, whose
    # nonzero root is exact where the split cluster is only good to eps^(1/3)
    if pair.p != 0:
        v = pair.s.conjugate() / (2 * pair.p.conjugate())
        if abs(v - centre) <= TRIPLE_CLUSTER:
            centre = v
    return centre, complex(rest[0])


def _collinear_with_origin(z1: complex, z2: complex, tol: float = 1e-12) -> bool:
    cross = (z1.conjugate() * z2).imag
    return abs(cross) <= tol * max(abs(z1) * abs(z2), 1e-300)


def apollonius_quartic(pair: PointPair) -> ComplexPolynomial:
    """Real quartic in the division ratio ``t`` of the segment [z1, z2].

    A reflection point is ``+-v/|v|`` with ``v = t z2 + (1-t) z1`` for a root
    ``t`` in (0, 1).
    """
    z1, z2 = pair.z1, pair.z2
    if _collinear_with_origin(z1, z2):
        raise DegenerateInputError("degenerate: collinear with center")
    A = abs(z1) ** 2
    B = abs(z2) ** 2
    C = abs(z1 - z2) ** 2
    c4 = (A - B) ** 2 - 4 * C
    c3 = -4 * (A * (A - B) - 2 * C - A + B)
    c2 = 2 * A * (3 * A - B) - 8 * A + 4 * B - 5 * C
    c1 = -(A * (4 * A - 5) + B - C)
    c0 = A * (A - 1)
    return ComplexPolynomial([c0, c1, c2, c3, c4])


def apollonius_residual(pair: PointPair, t: float) -> float:
    """Left minus right side of the ratio-t Apollonius condition."""
    z1, z2 = pair.z1, pair.z2
    A, B = abs(z1) ** 2, abs(z2) ** 2
    lhs = (1 - 2 * t) ** 2 * ((1 - t) ** 2 * A + t * t * B
                              + 2 * t * (1 - t) * (z1 * z2.conjugate()).real)
    rhs = ((1 - t) ** 2 * A - t * t * B) ** 2
    return lhs - rhs


def _polish_real_root(coeffs: np.ndarray, t: float, steps: int = 3) -> float:
    c = coeffs.real
    dc = c[1:] * np.arange(1, c.size)
    for _ in range(steps):
        f = np.polynomial.polynomial.polyval(t, c)
        df = np.polynomial.polynomial.polyval(t, dc)
        if df == 0:
            break
        step = f / df
        t -= step
        if abs(step) <= 1e-16 * max(1.0, abs(t)):
            break
    return t


def _bisector_defect(theta: float, z1: complex, z2: complex) -> float:
    """Angle-bisector defect at ``w = e^{i theta}``.

    The line through 0 and ``w`` meets the line z1z2 at ``z1 + tau (z2 - z1)``;
    the bisector theorem demands ``(1 - tau)|w - z1| = tau |w - z2|``.
    """
    w = np.exp(1j * theta)
    d = z2 - z1
    tau = -(w.conjugate() * z1).imag / (w.conjugate() * d).imag
    return (1 - tau) * abs(w - z1) - tau * abs(w - z2)


def _refine_on_circle(z: complex, pair: PointPair, steps: int = 8) -> complex:
    """Secant iteration on the bisector defect, starting from ``z``."""
    th0 = float(np.angle(z))
    th1 = th0 + 1e-7
    f0 = _bisector_defect(th0, pair.z1, pair.z2)
    f1 = _bisector_defect(th1, pair.z1, pair.z2)
    for _ in range(steps):
        if f1 == f0 or not np.isfinite(f1):
            break
        th0, th1, f0 = th1, th1 - f1 * (th1 - th0) / (f1 - f0), f1
        f1 = _bisector_defect(th1, pair.z1, pair.z2)
        if abs(th1 - th0) <= 1e-16:
            break
    # keep the starting point if the refinement wandered off
    if not np.isfinite(th1) or abs(np.angle(np.exp(1j * th1) / z)) > 1e-3:
        return z
    return complex(np.exp(1j * th1))


def apollonius_segment_ok(pair: PointPair) -> bool:
    """Segment entirely inside the open disk or entirely outside the closed one."""
    return not segment_meets_circle(pair.z1, pair.z2)


def pa_points_apollonius(pair: PointPair, imag_tol: float = 1e-7,
                         ratio_tol: float = 1e-7) -> PASolution:
    """Reflection points from the ratio quartic.

    For each real root ``t`` in (0, 1) both candidates ``+-v/|v|`` are
    refined along the circle and kept when they satisfy the bisector ratio
    condition with a division point inside the segment and pass
    :func:`pa_filter`.
    """
    if not apollonius_segment_ok(pair):
        raise DegenerateInputError("segment meets the unit circle")
    T = apollonius_quartic(pair)
    rs = poly_roots(T)
    scale = max(1.0, float(np.max(np.abs(rs.roots))))
    ts = []
    # a double root (|z1| = |z2| gives one at t = 1/2) splits by ~sqrt(eps);
    # its cluster mean is accurate while Newton on it is not
    for t, mult in rs.distinct():
        if abs(t.imag) > imag_tol * scale:
            continue
        ts.append(_polish_real_root(T.coeffs, t.real) if mult == 1 else t.real)
    ts.sort()
    d = pair.z2 - pair.z1
    points: list[complex] = []
    for t in ts:
        if not 0 < t < 1:
            continue
        v = t * pair.z2 + (1 - t) * pair.z1
        if v == 0:
            continue
        for sign in (1, -1):
            z = _refine_on_circle(sign * v / abs(v), pair)
            tau = -(z.conjugate() * pair.z1).imag / (z.conjugate() * d).imag
            if not 0 < tau < 1:
                continue
            d1, d2 = abs(z - pair.z1), abs(z - pair.z2)
            if abs((1 - tau) * d1 - tau * d2) > ratio_tol * (d1 + d2):
                continue
            if not pa_filter(z, pair):
                continue
            if all(abs(z - w) > 1e-7 for w in points):
                points.append(z)
    return _solution(pair, points, rs)
