"""Triangular ratio metric on domains bounded by a conic.

For a domain ``G`` and points ``z1, z2`` in it,

    s_G(z1, z2) = sup_{z on boundary} |z1 - z2| / (|z1 - z| + |z - z2|).

After moving ``z1, z2`` to 1 and -1 the supremum is ``2 / min(|u-1| + |u+1|)``
over the boundary conic, and the minimum sits at a root of the tangency
sextic.  When the boundary cuts the segment the value is 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .conic import (ON_CURVE_TOL, Conic, Similarity, TangencySolution, _real_roots_in_unit_interval,
                    _transform_coeffs, canonical_transform, conic_eval, conic_from_foci,
                    f4_coefficient_arrays, tangency_points, transform_conic)
from .errors import DegenerateInputError, DomainError
from .polynomial import _initial_guesses, aberth_batch

BISECT_WIDTH = 1e-6
LEVEL_TOL = 1e-9
SCAN_SAMPLES = 64
EDGE_ANGLE = np.deg2rad(30.0)
BOUNDARY_PULL = 1e-9


class DomainKind(enum.Enum):
    SUM_LESS = "sum-less"
    SUM_GREATER = "sum-greater"
    DIFF_LESS = "diff-less"
    DIFF_GREATER = "diff-greater"

    @property
    def is_sum(self) -> bool:
        return self in (DomainKind.SUM_LESS, DomainKind.SUM_GREATER)


@dataclass(frozen=True)
class ConicDomain:
    """``{z : |z-f1| + |z-f2| < r}`` and its relatives, selected by ``kind``.

    A disk of centre ``c`` and radius ``R`` is ``ConicDomain(c, c, 2R, SUM_LESS)``.
    """

    f1: complex
    f2: complex
    r: float
    kind: DomainKind = DomainKind.SUM_LESS

    def __post_init__(self):
        object.__setattr__(self, "f1", complex(self.f1))
        object.__setattr__(self, "f2", complex(self.f2))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if not (np.isfinite(self.r) and np.isfinite(abs(self.f1)) and np.isfinite(abs(self.f2))):
            raise DomainError("domain parameters must be finite")
        focal = abs(self.f1 - self.f2)
        if self.kind.is_sum and not self.r > focal:
            raise DomainError("sum domains need r larger than the focal distance")
        if not self.kind.is_sum and not (0 < self.r < focal):
            raise DomainError("difference domains need 0 < r < focal distance")

    @classmethod
    def disk(cls, center: complex = 0j, radius: float = 1.0) -> "ConicDomain":
        return cls(center, center, 2 * radius, DomainKind.SUM_LESS)

    def defining_value(self, z):
        """``|z-f1| + |z-f2|`` or ``||z-f1| - |z-f2||``."""
        z = np.asarray(z, dtype=complex)
        d1, d2 = np.abs(z - self.f1), np.abs(z - self.f2)
        return d1 + d2 if self.kind.is_sum else np.abs(d1 - d2)

    def contains(self, z):
        v = self.defining_value(z)
        if self.kind in (DomainKind.SUM_LESS, DomainKind.DIFF_LESS):
            out = v < self.r
        else:
            out = v > self.r
        return bool(out) if np.ndim(out) == 0 else out

    def boundary_conic(self) -> Conic:
        return conic_from_foci(self.f1, self.f2, self.r)

    def transformed(self, A: Similarity) -> "ConicDomain":
        """Image of the domain under ``A``."""
        return ConicDomain(A(self.f1), A(self.f2), abs(A.alpha) * self.r, self.kind)

    def scale(self) -> float:
        return max(abs(self.f1 - self.f2), self.r)

    def boundary_samples(self, n: int, points: Sequence[complex] = ()) -> np.ndarray:
        """``n`` boundary points.  Ellipses use the eccentric angle over
        ``[0, 2 pi)``; hyperbolas split one parameter grid over both branches,
        reaching far enough to cover ``points``.  Doubling ``n`` refines the
        grid (the coarse samples are kept)."""
        c = (self.f1 + self.f2) / 2
        half = abs(self.f2 - self.f1) / 2
        rot = (self.f2 - self.f1) / (2 * half) if half > 0 else 1.0
        A = self.r / 2
        x = np.arange(n) / n
        if self.kind.is_sum:
            B = np.sqrt(A * A - half * half)
            t = 2 * np.pi * x
            w = A * np.cos(t) + 1j * B * np.sin(t)
        else:
            B = np.sqrt(half * half - A * A)
            reach = max([10.0 * A] + [10.0 * abs(p - c) for p in points])
            T = np.arccosh(max(10.0, reach / A))
            x2 = 2 * x
            branch = np.where(x2 < 1, 1.0, -1.0)
            t = T * (2 * (x2 % 1.0) - 1)
            w = branch * A * np.cosh(t) + 1j * B * np.sinh(t)
        return c + rot * w


# -- the metric ------------------------------------------------------------

@dataclass(frozen=True)
class SMetricResult:
    value: float
    blocked: bool
    transform: Optional[Similarity]
    canonical_conic: Optional[Conic]
    tangency: Optional[TangencySolution]

    @property
    def minimizer(self) -> Optional[complex]:
        """Minimising tangency point in the canonical frame."""
        if self.tangency is None or self.tangency.minimizer is None:
            return None
        return self.tangency.minimizer.point


def _check_inside(dom: ConicDomain, *pts):
    for z in pts:
        if not dom.contains(z):
            raise DomainError("source outside domain")


def smetric_solution(z1: complex, z2: complex, dom: ConicDomain) -> SMetricResult:
    """Full pipeline: canonical frame, tangency sextic, minimal sum."""
    z1, z2 = complex(z1), complex(z2)
    _check_inside(dom, z1, z2)
    if z1 == z2:
        return SMetricResult(0.0, False, None, None, None)
    A = canonical_transform(z1, z2)
    C = transform_conic(dom.boundary_conic(), A)
    sol = tangency_points(C)
    if sol.blocked:
        return SMetricResult(1.0, True, A, C, sol)
    return SMetricResult(2.0 / sol.minimizer.sum, False, A, C, sol)


def smetric_conic(z1: complex, z2: complex, dom: ConicDomain) -> float:
    return smetric_solution(z1, z2, dom).value


def _effective_degree(W: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    mag = np.abs(W)
    big = mag > eps * mag.max(axis=1, keepdims=True)
    return W.shape[1] - 1 - np.argmax(big[:, ::-1], axis=1)


def smetric_batch(z1: complex, z2, dom: ConicDomain, warm=None, return_roots: bool = False):
    """Vectorised metric from ``z1`` to every point of ``z2``.

    Membership is not checked.  ``warm`` may hold sextic roots from nearby
    points (shape ``(m, 6)``) to seed the root finder.
    """
    z1 = complex(z1)
    z2 = np.atleast_1d(np.asarray(z2, dtype=complex))
    m = z2.size
    C = dom.boundary_conic()
    d = z1 - z2
    same = d == 0
    dd = np.where(same, 1.0, d)
    a, b, p, q = _transform_coeffs(C.a, C.b, C.p, C.q, dd / 2, (z1 + z2) / 2)
    a, b, p, q = np.broadcast_arrays(a, b, p, q)
    sc = np.maximum.reduce([np.abs(a), np.abs(b), np.abs(p), np.abs(q)])
    a, b, p, q = a / sc, b / sc, np.real(p) / sc, np.real(q) / sc
    blocked = _real_roots_in_unit_interval(p + 2 * a.real, 2 * b.real, q)
    blocked = np.atleast_1d(blocked)

    W = f4_coefficient_arrays(a, b, p, q).reshape(m, 7)
    # balance each row as in tangency_points: roots are found in w = z / rho
    quad = np.maximum(np.abs(p), 2 * np.abs(a))
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.maximum.reduce([np.ones(m), np.abs(b) / quad, np.sqrt(np.abs(q) / quad)])
    rho = np.where(np.isfinite(rho), rho, 1.0)
    W = W * rho[:, None] ** np.arange(7)
    deg = _effective_degree(W)
    roots = np.full((m, 6), np.nan + 0j)
    ok = np.zeros(m, bool)
    for k in np.unique(deg):
        rows = np.nonzero(deg == k)[0]
        if k < 1:
            continue
        coeffs = W[rows, :k + 1]
        z0 = None
        if warm is not None:
            z0 = np.asarray(warm, dtype=complex)[rows, :k] / rho[rows, None]
            fresh = _initial_guesses(coeffs / coeffs[:, -1:])
            z0 = np.where(np.all(np.isfinite(z0), axis=1)[:, None], z0, fresh)
        r, conv, _ = aberth_batch(coeffs, z0=z0)
        roots[rows, :k] = r * rho[rows, None]
        ok[rows] = conv

    zb = np.conj(roots)
    cval = np.real(np.conj(a)[:, None] * roots ** 2 + p[:, None] * roots * zb
                   + a[:, None] * zb ** 2 + np.conj(b)[:, None] * roots
                   + b[:, None] * zb + q[:, None])
    with np.errstate(invalid="ignore"):
        r = np.abs(roots)
        terms = ((2 * np.abs(a) + np.abs(p))[:, None] * r * r
                 + 2 * np.abs(b)[:, None] * r + np.abs(q)[:, None])
        on = np.abs(cval) <= ON_CURVE_TOL * terms
        sums = np.where(on, np.abs(roots - 1) + np.abs(roots + 1), np.inf)
    best = sums.min(axis=1)
    s = np.where(blocked, 1.0, 2.0 / best)

    # rows the fast path could not settle go through the scalar pipeline
    redo = ~same & ~blocked & (~ok | ~np.isfinite(best))
    for i in np.nonzero(redo)[0]:
        Ci = Conic(a[i], b[i], p[i], q[i])
        s[i] = 2.0 / tangency_points(Ci).minimizer.sum
    s = np.where(same, 0.0, s)
    if return_roots:
        return s, roots
    return s


def smetric_bruteforce(z1: complex, z2: complex, dom: ConicDomain, n: int) -> float:
    """Maximum of the defining ratio over ``n`` boundary samples."""
    if n < 100:
        raise ValueError("need at least 100 boundary samples")
    z1, z2 = complex(z1), complex(z2)
    _check_inside(dom, z1, z2)
    if z1 == z2:
        return 0.0
    w = dom.boundary_samples(n, points=(z1, z2))
    ratio = abs(z1 - z2) / (np.abs(z1 - w) + np.abs(w - z2))
    return float(np.max(ratio))


# -- level sets ------------------------------------------------------------

@dataclass(frozen=True)
class LevelSet:
    center: complex
    level: float
    points: np.ndarray
    angles: np.ndarray
    values: np.ndarray
    unresolved_rays: tuple[float, ...] = field(default=())

    def runs(self) -> list[np.ndarray]:
        """Contour pieces between unresolved rays; a full contour is closed."""
        pts = np.asarray(self.points)
        if pts.size == 0:
            return []
        if not self.unresolved_rays:
            return [np.append(pts, pts[:1])]
        nrays = self.angles.size + len(self.unresolved_rays)
        step = 2 * np.pi / nrays
        cut = np.nonzero(np.diff(self.angles) > 1.5 * step)[0] + 1
        parts = np.split(pts, cut)
        # join across the 0 / 2 pi seam when both ends are resolved
        if (len(parts) > 1 and self.angles[0] < 0.5 * step
                and self.angles[-1] > 2 * np.pi - 1.5 * step):
            parts[0] = np.concatenate([parts.pop(), parts[0]])
        return parts

    def max_error(self) -> float:
        return float(np.max(np.abs(self.values - self.level))) if self.values.size else 0.0


def _exit_radius(C: Conic, z0: complex, d: np.ndarray) -> np.ndarray:
    """First positive ``rho`` with ``c(z0 + rho d) = 0``; inf if none."""
    A = 2 * np.real(np.conj(C.a) * d * d) + C.p * np.abs(d) ** 2
    B = (4 * np.real(np.conj(C.a) * z0 * d) + 2 * C.p * np.real(z0 * np.conj(d))
         + 2 * np.real(np.conj(C.b) * d))
    C0 = conic_eval(C, z0)
    disc = B * B - 4 * A * C0
    out = np.full(d.shape, np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        sq = np.sqrt(np.maximum(disc, 0.0))
        qq = -0.5 * (B + np.copysign(sq, B))
        r1 = qq / A
        r2 = C0 / qq
    for r in (r1, r2):
        r = np.where((disc >= 0) & np.isfinite(r) & (r > 0), r, np.inf)
        out = np.minimum(out, r)
    return out


@dataclass
class _RayScan:
    angles: np.ndarray
    directions: np.ndarray
    exit: np.ndarray
    rho: np.ndarray       # (nrays, k) sample radii, first column 0
    values: np.ndarray    # (nrays, k)
    roots: np.ndarray     # (nrays, k, 6)


def _scan(dom: ConicDomain, z0: complex, nrays: int, samples: int = SCAN_SAMPLES) -> _RayScan:
    C = dom.boundary_conic()
    ang = 2 * np.pi * np.arange(nrays) / nrays
    d = np.exp(1j * ang)
    R = _exit_radius(C, z0, d)
    L = max(abs(dom.f1 - z0), abs(dom.f2 - z0), dom.r)
    k = np.arange(1, samples) / samples
    bounded = np.isfinite(R)
    # bounded rays: uniform up to the exit; open rays: stretched grid
    far = L * np.tan(0.5 * np.pi * np.arange(1, samples) / (samples + 1))
    rho = np.where(bounded[:, None], R[:, None] * k[None, :], far[None, :])
    pts = z0 + rho * d[:, None]
    vals, roots = smetric_batch(z0, pts.ravel(), dom, return_roots=True)
    vals = vals.reshape(rho.shape)
    roots = roots.reshape(rho.shape + (6,))
    zero = np.zeros((nrays, 1))
    rho = np.hstack([zero, rho])
    vals = np.hstack([zero, vals])
    roots = np.concatenate([np.full((nrays, 1, 6), np.nan + 0j), roots], axis=1)
    # the exit point itself has value 1
    last_r = np.where(bounded, R, np.inf)[:, None]
    rho = np.hstack([rho, last_r])
    vals = np.hstack([vals, np.where(bounded, 1.0, -np.inf)[:, None]])
    roots = np.concatenate([roots, np.full((nrays, 1, 6), np.nan + 0j)], axis=1)
    return _RayScan(ang, d, R, rho, vals, roots)


def _level_from_scan(dom: ConicDomain, z0: complex, t: float, sc: _RayScan,
                     width: float = BISECT_WIDTH, tol: float = LEVEL_TOL) -> LevelSet:
    nrays = sc.angles.size
    hit = sc.values >= t
    has = hit.any(axis=1)
    k = np.argmax(hit, axis=1)
    rows = np.nonzero(has)[0]
    if t >= 1.0:
        # the level-one contour is the visible boundary, nudged inside
        rows = rows[np.isfinite(sc.exit[rows])]
        rho = sc.exit[rows] * (1 - BOUNDARY_PULL)
        pts = z0 + rho * sc.directions[rows]
        vals = smetric_batch(z0, pts, dom)
        unresolved = np.setdiff1d(np.arange(nrays), rows)
        return LevelSet(z0, t, pts, sc.angles[rows], vals,
                        tuple(float(a) for a in sc.angles[unresolved]))

    kk = k[rows]
    lo = sc.rho[rows, kk - 1].copy()
    hi = sc.rho[rows, kk].copy()
    flo = sc.values[rows, kk - 1] - t
    fhi = sc.values[rows, kk] - t
    warm = sc.roots[rows, kk - 1].copy()
    d = sc.directions[rows]
    best_r = np.where(np.abs(flo) < np.abs(fhi), lo, hi)
    best_f = np.where(np.abs(flo) < np.abs(fhi), flo, fhi)
    side = np.zeros(rows.size, int)
    active = np.ones(rows.size, bool)
    for _ in range(100):
        done = (np.abs(best_f) <= tol) | (hi - lo <= width * np.maximum(1.0, hi))
        active &= ~done
        if not active.any():
            break
        ia = np.nonzero(active)[0]
        # Illinois step, falling back to bisection when it leaves the bracket
        with np.errstate(divide="ignore", invalid="ignore"):
            x = (lo[ia] * fhi[ia] - hi[ia] * flo[ia]) / (fhi[ia] - flo[ia])
        mid = 0.5 * (lo[ia] + hi[ia])
        x = np.where(np.isfinite(x) & (x > lo[ia]) & (x < hi[ia]), x, mid)
        fx, rts = smetric_batch(z0, z0 + x * d[ia], dom, warm=warm[ia], return_roots=True)
        fx = fx - t
        warm[ia] = rts
        better = np.abs(fx) < np.abs(best_f[ia])
        best_r[ia] = np.where(better, x, best_r[ia])
        best_f[ia] = np.where(better, fx, best_f[ia])
        up = fx >= 0
        # replace hi where f(x) >= 0, else lo; halve the stale end's value
        hi_i, lo_i = ia[up], ia[~up]
        hi[hi_i], fhi[hi_i] = x[up], fx[up]
        flo[hi_i] = np.where(side[hi_i] == 1, flo[hi_i] / 2, flo[hi_i])
        side[hi_i] = 1
        lo[lo_i], flo[lo_i] = x[~up], fx[~up]
        fhi[lo_i] = np.where(side[lo_i] == -1, fhi[lo_i] / 2, fhi[lo_i])
        side[lo_i] = -1

    pts = z0 + best_r * d
    unresolved = np.setdiff1d(np.arange(nrays), rows)
    return LevelSet(z0, t, pts, sc.angles[rows], best_f + t,
                    tuple(float(a) for a in sc.angles[unresolved]))


def levelsets(dom: ConicDomain, z0: complex, levels: Sequence[float],
              nrays: int = 720) -> list[LevelSet]:
    """Contours ``s(z0, .) = t`` for several levels sharing one ray scan.

    Along each ray the first crossing of ``t`` found by a 64-sample scan is
    refined by a safeguarded Illinois iteration.  Rays that never reach the
    level inside the domain are listed in ``unresolved_rays``.  The level 1
    contour is the part of the boundary seen from ``z0``.
    """
    z0 = complex(z0)
    _check_inside(dom, z0)
    if nrays < 4:
        raise ValueError("need at least 4 rays")
    for t in levels:
        if not 0 < t <= 1:
            raise ValueError("levels must lie in (0, 1]")
    sc = _scan(dom, z0, nrays)
    return [_level_from_scan(dom, z0, float(t), sc) for t in levels]


def levelset(dom: ConicDomain, z0: complex, t: float, nrays: int = 720) -> LevelSet:
    return levelsets(dom, z0, [t], nrays)[0]


def level_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid ``start, start+step, ..., stop`` without drift."""
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(n), 12)


# -- edge points ------------------------------------------------------------

@dataclass(frozen=True)
class EdgeReport:
    edges: np.ndarray
    constant: float
    residuals: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if self.residuals.size else 0.0


def detect_edges(points: np.ndarray, angle: float = EDGE_ANGLE) -> np.ndarray:
    """Indices of closed-polyline vertices whose turning angle exceeds ``angle``."""
    pts = np.asarray(points, dtype=complex)
    if pts.size < 3:
        raise DegenerateInputError("insufficient samples")
    fwd = np.roll(pts, -1) - pts
    back = pts - np.roll(pts, 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        turn = np.abs(np.angle(fwd / back))
    return np.nonzero(np.nan_to_num(turn) > angle)[0]


def conjecture_edge_report(dom: ConicDomain, z0: complex, ls: LevelSet) -> EdgeReport:
    """Residual of the confocal conic through ``z0`` at the contour's edges.

    The conic is ``|z-f1| + |z-f2| = |f1| + |f2|`` for ellipse domains and
    ``||z-f1| - |z-f2|| = ||f1| - |f2||`` for hyperbola domains, with ``z0``
    moved to the origin.
    """
    z0 = complex(z0)
    f1, f2 = dom.f1 - z0, dom.f2 - z0
    pts = np.asarray(ls.points) - z0
    idx = detect_edges(pts)
    if dom.kind.is_sum:
        const = abs(f1) + abs(f2)
        val = np.abs(pts[idx] - f1) + np.abs(pts[idx] - f2)
    else:
        const = abs(abs(f1) - abs(f2))
        val = np.abs(np.abs(pts[idx] - f1) - np.abs(pts[idx] - f2))
    return EdgeReport(pts[idx] + z0, const, np.abs(val - const))


def conjecture_edge_residual(dom: ConicDomain, z0: complex, ls: LevelSet) -> float:
    return conjecture_edge_report(dom, z0, ls).max_residual
