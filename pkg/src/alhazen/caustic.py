"""Catacaustic of the unit circle for a radiant point ``z1``.

The caustic is the envelope of the reflected rays.  A point ``z`` lies on it
exactly when the reflection quartic of the pair ``(z1, z)`` has a multiple
root, so its implicit equation is the discriminant of that quartic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateInputError

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class RayLine:
    """The real line ``alpha z + beta conj(z) + gamma = 0``."""

    alpha: complex
    beta: complex
    gamma: complex

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.alpha * z + self.beta * np.conj(z) + self.gamma

    def normalized(self) -> "RayLine":
        """Scale so that ``beta = conj(alpha)`` and ``gamma`` is real."""
        # multiply by k with k*beta = conj(k*alpha)
        k = np.sqrt(self.alpha.conjugate() / self.beta) if self.beta != 0 else 1.0
        k = complex(k)
        out = RayLine(k * self.alpha, k * self.beta, k * self.gamma)
        s = abs(out.alpha)
        return RayLine(out.alpha / s, out.beta / s, out.gamma / s)

    def is_real_line(self, tol: float = 1e-10) -> bool:
        n = self.normalized()
        return (abs(n.beta - n.alpha.conjugate()) <= tol
                and abs(n.gamma.imag) <= tol * max(1.0, abs(n.gamma)))

    def direction(self) -> complex:
        """Unit vector along the line."""
        n = self.normalized()
        # alpha z + conj(alpha z) = const, so the line runs along i*conj(alpha)
        d = 1j * n.alpha.conjugate()
        return d / abs(d)


def reflected_ray(z1: complex, u: complex, tol: float = 1e-9) -> RayLine:
    """Ray leaving the mirror point ``u`` after reflecting light from ``z1``."""
    z1, u = complex(z1), complex(u)
    if abs(abs(u) - 1) > tol:
        raise ValueError("reflection point must lie on the unit circle")
    if abs(u - z1) <= tol:
        raise DegenerateInputError("radiant on mirror")
    return RayLine(u - z1, u ** 3 * (z1.conjugate() * u - 1),
                   -u * (z1.conjugate() * u * u - z1))


def _num_den(z1: complex, u):
    """Numerator and (real) half-denominator of the parametrisation."""
    z1c = np.conj(z1)
    m = abs(z1) ** 2
    num = z1c * z1c * u ** 3 - 3 * m * u + 2 * z1
    den = 2 * (3 * np.real(z1c * u) - (2 * m + 1))
    return num, den


def caustic_point(z1: complex, phi: float) -> complex:
    """Envelope point belonging to the reflection at ``e^{i phi}``."""
    num, den = _num_den(complex(z1), np.exp(1j * phi))
    if abs(den) <= SINGULAR_TOL:
        raise DegenerateInputError("parametric singularity")
    return complex(num / den)


def caustic_points(z1: complex, phi) -> np.ndarray:
    """Vectorised :func:`caustic_point`; singular parameters give nan."""
    num, den = _num_den(complex(z1), np.exp(1j * np.asarray(phi, dtype=float)))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.abs(den) > SINGULAR_TOL, num / den, np.nan + 0j)


def caustic_velocity(z1: complex, phi) -> np.ndarray:
    """Derivative of the parametrisation with respect to ``phi``."""
    z1 = complex(z1)
    z1c = z1.conjugate()
    m = abs(z1) ** 2
    u = np.exp(1j * np.asarray(phi, dtype=float))
    num, den = _num_den(z1, u)
    dnum = 1j * u * (3 * z1c * z1c * u ** 2 - 3 * m)
    dden = -6 * np.imag(z1c * u)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (dnum * den - num * dden) / den ** 2


def caustic_implicit(z1: complex, z) -> float:
    """Implicit equation of the caustic, in the form
    ``4(|z+z1|^2 - 4|z1|^2|z|^2)^3 + 108 Im((z+z1)^2 conj(z1) conj(z))^2``."""
    z = np.asarray(z, dtype=complex)
    w = z + z1
    lin = np.abs(w) ** 2 - 4 * abs(z1) ** 2 * np.abs(z) ** 2
    im = np.imag(w * w * np.conj(z1) * np.conj(z))
    out = 4 * lin ** 3 + 108 * im * im
    return float(out) if out.ndim == 0 else out


def implicit_scale(z1: complex, z) -> np.ndarray:
    """Magnitude scale for residuals of :func:`caustic_implicit`."""
    return (1 + abs(z1)) ** 6 * (1 + np.abs(z)) ** 6


def apollonius_circle(z1: complex, k: float) -> dict:
    """The generalized circle ``|z + z1| = k |z1| |z|``.

    ``E1 = 0`` is ``k = 1`` and ``E2 = 0`` is ``k = 2``.  Returned as
    ``{"kind": "circle", "center", "radius"}`` or, when ``k |z1| = 1``,
    ``{"kind": "line", "point", "normal"}``.
    """
    z1 = complex(z1)
    lam = k * abs(z1)
    if z1 == 0:
        raise DegenerateInputError("radiant at the centre")
    if np.isclose(lam, 1.0, rtol=1e-12, atol=0):
        # perpendicular bisector of 0 and -z1
        return {"kind": "line", "point": -z1 / 2, "normal": z1 / abs(z1)}
    # |z - A| = lam |z - B| with A = -z1, B = 0
    center = -z1 / (1 - lam * lam)
    radius = lam * abs(z1) / abs(1 - lam * lam)
    return {"kind": "circle", "center": center, "radius": radius}


def distance_to_generalized_circle(circle: dict, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if circle["kind"] == "line":
        return np.abs(np.real((z - circle["point"]) * np.conj(circle["normal"])))
    return np.abs(np.abs(z - circle["center"]) - circle["radius"])


@dataclass(frozen=True)
class CausticCurve:
    radiant: complex
    phi: np.ndarray
    points: np.ndarray
    closed: bool
    e1_circle: Optional[dict] = None
    e2_circle: Optional[dict] = None
    dropped: tuple[float, ...] = field(default=())

    def residuals(self) -> np.ndarray:
        """Scaled implicit-equation residual at each sample."""
        return np.abs(caustic_implicit(self.radiant, self.points)) / implicit_scale(
            self.radiant, self.points)


def caustic_sample(z1: complex, n: int) -> CausticCurve:
    """``n`` parametric samples over ``phi`` in [0, 2 pi); parameters where the
    parametrisation has a pole are skipped and listed in ``dropped``."""
    if n < 8:
        raise ValueError("need at least 8 samples")
    z1 = complex(z1)
    phi = 2 * np.pi * np.arange(n) / n
    pts = caustic_points(z1, phi)
    ok = np.isfinite(pts)
    circles = {}
    if z1 != 0:
        circles = {"e1_circle": apollonius_circle(z1, 1.0),
                   "e2_circle": apollonius_circle(z1, 2.0)}
    return CausticCurve(z1, phi[ok], pts[ok], closed=abs(z1) > 1,
                        dropped=tuple(float(x) for x in phi[~ok]), **circles)


def caustic_cusps(z1: complex, n: int = 2048) -> list[tuple[float, complex]]:
    """Cusps as local minima of the parametric speed, refined by Brent's
    method.  Returns ``(phi, point)`` pairs with numerically zero speed."""
    z1 = complex(z1)
    phi = 2 * np.pi * np.arange(n) / n
    speed = np.abs(caustic_velocity(z1, phi))
    pts = caustic_points(z1, phi)
    size = np.nanmax(np.abs(pts[np.isfinite(pts)])) if np.any(np.isfinite(pts)) else 1.0
    h = 2 * np.pi / n
    out = []
    for k in range(n):
        s0, s1, s2 = speed[k - 1], speed[k], speed[(k + 1) % n]
        if not (np.isfinite(s0) and np.isfinite(s1) and np.isfinite(s2)):
            continue
        if not (s1 <= s0 and s1 < s2):
            continue
        res = minimize_scalar(lambda t: float(np.abs(caustic_velocity(z1, t)) ** 2),
                              bracket=(phi[k] - h, phi[k], phi[k] + h),
                              method="brent", options={"xtol": 1e-14})
        t = float(res.x) % (2 * np.pi)
        if abs(caustic_velocity(z1, t)) <= 1e-5 * max(1.0, size):
            out.append((t, caustic_point(z1, t)))
    return out


def caustic_branches(curve: CausticCurve) -> list[np.ndarray]:
    """Split the samples into runs between poles of the parametrisation
    (where the denominator changes sign)."""
    if curve.points.size == 0:
        return []
    _, den = _num_den(curve.radiant, np.exp(1j * curve.phi))
    sign = np.sign(den)
    gap = np.diff(curve.phi) > 1.5 * (2 * np.pi / (curve.phi.size + len(curve.dropped)))
    cut = np.nonzero((sign[1:] != sign[:-1]) | gap)[0] + 1
    parts = np.split(curve.points, cut)
    # the sample list wraps around at phi = 2 pi
    if len(parts) > 1 and sign[0] == sign[-1] and not curve.dropped:
        parts[0] = np.concatenate([parts.pop(), parts[0]])
    elif len(parts) == 1 and not curve.dropped and np.all(sign == sign[0]):
        parts[0] = np.append(parts[0], parts[0][:1])
    return [p for p in parts if p.size]
