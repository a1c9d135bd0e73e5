"""Complex-coefficient polynomials and a simultaneous-iteration root finder.

Coefficients are stored lowest degree first throughout the package, so
``[c0, c1, c2]`` is ``c0 + c1*z + c2*z**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DegenerateInputError

TRIM_EPS = 1e-12
ROOT_TOL = 1e-10
CLUSTER_TOL = 1e-6
MAX_ITER = 500

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ComplexPolynomial:
    """Dense polynomial over the complex numbers, ascending coefficients."""

    coeffs: np.ndarray

    def __init__(self, coeffs):
        arr = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("polynomial needs a nonempty 1-d coefficient list")
        if not np.all(np.isfinite(arr)):
            raise ValueError("polynomial coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(np.abs(self.coeffs) > TRIM_EPS * self.scale)
        return int(nz[-1]) if nz.size else 0

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, z):
        return poly_eval(self, z)

    def __len__(self):
        return self.coeffs.size

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"ComplexPolynomial({self.coeffs.tolist()!r})"


def _coeffs(p) -> np.ndarray:
    if isinstance(p, ComplexPolynomial):
        return p.coeffs
    return np.asarray(p, dtype=complex)


@dataclass(frozen=True)
class RootSet:
    """Roots of a polynomial with per-root residuals and multiplicity guesses.

    ``roots`` holds every root counted with multiplicity, so its length is the
    trimmed degree.  ``multiplicity_estimates[k]`` is the size of the cluster
    that ``roots[k]`` belongs to.
    """

    roots: np.ndarray
    residuals: np.ndarray
    multiplicity_estimates: tuple[int, ...]
    iterations: int = 0
    tol: float = ROOT_TOL

    def __len__(self):
        return self.roots.size

    def __iter__(self):
        return iter(self.roots)

    def distinct(self, cluster_tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
        """Cluster centroids with their multiplicities, in root order."""
        out = []
        for members in _clusters(self.roots, cluster_tol):
            out.append((complex(np.mean(self.roots[members])), len(members)))
        return out


def poly_eval(p, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    c = _coeffs(p)
    if c.size == 0:
        raise ValueError("empty polynomial")
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, c[-1], dtype=complex)
    for ck in c[-2::-1]:
        acc = acc * z + ck
    return complex(acc) if acc.ndim == 0 else acc


def poly_derivative(p) -> ComplexPolynomial:
    c = _coeffs(p)
    if c.size <= 1:
        return ComplexPolynomial([0.0])
    return ComplexPolynomial(c[1:] * np.arange(1, c.size))


def poly_trim(p, eps: float = TRIM_EPS) -> tuple[ComplexPolynomial, int]:
    """Drop negligible leading coefficients.

    Returns the trimmed polynomial and the number of coefficients removed.
    A coefficient is negligible when its magnitude is at most ``eps`` times
    the largest coefficient magnitude.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    c = _coeffs(p)
    mags = np.abs(c)
    top = mags.max() if mags.size else 0.0
    if top == 0.0:
        raise DegenerateInputError("zero polynomial")
    keep = np.flatnonzero(mags > eps * top)
    n = int(keep[-1]) + 1
    return ComplexPolynomial(c[:n]), c.size - n


def poly_from_roots(roots: Sequence[complex], leading: complex = 1.0) -> ComplexPolynomial:
    c = np.array([1.0 + 0j])
    for r in roots:
        c = np.convolve(c, [-complex(r), 1.0])
    return ComplexPolynomial(leading * c)


def poly_mul(p, q) -> ComplexPolynomial:
    return ComplexPolynomial(np.convolve(_coeffs(p), _coeffs(q)))


def poly_divmod(p, d) -> tuple[ComplexPolynomial, ComplexPolynomial]:
    """Long division ``p = q*d + r`` with ``deg r < deg d``."""
    num = _coeffs(p).copy()
    den, _ = poly_trim(d)
    den = den.coeffs
    m = den.size - 1
    if num.size - 1 < m:
        return ComplexPolynomial([0.0]), ComplexPolynomial(num)
    quot = np.zeros(num.size - m, dtype=complex)
    for k in range(num.size - 1, m - 1, -1):
        coef = num[k] / den[-1]
        quot[k - m] = coef
        num[k - m:k + 1] -= coef * den
    rem = num[:m] if m > 0 else np.zeros(1, dtype=complex)
    return ComplexPolynomial(quot), ComplexPolynomial(rem)


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    """Starting points on a circle sized by the coefficient bound, per row."""
    n = c.shape[1] - 1
    lead = np.abs(c[:, -1:])
    ratios = np.abs(c[:, :-1]) / lead
    powers = 1.0 / (n - np.arange(n))
    radius = np.max(np.where(ratios > 0, ratios ** powers, 0.0), axis=1)
    radius = np.where(radius > 0, radius, 1.0)
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return 0.5 * radius[:, None] * np.exp(1j * angles)[None, :]


def aberth_batch(coeffs, z0=None, max_iter: int = MAX_ITER, step_tol: float = 4 * _EPS):
    """Aberth-Ehrlich iteration on many polynomials of the same degree.

    Parameters
    ----------
    coeffs : array (m, n+1)
        Ascending coefficients, one polynomial per row.  The leading
        coefficient of every row must be nonzero.
    z0 : array (m, n), optional
        Initial guesses (e.g. roots of a nearby polynomial).
    max_iter : int
        Iteration cap.

    Returns
    -------
    roots : array (m, n)
    converged : bool array (m,)
    iterations : int
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim == 1:
        c = c[None, :]
    m, n1 = c.shape
    n = n1 - 1
    if n < 1:
        raise ValueError("degree must be at least 1")
    c = c / c[:, -1:]
    if n == 1:
        return -c[:, :1].copy(), np.ones(m, bool), 0

    z = _initial_guesses(c) if z0 is None else np.array(z0, dtype=complex)
    dc = c[:, 1:] * np.arange(1, n1)
    absc = np.abs(c)
    converged = np.zeros(m, bool)
    active = np.arange(m)
    offdiag = ~np.eye(n, dtype=bool)
    it = 0
    while active.size and it < max_iter:
        it += 1
        za = z[active]
        ca, dca = c[active], dc[active]
        pv = np.repeat(ca[:, -1:], n, axis=1)
        for k in range(n - 1, -1, -1):
            pv = pv * za + ca[:, k:k + 1]
        dv = np.repeat(dca[:, -1:], n, axis=1)
        for k in range(n - 2, -1, -1):
            dv = dv * za + dca[:, k:k + 1]
        # rows whose iterates sit exactly on a root
        exact = pv == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            diff = za[:, :, None] - za[:, None, :]
            inv = np.where(offdiag[None], 1.0 / np.where(offdiag[None], diff, 1.0), 0.0)
            corr = ratio / (1.0 - ratio * inv.sum(axis=2))
        corr = np.where(exact, 0.0, corr)
        bad = ~np.isfinite(corr)
        if bad.any():
            # nudge coincident iterates apart instead of dividing by zero
            corr = np.where(bad, 1e-3 * (1 + np.abs(za)) * np.exp(1j * (it + 1.0)), corr)
        z[active] = za - corr

        # a root is settled when the step is at rounding level or its
        # residual is at the Horner error bound
        mag = np.abs(z[active])
        bound = np.zeros_like(mag)
        for k in range(n, -1, -1):
            bound = bound * mag + absc[active, k:k + 1]
        done_step = np.abs(corr) <= step_tol * np.maximum(mag, 1e-300)
        done_res = np.abs(pv) <= 4 * n * _EPS * bound
        finished = np.all((done_step | done_res) & ~bad, axis=1)
        converged[active[finished]] = True
        active = active[~finished]
    return z, converged, it


def _residuals(c: np.ndarray, roots: np.ndarray) -> np.ndarray:
    mag = np.abs(roots)
    scale = np.zeros_like(mag)
    for ck in np.abs(c)[::-1]:
        scale = scale * mag + ck
    val = np.abs(poly_eval(c, roots))
    return np.divide(val, scale, out=val.copy(), where=scale > 0)


def _clusters(roots: np.ndarray, tol: float) -> list[list[int]]:
    """Group indices of roots closer than ``tol*max(1, |root|)`` (single link)."""
    n = roots.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(1.0, abs(roots[i]), abs(roots[j]))
            if abs(roots[i] - roots[j]) <= tol * scale:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def sort_roots(roots) -> np.ndarray:
    """Lexicographic (re, im) order; real parts are rounded so that values
    differing only by rounding noise compare equal."""
    roots = np.asarray(roots, dtype=complex)
    keys = sorted(range(roots.size), key=lambda k: (round(roots[k].real, 9), roots[k].imag))
    return roots[keys]


def poly_roots(p, tol: float = ROOT_TOL, trim_eps: float = TRIM_EPS,
               cluster_tol: float = CLUSTER_TOL, max_iter: int = MAX_ITER) -> RootSet:
    """All complex roots of ``p``.

    Raises
    ------
    DegenerateInputError
        If the trimmed polynomial is constant.
    ConvergenceError
        If some residual exceeds ``tol`` after ``max_iter`` iterations; the
        partial :class:`RootSet` is attached as ``.partial``.
    """
    q, _ = poly_trim(p, trim_eps)
    c = q.coeffs
    if c.size < 2:
        raise DegenerateInputError("polynomial has degree 0 after trimming")
    z, converged, it = aberth_batch(c[None, :], max_iter=max_iter)
    roots = sort_roots(z[0])
    res = _residuals(c, roots)
    mult = [0] * roots.size
    for members in _clusters(roots, cluster_tol):
        for k in members:
            mult[k] = len(members)
    out = RootSet(roots, res, tuple(mult), it, tol)
    if not converged[0] and np.max(res) > tol:
        raise ConvergenceError(
            f"root finder did not converge in {max_iter} iterations", partial=out)
    if np.max(res) > tol:
        raise ConvergenceError(
            f"root residual {np.max(res):.3g} exceeds tolerance {tol:.3g}", partial=out)
    return out


def quartic_discriminant(p) -> complex:
    """Discriminant of ``e + d z + c z^2 + b z^3 + a z^4``."""
    c = _coeffs(p)
    if c.size != 5 or c[4] == 0:
        raise DegenerateInputError("quartic_discriminant needs degree exactly 4")
    e, d, cc, b, a = c
    return complex(
        256 * a**3 * e**3 - 192 * a**2 * b * d * e**2 - 128 * a**2 * cc**2 * e**2
        + 144 * a**2 * cc * d**2 * e - 27 * a**2 * d**4 + 144 * a * b**2 * cc * e**2
        - 6 * a * b**2 * d**2 * e - 80 * a * b * cc**2 * d * e + 18 * a * b * cc * d**3
        + 16 * a * cc**4 * e - 4 * a * cc**3 * d**2 - 27 * b**4 * e**2
        + 18 * b**3 * cc * d * e - 4 * b**3 * d**3 - 4 * b**2 * cc**3 * e
        + b**2 * cc**2 * d**2)


def cayley_substitute(p, zero_tol: float = 1e-12) -> ComplexPolynomial:
    """Quartic ``Q(t)`` with ``P((1+it)/(1-it)) = -2i Q(t) / (1-it)^4``.

    For a self-inversive quartic such as the reflection quartic the result
    has real coefficients; imaginary parts below ``zero_tol`` (relative to
    the largest coefficient) are zeroed.  Unimodular roots ``e^{i phi}``
    other than ``-1`` map to real roots ``tan(phi/2)``.
    """
    c = _coeffs(p)
    if c.size != 5:
        raise DegenerateInputError("cayley_substitute needs a quartic")
    plus = np.array([1.0, 1j])    # 1 + i t
    minus = np.array([1.0, -1j])  # 1 - i t
    out = np.zeros(5, dtype=complex)
    for k, ck in enumerate(c):
        term = np.array([1.0 + 0j])
        for _ in range(k):
            term = np.convolve(term, plus)
        for _ in range(4 - k):
            term = np.convolve(term, minus)
        out += ck * term
    out /= -2j
    scale = np.max(np.abs(out)) or 1.0
    small_im = np.abs(out.imag) <= zero_tol * scale
    out = np.where(small_im, out.real + 0j, out)
    return ComplexPolynomial(out)


__all__ = [
    "ComplexPolynomial", "RootSet", "poly_eval", "poly_derivative", "poly_trim",
    "poly_from_roots", "poly_mul", "poly_divmod", "aberth_batch", "poly_roots",
    "quartic_discriminant", "cayley_substitute", "sort_roots",
]
