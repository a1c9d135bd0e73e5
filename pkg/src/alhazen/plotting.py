"""Matplotlib figures for the CLI report path (rendered off-screen)."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _unit_circle(ax, **kw):
    t = np.linspace(0, 2 * np.pi, 721)
    ax.plot(np.cos(t), np.sin(t), color=kw.pop("color", "0.3"), lw=kw.pop("lw", 1.0), **kw)


def _generalized_circle(ax, circ: dict, window: float, **kw):
    if circ is None:
        return
    if circ["kind"] == "circle":
        t = np.linspace(0, 2 * np.pi, 721)
        z = circ["center"] + circ["radius"] * np.exp(1j * t)
    else:
        n = circ["normal"]
        s = np.linspace(-2 * window, 2 * window, 3)
        z = circ["point"] + 1j * n * s
    ax.plot(z.real, z.imag, **kw)


def _finish(fig, ax, path: str, title: Optional[str] = None):
    ax.set_aspect("equal")
    ax.grid(True, lw=0.3, alpha=0.5)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_reflection(path: str, z1: complex, z2: complex, points: Sequence[complex],
                    minimizer: Optional[complex] = None, boundary: Optional[Sequence] = None,
                    conic=None, title: Optional[str] = None):
    """Mirror, sources and the broken paths through each reflection point.

    The mirror is the unit circle unless ``boundary`` (polylines) or
    ``conic`` (drawn as the zero contour of ``c``) is given.
    """
    fig, ax = plt.subplots(figsize=(5, 5))
    if conic is not None:
        pts = np.array([z1, z2, *points])
        c = pts.mean()
        R = 1.5 * max(np.max(np.abs(pts - c)), 1.0)
        x = np.linspace(c.real - R, c.real + R, 600)
        y = np.linspace(c.imag - R, c.imag + R, 600)
        X, Y = np.meshgrid(x, y)
        ax.contour(X, Y, conic(X + 1j * Y), levels=[0.0], colors="0.3", linewidths=1.0)
    elif boundary is None:
        _unit_circle(ax)
    else:
        for seg in boundary:
            ax.plot(seg.real, seg.imag, color="0.3", lw=1.0)
    for u in points:
        style = dict(color="tab:red", lw=1.4) if u == minimizer else dict(color="tab:blue", lw=0.7, ls="--")
        ax.plot([z1.real, u.real, z2.real], [z1.imag, u.imag, z2.imag], **style)
        ax.plot([u.real], [u.imag], "o", color=style["color"], ms=4)
    ax.plot([z1.real, z2.real], [z1.imag, z2.imag], "ks", ms=5)
    _finish(fig, ax, path, title)


def plot_caustic(path: str, z1: complex, segments: Sequence[np.ndarray],
                 e1: Optional[dict] = None, e2: Optional[dict] = None,
                 cusps: Sequence[complex] = ()):
    fig, ax = plt.subplots(figsize=(5, 5))
    window = max(1.5, 1.5 * abs(z1))
    _unit_circle(ax)
    for seg in segments:
        ax.plot(seg.real, seg.imag, color="tab:red", lw=1.6)
    _generalized_circle(ax, e1, window, color="tab:green", lw=0.8, ls="--", label="E1 = 0")
    _generalized_circle(ax, e2, window, color="tab:purple", lw=0.8, ls=":", label="E2 = 0")
    for c in cusps:
        ax.plot([c.real], [c.imag], "k^", ms=4)
    ax.plot([z1.real], [z1.imag], "ko", ms=4)
    ax.set_xlim(-window, window)
    ax.set_ylim(-window, window)
    if e1 is not None:
        ax.legend(fontsize=7, loc="upper right")
    _finish(fig, ax, path, f"catacaustic, radiant {z1:.4g}")


def plot_levelsets(path: str, center: complex, boundary: Sequence[np.ndarray],
                   levels: Sequence, edges: Sequence[complex] = ()):
    fig, ax = plt.subplots(figsize=(6, 5))
    for seg in boundary:
        ax.plot(seg.real, seg.imag, color="k", lw=1.2)
    cmap = plt.get_cmap("viridis")
    for i, ls in enumerate(levels):
        pts = np.asarray(ls.points)
        if pts.size == 0:
            continue
        color = cmap(i / max(len(levels) - 1, 1))
        for run in ls.runs():
            ax.plot(run.real, run.imag, color=color, lw=0.8)
    if len(edges):
        e = np.asarray(edges)
        ax.plot(e.real, e.imag, "r.", ms=4)
    ax.plot([center.real], [center.imag], "k+", ms=8)
    # frame the interior contours; the level-one set can run far out
    inner = [ls for ls in levels if ls.level < 1] or list(levels)
    allpts = np.concatenate([np.asarray(ls.points) for ls in inner if len(ls.points)]
                            or [np.array([center])])
    pad = 0.3 * max(np.ptp(allpts.real), np.ptp(allpts.imag), 1e-9)
    ax.set_xlim(allpts.real.min() - pad, allpts.real.max() + pad)
    ax.set_ylim(allpts.imag.min() - pad, allpts.imag.max() + pad)
    _finish(fig, ax, path, "contours of s(z0, .)")
