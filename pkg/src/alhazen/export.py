"""Serialisation of results: JSON documents, CSV tables and SVG polylines.

JSON floats use Python's shortest round-trip representation, so a document
read back yields bit-identical numbers.  Complex numbers are written as
``{"re": x, "im": y}``.
"""

from __future__ import annotations

import enum
import io
import json
import math
from typing import Iterable, Sequence

import numpy as np


def encode(obj):
    """Convert results into JSON-compatible structures."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def _num(x):
    x = float(x)
    if math.isfinite(x):
        return x
    # JSON has no inf/nan; keep them readable and explicit
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def decode_complex(obj) -> complex:
    if isinstance(obj, dict):
        return complex(float(obj["re"]), float(obj["im"]))
    return complex(obj)


def dumps(doc: dict) -> str:
    return json.dumps(encode(doc), indent=2, allow_nan=False) + "\n"


def _g(x: float) -> str:
    return format(float(x), ".17g")


def csv_table(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_g(v) for v in row) + "\n")
    return buf.getvalue()


def caustic_csv(phi, points) -> str:
    pts = np.asarray(points, dtype=complex)
    return csv_table(("phi", "re", "im"), zip(phi, pts.real, pts.imag))


def levelset_csv(levels) -> str:
    """One block of rows per level, blocks separated by a blank line."""
    blocks = []
    for ls in levels:
        pts = np.asarray(ls.points, dtype=complex)
        blocks.append(csv_table(("level", "re", "im"),
                                ((ls.level, z.real, z.imag) for z in pts)))
    return "\n".join(blocks)


def svg_polylines(polylines: Sequence[Sequence[complex]], closed: Sequence[bool] = (),
                  width: int = 600, stroke: float = 1.0) -> str:
    """Polylines in an SVG whose viewBox covers the data with a 5% margin.

    The y axis is flipped so the picture matches the complex plane.
    """
    lines = [np.asarray(p, dtype=complex) for p in polylines]
    lines = [p[np.isfinite(p)] for p in lines]
    allpts = np.concatenate([p for p in lines if p.size] or [np.zeros(1, complex)])
    x0, x1 = allpts.real.min(), allpts.real.max()
    y0, y1 = allpts.imag.min(), allpts.imag.max()
    w = max(x1 - x0, 1e-12)
    h = max(y1 - y0, 1e-12)
    mx, my = 0.05 * w, 0.05 * h
    vb = (x0 - mx, -(y1 + my), w + 2 * mx, h + 2 * my)
    height = int(round(width * vb[3] / vb[2])) or 1
    sw = stroke * vb[2] / width
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="{_g(vb[0])} {_g(vb[1])} {_g(vb[2])} {_g(vb[3])}">'
    ]
    closed = list(closed) + [False] * (len(lines) - len(closed))
    for pts, cl in zip(lines, closed):
        if pts.size < 2:
            continue
        coords = " ".join(f"{_g(z.real)},{_g(-z.imag)}" for z in pts)
        tag = "polygon" if cl else "polyline"
        out.append(f'  <{tag} fill="none" stroke="black" stroke-width="{_g(sw)}" '
                   f'points="{coords}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
