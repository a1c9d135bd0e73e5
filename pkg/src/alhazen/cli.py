"""Command-line front end.

Every subcommand prints one document on stdout (JSON by default; CSV or SVG
for the curve-valued commands ``caustic`` and ``levelset``).  Exit status is
0 on success, 1 when a solver rejects the input and 2 for malformed
arguments.  ``--figure PATH`` additionally renders a matplotlib figure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from . import caustic as ca
from . import conic as cn
from . import disk as dk
from . import polynomial as pl
from . import smetric as sm
from .errors import AlhazenError
from .export import caustic_csv, decode_complex, dumps, levelset_csv, svg_polylines

_FLOAT = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>[+-]?{_FLOAT})(?:(?P<im>[+-]{_FLOAT})[ij])?$"
    rf"|^(?P<pure>[+-]?{_FLOAT})[ij]$"
)

DOMAIN_KINDS = {
    "ellipse": sm.DomainKind.SUM_LESS,
    "hyperbola": sm.DomainKind.DIFF_LESS,
    "sum-less": sm.DomainKind.SUM_LESS,
    "sum-greater": sm.DomainKind.SUM_GREATER,
    "diff-less": sm.DomainKind.DIFF_LESS,
    "diff-greater": sm.DomainKind.DIFF_GREATER,
}


# -- argument grammar -------------------------------------------------------

def parse_complex(text: str) -> complex:
    """``[-]<float>[+|-]<float>i``; a bare real or a bare imaginary part is
    also accepted.  NaN and infinities are rejected."""
    m = _COMPLEX_RE.match(text.strip().replace(" ", ""))
    if m is None:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}")
    if m.group("pure") is not None:
        return complex(0.0, float(m.group("pure")))
    im = m.group("im")
    return complex(float(m.group("re")), float(im) if im else 0.0)


def parse_real(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not np.isfinite(x):
        raise argparse.ArgumentTypeError("non-finite number")
    return x


def parse_complex_list(text: str) -> list[complex]:
    return [parse_complex(t) for t in text.split(",")]


def parse_domain(text: str) -> dict:
    """``kind:f1,f2,r`` or ``disk:c,R``."""
    kind, sep, rest = text.partition(":")
    kind = kind.strip().lower()
    parts = rest.split(",") if sep else []
    if kind == "disk":
        if len(parts) != 2:
            raise argparse.ArgumentTypeError("disk domain is disk:center,radius")
        c, R = parse_complex(parts[0]), parse_real(parts[1])
        return {"kind": "sum-less", "f1": c, "f2": c, "r": 2 * R}
    if kind not in DOMAIN_KINDS or len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"domain must be disk:c,R or <kind>:f1,f2,r with kind in {sorted(DOMAIN_KINDS)}")
    return {"kind": DOMAIN_KINDS[kind].value, "f1": parse_complex(parts[0]),
            "f2": parse_complex(parts[1]), "r": parse_real(parts[2])}


def parse_levels(text: str) -> list[float]:
    """``start:stop:step`` (inclusive) or a comma separated list."""
    try:
        if ":" in text:
            a, b, h = (parse_real(t) for t in text.split(":"))
            levels = [float(x) for x in sm.level_grid(a, b, h)]
        else:
            levels = [parse_real(t) for t in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not levels:
        raise argparse.ArgumentTypeError("no levels")
    return levels


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


# -- reports ----------------------------------------------------------------

@dataclass
class Report:
    result: dict
    tolerances: dict = field(default_factory=dict)
    csv: Optional[Callable[[], str]] = None
    svg: Optional[Callable[[], str]] = None
    figure: Optional[Callable[[str], None]] = None


def _roots_table(coeffs, roots) -> list[dict]:
    c = np.asarray(coeffs, dtype=complex)
    res = pl._residuals(c, np.asarray(roots, dtype=complex))
    return [{"z": complex(r), "modulus": abs(r), "residual": float(e)}
            for r, e in zip(roots, res)]


def _domain(inp: dict) -> sm.ConicDomain:
    d = inp["domain"]
    return sm.ConicDomain(d["f1"], d["f2"], d["r"], sm.DomainKind(d["kind"]))


def _domain_outline(dom: sm.ConicDomain, points=()) -> list[np.ndarray]:
    w = dom.boundary_samples(1440, points=points)
    if dom.kind.is_sum:
        return [np.append(w, w[:1])]
    return [w[:720], w[720:]]


def run_disk(inp: dict) -> Report:
    pair = dk.PointPair(inp["z1"], inp["z2"])
    sol = dk.pa_points_disk(pair)
    quartic = dk.pa_quartic(pair)
    result = {
        "quartic": quartic.coeffs,
        "roots": _roots_table(quartic.coeffs, sol.all_roots.roots),
        "reflection_points": list(sol.reflection_points),
        "minimizer": sol.minimizer,
        "blocked": sol.blocked,
        "s": sol.metric_value,
    }
    if pair.z1 != 0 and pair.z2 != 0:
        cls = dk.classify_roots(pair)
        result["classification"] = {"variant": cls.variant, "discriminant": cls.discriminant_value,
                                    "E1": dk.e1(pair), "E2": dk.e2(pair)}

    def fig(path):
        from .plotting import plot_reflection
        plot_reflection(path, pair.z1, pair.z2, sol.reflection_points, sol.minimizer,
                        title="reflection points on the unit circle")

    return Report(result, {"unimodular": dk.UNIMODULAR_TOL, "root": pl.ROOT_TOL}, figure=fig)


def run_apollonius(inp: dict) -> Report:
    pair = dk.PointPair(inp["z1"], inp["z2"])
    sol = dk.pa_points_apollonius(pair)
    T = dk.apollonius_quartic(pair)
    result = {
        "ratio_quartic": T.coeffs.real,
        "ratio_roots": _roots_table(T.coeffs, sol.all_roots.roots),
        "reflection_points": list(sol.reflection_points),
        "minimizer": sol.minimizer,
        "blocked": sol.blocked,
        "s": sol.metric_value,
    }

    def fig(path):
        from .plotting import plot_reflection
        plot_reflection(path, pair.z1, pair.z2, sol.reflection_points, sol.minimizer,
                        title="reflection points (ratio quartic)")

    return Report(result, {"root": pl.ROOT_TOL, "ratio": 1e-7}, figure=fig)


def run_classify(inp: dict) -> Report:
    pair = dk.PointPair(inp["z1"], inp["z2"])
    cls = dk.classify_roots(pair)
    result = {
        "variant": cls.variant,
        "discriminant": cls.discriminant_value,
        "discriminant_scale": dk.discriminant_scale(pair),
        "E1": dk.e1(pair),
        "E2": dk.e2(pair),
        "unimodular_count": dk.unimodular_count(cls.roots),
        "roots": _roots_table(dk.pa_quartic(pair).coeffs, cls.roots),
    }

    def fig(path):
        from .plotting import plot_reflection
        uni = [r for r in cls.roots if abs(abs(r) - 1) <= dk.UNIMODULAR_TOL]
        plot_reflection(path, pair.z1, pair.z2, uni, title=cls.variant.value)

    return Report(result, {"classify": dk.CLASSIFY_TOL, "unimodular": dk.UNIMODULAR_TOL},
                  figure=fig)


def run_caustic(inp: dict) -> Report:
    z1, n = inp["z1"], inp["n"]
    curve = ca.caustic_sample(z1, n)
    cusps = ca.caustic_cusps(z1) if z1 != 0 else []
    res = curve.residuals()
    result = {
        "samples": [{"phi": float(p), "z": complex(z)} for p, z in zip(curve.phi, curve.points)],
        "dropped": list(curve.dropped),
        "closed": curve.closed,
        "max_scaled_residual": float(res.max()) if res.size else 0.0,
        "e1_circle": curve.e1_circle,
        "e2_circle": curve.e2_circle,
        "cusps": [{"phi": t, "z": z} for t, z in cusps],
    }
    branches = ca.caustic_branches(curve)

    def fig(path):
        from .plotting import plot_caustic
        plot_caustic(path, z1, branches, curve.e1_circle, curve.e2_circle, [z for _, z in cusps])

    return Report(result, {"singular": ca.SINGULAR_TOL},
                  csv=lambda: caustic_csv(curve.phi, curve.points),
                  svg=lambda: svg_polylines(branches), figure=fig)


def _conic_from_inputs(inp: dict) -> cn.Conic:
    if "coeffs" in inp:
        a, b, p, q = inp["coeffs"]
        return cn.Conic(a, b, p.real, q.real)
    return cn.conic_from_foci(inp["foci"][0], inp["foci"][1], inp["r"])


def run_conic(inp: dict) -> Report:
    C = _conic_from_inputs(inp)
    z1, z2 = inp["z1"], inp["z2"]
    A = cn.canonical_transform(z1, z2)
    Cc = cn.transform_conic(C, A)
    sol = cn.tangency_points(Cc)
    back = A.inverse()
    W = np.asarray(sol.f4.W)
    Cn = Cc.normalized()
    result = {
        "conic": {"a": C.a, "b": C.b, "p": C.p, "q": C.q},
        "canonical_conic": {"a": Cn.a, "b": Cn.b, "p": Cn.p, "q": Cn.q},
        "class": cn.classify_conic(C).value,
        "f4": W,
        "roots": _roots_table(W, sol.all_roots),
        "tangency_points": [
            {"z": t.point, "on_curve_residual": t.on_curve_residual, "sum": t.sum,
             "kind": t.tangency_kind, "original_frame": complex(back(t.point))}
            for t in sol.points],
        "minimizer_index": sol.minimizer_index,
        "minimizer": None if sol.minimizer is None else sol.minimizer.point,
        "blocked": sol.blocked,
        "s": 1.0 if sol.blocked else 2.0 / sol.minimizer.sum,
    }

    def fig(path):
        from .plotting import plot_reflection
        pts = [complex(back(t.point)) for t in sol.points]
        mn = None if sol.minimizer is None else complex(back(sol.minimizer.point))
        plot_reflection(path, z1, z2, pts, mn, conic=C, title=f"{result['class']} mirror")

    return Report(result, {"on_curve": cn.ON_CURVE_TOL, "parallel": cn.PARALLEL_TOL,
                           "root": pl.ROOT_TOL}, figure=fig)


def run_smetric(inp: dict) -> Report:
    dom = _domain(inp)
    z1, z2 = inp["z1"], inp["z2"]
    sol = sm.smetric_solution(z1, z2, dom)
    result = {"s": sol.value, "blocked": sol.blocked, "minimizer_canonical": sol.minimizer,
              "boundary_point": None}
    if sol.minimizer is not None:
        result["boundary_point"] = complex(sol.transform.inverse()(sol.minimizer))
    if inp.get("bruteforce"):
        result["bruteforce"] = sm.smetric_bruteforce(z1, z2, dom, inp["bruteforce"])

    def fig(path):
        from .plotting import plot_reflection
        bp = result["boundary_point"]
        plot_reflection(path, z1, z2, [bp] if bp is not None else [], bp,
                        boundary=_domain_outline(dom, (z1, z2)), title=f"s = {sol.value:.6g}")

    return Report(result, {"on_curve": cn.ON_CURVE_TOL, "root": pl.ROOT_TOL}, figure=fig)


def run_levelset(inp: dict) -> Report:
    dom = _domain(inp)
    z0 = inp["center"]
    sets = sm.levelsets(dom, z0, inp["levels"], inp["rays"])
    out = []
    edge_pts = []
    for ls in sets:
        entry = {"level": ls.level, "points": ls.points, "unresolved_rays": list(ls.unresolved_rays),
                 "max_error": ls.max_error()}
        if ls.points.size >= 3:
            rep = sm.conjecture_edge_report(dom, z0, ls)
            entry["edges"] = {"points": rep.edges, "conic_constant": rep.constant,
                              "residuals": rep.residuals, "max_residual": rep.max_residual}
            edge_pts.extend(rep.edges)
        out.append(entry)
    result = {"levels": out}
    tol = {"bisection_width": sm.BISECT_WIDTH, "level": sm.LEVEL_TOL,
           "scan_samples": sm.SCAN_SAMPLES, "edge_angle_deg": 30.0, "rays": inp["rays"]}

    def svg():
        return svg_polylines([run for ls in sets for run in ls.runs()])

    def fig(path):
        from .plotting import plot_levelsets
        plot_levelsets(path, z0, _domain_outline(dom, (z0,)), sets, edge_pts)

    return Report(result, tol, csv=lambda: levelset_csv(sets), svg=svg, figure=fig)


COMMANDS = {
    "disk": run_disk,
    "apollonius": run_apollonius,
    "classify": run_classify,
    "caustic": run_caustic,
    "conic": run_conic,
    "smetric": run_smetric,
    "levelset": run_levelset,
}


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "svg"), default="json",
                        help="csv/svg only for caustic and levelset")
    common.add_argument("--figure", metavar="PATH", help="also render a figure (png, pdf, svg)")

    parser = argparse.ArgumentParser(
        prog="alhazen",
        description="Reflection points on circles and conics, catacaustics and the "
                    "triangular ratio metric.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, hlp in (("disk", "reflection points on the unit circle"),
                      ("apollonius", "same, via the circle of Apollonius"),
                      ("classify", "root structure of the reflection quartic")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--z1", type=parse_complex, required=True)
        p.add_argument("--z2", type=parse_complex, required=True)

    p = sub.add_parser("caustic", parents=[common], help="catacaustic of the unit circle")
    p.add_argument("--z1", type=parse_complex, required=True, help="radiant point")
    p.add_argument("--n", type=_positive_int, default=360, help="number of samples")

    p = sub.add_parser("conic", parents=[common], help="tangency points on a conic mirror")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--foci", type=parse_complex_list, metavar="F1,F2")
    src.add_argument("--coeffs", type=parse_complex_list, metavar="A,B,P,Q",
                     help="Hermitian coefficients of c(z)")
    p.add_argument("--r", type=parse_real, help="focal constant (with --foci)")
    p.add_argument("--kind", choices=sorted(DOMAIN_KINDS),
                   help="informational; the tangency problem only needs the curve")
    p.add_argument("--z1", type=parse_complex, default=1 + 0j)
    p.add_argument("--z2", type=parse_complex, default=-1 + 0j)

    p = sub.add_parser("smetric", parents=[common], help="triangular ratio metric")
    p.add_argument("--domain", type=parse_domain, required=True, metavar="KIND:F1,F2,R")
    p.add_argument("--z1", type=parse_complex, required=True)
    p.add_argument("--z2", type=parse_complex, required=True)
    p.add_argument("--bruteforce", type=_positive_int, metavar="N",
                   help="also report the sampled supremum over N boundary points")

    p = sub.add_parser("levelset", parents=[common], help="contours of s(z0, .)")
    p.add_argument("--domain", type=parse_domain, required=True, metavar="KIND:F1,F2,R")
    p.add_argument("--center", type=parse_complex, required=True)
    p.add_argument("--levels", type=parse_levels, required=True, metavar="A:B:STEP")
    p.add_argument("--rays", type=_positive_int, default=720)

    p = sub.add_parser("replay", help="re-run the inputs of a JSON document")
    p.add_argument("document", help="JSON file written by this tool, or - for stdin")
    p.add_argument("--figure", metavar="PATH")
    return parser


def _inputs_from_args(args) -> dict:
    cmd = args.command
    if cmd in ("disk", "apollonius", "classify"):
        return {"z1": args.z1, "z2": args.z2}
    if cmd == "caustic":
        return {"z1": args.z1, "n": args.n}
    if cmd == "conic":
        inp = {"z1": args.z1, "z2": args.z2}
        if args.foci is not None:
            if len(args.foci) != 2 or args.r is None:
                raise argparse.ArgumentTypeError("--foci needs two points and --r")
            inp.update(foci=args.foci, r=args.r)
        else:
            if len(args.coeffs) != 4:
                raise argparse.ArgumentTypeError("--coeffs needs a,b,p,q")
            inp["coeffs"] = args.coeffs
        if args.kind:
            inp["kind"] = args.kind
        return inp
    if cmd == "smetric":
        inp = {"domain": args.domain, "z1": args.z1, "z2": args.z2}
        if args.bruteforce:
            inp["bruteforce"] = args.bruteforce
        return inp
    if cmd == "levelset":
        if args.rays < 4:
            raise argparse.ArgumentTypeError("--rays must be at least 4")
        return {"domain": args.domain, "center": args.center, "levels": args.levels,
                "rays": args.rays}
    raise argparse.ArgumentTypeError(f"unknown command {cmd}")


_COMPLEX_KEYS = {"z1", "z2", "center", "f1", "f2"}


def _decode_inputs(obj):
    """Inverse of the JSON encoding for an ``inputs`` block."""
    out = {}
    for k, v in obj.items():
        if k in _COMPLEX_KEYS:
            out[k] = decode_complex(v)
        elif k in ("foci", "coeffs"):
            out[k] = [decode_complex(x) for x in v]
        elif k == "domain":
            out[k] = _decode_inputs(v)
        elif k == "levels":
            out[k] = [float(x) for x in v]
        elif k == "r":
            out[k] = float(v)
        else:
            out[k] = v
    return out


def document(command: str, inp: dict, rep: Report) -> dict:
    return {"tool": "alhazen", "version": __version__, "command": command,
            "inputs": inp, "tolerances": rep.tolerances, "result": rep.result}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "json")
    try:
        if args.command == "replay":
            text = sys.stdin.read() if args.document == "-" else open(args.document).read()
            doc = json.loads(text)
            command = doc["command"]
            inp = _decode_inputs(doc["inputs"])
            if command not in COMMANDS:
                raise argparse.ArgumentTypeError(f"unknown command {command!r}")
        else:
            command = args.command
            inp = _inputs_from_args(args)
    except (argparse.ArgumentTypeError, OSError, ValueError, KeyError, TypeError) as exc:
        parser.exit(2, f"alhazen: error: {exc}\n")

    if fmt != "json" and command not in ("caustic", "levelset"):
        parser.exit(2, f"alhazen: error: --format {fmt} is only available for caustic and levelset\n")

    try:
        rep = COMMANDS[command](inp)
    except (AlhazenError, ValueError, ArithmeticError) as exc:
        print(f"alhazen: {exc}", file=sys.stderr)
        return 1

    if args.figure:
        rep.figure(args.figure)
    if fmt == "csv":
        text = rep.csv()
    elif fmt == "svg":
        text = rep.svg()
    else:
        text = dumps(document(command, inp, rep))
    try:
        sys.stdout.write(text)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); not an error of ours
        sys.stderr.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
