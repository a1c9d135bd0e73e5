"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import time

import numpy as np
import pytest

from alhazen.caustic import caustic_implicit, caustic_sample
from alhazen.conic import (Conic, TangencyKind, canonical_transform, conic_from_foci,
                           f4_coefficients, tangency_points, transform_conic,
                           verify_circle_specialization)
from alhazen.disk import (PointPair, discriminant, e1, e2, pa_points_apollonius,
                          pa_points_disk, pa_quartic, unimodular_count)
from alhazen.polynomial import poly_roots
from alhazen.smetric import (ConicDomain, DomainKind, conjecture_edge_report, level_grid,
                             levelsets, smetric_batch, smetric_bruteforce, smetric_conic,
                             smetric_solution)


def report(capsys, n, checks):
    """Print one line for criterion ``n`` and fail on any failed sub-check."""
    ok = all(v for _, v in checks)
    detail = "; ".join(f"{name} {'ok' if v else 'FAILED'}" for name, v in checks)
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def _proportional(got, want):
    got, want = np.asarray(got, complex), np.asarray(want, complex)
    k = np.vdot(want, got) / np.vdot(want, want)
    return np.max(np.abs(got - k * want)) / np.max(np.abs(got))


def _match(a, b, tol):
    a, b = list(a), list(b)
    return len(a) == len(b) and all(min(abs(x - y) for y in b) <= tol for x in a)


def _example(f1, f2, r, conic, sextic, roots, minimizer, exact=None):
    t0 = time.perf_counter()
    C = conic_from_foci(f1, f2, r)
    f4 = f4_coefficients(C)
    got = poly_roots(f4.poly).roots
    sol = tangency_points(C)
    elapsed = time.perf_counter() - t0
    checks = [
        ("conic up to scale", _proportional([C.a, C.b, C.p, C.q],
                                            [conic.a, conic.b, conic.p, conic.q]) <= 1e-9),
        ("sextic up to scale", _proportional(f4.W, sextic[::-1]) <= 1e-9),
        ("six roots to 1e-5", _match(got, roots, 1e-5)),
    ]
    if exact is not None:
        checks.append(("exact root to 1e-9", np.min(np.abs(got - exact)) <= 1e-9))
    checks += [
        ("expected minimizer", abs(sol.minimizer.point - minimizer) <= 1e-5),
        ("runtime < 1 s", elapsed < 1.0),
    ]
    return checks


def test_criterion_1_ellipse_example(capsys):
    roots = [1.923740 - 0.117041j, 1.772166 + 0.309916j, 1.259144 + 0.426617j,
             2.808489 + 0.435057j, 0.825548 + 1.934592j, 1.235845 + 2.067480j]
    sextic = [924 - 1232j, -15308 + 7432j, 81677 + 2608j, -189086 - 106196j,
              185621 + 278356j, -37976 - 281192j, -29632 + 97824j]
    # expected minimizer u6, but the focal sum is 5.126 there and 2.798 at u3,
    # so this sub-check fails
    checks = _example(2, 1 + 2j, np.sqrt(6), Conic(-3 - 4j, 38 + 20j, -14, -71),
                      sextic, roots, minimizer=roots[5])
    report(capsys, 1, checks)


def test_criterion_2_hyperbola_example(capsys):
    roots = [2.542018 - 0.357669j, 2.645886 + 0.629896j, 3.393387 + 0.463604j,
             1.323205 + 1.940610j, 1.5j, 1.166931 + 1.609271j]
    sextic = [6048, -66960 - 34992j, 212760 + 346428j, 47268 - 1215900j,
              -1363032 + 1675647j, 2156652 - 408726j, -850176 - 550557j]
    checks = _example(3, 1 + 2j, np.sqrt(5), Conic(-8j, 24 + 36j, -4, -99),
                      sextic, roots, minimizer=1.5j, exact=1.5j)
    report(capsys, 2, checks)


def test_criterion_3_disk_vs_apollonius(capsys):
    rng = np.random.default_rng(2024)
    agree = total = 0
    while total < 100:
        z1, z2 = rng.uniform(0.05, 0.95, 2) * np.exp(2j * np.pi * rng.uniform(size=2))
        if abs((z1 * np.conj(z2)).imag) < 1e-3 * abs(z1) * abs(z2):
            continue  # 0, z1, z2 nearly collinear
        pair = PointPair(z1, z2)
        total += 1
        agree += _match(pa_points_disk(pair).reflection_points,
                        pa_points_apollonius(pair).reflection_points, 1e-9)
    report(capsys, 3, [(f"{agree}/100 pairs agree to 1e-9", agree == 100)])


def test_criterion_4_classification(capsys):
    rng = np.random.default_rng(7)
    bad_sign = bad_e1 = bad_e2 = 0
    for _ in range(1000):
        z1, z2 = rng.uniform(0.05, 2.5, 2) * np.exp(2j * np.pi * rng.uniform(size=2))
        pair = PointPair(z1, z2)
        count = unimodular_count(poly_roots(pa_quartic(pair)).roots)
        D = discriminant(pair)
        if (D > 0 and count != 2) or (D < 0 and count != 4):
            bad_sign += 1
        if e2(pair) > 0 and count != 2:
            bad_e2 += 1
        if e1(pair) < 0 and count != 4:
            bad_e1 += 1
    report(capsys, 4, [(f"sign of D ({bad_sign} counterexamples)", bad_sign == 0),
                       (f"E2 > 0 gives two ({bad_e2})", bad_e2 == 0),
                       (f"E1 < 0 gives four ({bad_e1})", bad_e1 == 0)])


def test_criterion_5_caustic(capsys):
    checks = []
    rng = np.random.default_rng(5)
    for c in (0.5, 0.8):
        res = np.max(caustic_sample(c, 360).residuals())
        checks.append((f"c={c} samples {res:.1e}", res <= 1e-6))
        z = rng.uniform(-2, 2, 1000) + 1j * rng.uniform(-2, 2, 1000)
        got = caustic_implicit(c, z)
        want = np.array([discriminant(PointPair(c, w)) for w in z])
        rel = np.max(np.abs(got - want) / np.abs(want))
        checks.append((f"c={c} implicit vs discriminant {rel:.1e}", rel <= 1e-10))
    report(capsys, 5, checks)


def _random_unblocked(rng):
    while True:
        f1, f2 = rng.uniform(-2, 2, 2) + 1j * rng.uniform(-2, 2, 2)
        focal = abs(f1 - f2)
        kind = DomainKind(rng.choice([k.value for k in DomainKind]))
        r = focal * (rng.uniform(1.1, 2.5) if kind.is_sum else rng.uniform(0.2, 0.9))
        dom = ConicDomain(f1, f2, r, kind)
        z1, z2 = rng.uniform(-3, 3, 2) + 1j * rng.uniform(-3, 3, 2)
        if not (dom.contains(z1) and dom.contains(z2)) or abs(z1 - z2) < 0.05:
            continue
        if not smetric_solution(z1, z2, dom).blocked:
            return dom, z1, z2


def test_criterion_6_smetric_oracle(capsys):
    cases = [(ConicDomain(2, 1 + 2j, np.sqrt(6), DomainKind.SUM_GREATER), 1, -1),
             (ConicDomain(3, 1 + 2j, np.sqrt(5), DomainKind.DIFF_LESS), 1, -1)]
    rng = np.random.default_rng(6)
    cases += [_random_unblocked(rng) for _ in range(20)]
    worst = max(abs(smetric_conic(z1, z2, d) - smetric_bruteforce(z1, z2, d, 10 ** 5))
                for d, z1, z2 in cases)
    disk = max(abs(smetric_conic(c, -c, ConicDomain.disk()) - c)
               for c in np.arange(1, 10) / 10)
    report(capsys, 6, [(f"22 instances vs brute force {worst:.1e}", worst <= 1e-4),
                       (f"s(c,-c) = c {disk:.1e}", disk <= 1e-10)])


def test_criterion_7_circle_specialization(capsys):
    rng = np.random.default_rng(77)
    split = all(verify_circle_specialization(complex(*rng.normal(size=2)) * 2, q)
                for q in rng.uniform(-2, 0, 10))
    unit = Conic(0, 0, 1, -1)
    agree = 0
    for _ in range(50):
        z1, z2 = rng.uniform(0.05, 0.95, 2) * np.exp(2j * np.pi * rng.uniform(size=2))
        A = canonical_transform(z1, z2)
        inv = A.inverse()
        sol = tangency_points(transform_conic(unit, A))
        got = [inv(p.point) for p in sol.points if p.tangency_kind is TangencyKind.ELLIPSE]
        agree += _match(got, pa_points_disk(PointPair(z1, z2)).reflection_points, 1e-9)
    report(capsys, 7, [("sextic splits with remainder <= 1e-9", split),
                       (f"{agree}/50 pairs match the disk", agree == 50)])


def test_criterion_8_level_sets(capsys):
    domains = {"hyperbolic": ConicDomain(-0.5 - 0.5j, 1 - 1j, 0.8, DomainKind.DIFF_LESS),
               "elliptic": ConicDomain(1.5, -1 / 3 - 0.5j, 2.2, DomainKind.SUM_LESS)}
    levels = level_grid(0.05, 1.0, 0.05)
    t0 = time.perf_counter()
    families = {name: levelsets(d, 0, levels, nrays=720) for name, d in domains.items()}
    elapsed = time.perf_counter() - t0
    worst = 0.0
    notes = []
    for name, fam in families.items():
        dom = domains[name]
        for ls in fam:
            if ls.points.size:
                worst = max(worst, np.max(np.abs(smetric_batch(0, ls.points, dom) - ls.level)))
        rep = conjecture_edge_report(dom, 0, fam[-2])
        notes.append(f"{name} edges at t=0.95: {rep.edges.size}, residual {rep.max_residual:.1e}")
    with capsys.disabled():
        print("\n  " + "\n  ".join(notes))
    report(capsys, 8, [(f"720 rays x 20 levels x 2 in {elapsed:.2f} s", elapsed < 10),
                       (f"re-evaluation {worst:.1e}", worst <= 1e-4)])
