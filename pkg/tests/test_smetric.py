import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from alhazen.conic import Similarity
from alhazen.disk import PointPair, pa_points_disk
from alhazen.errors import DegenerateInputError, DomainError
from alhazen.smetric import (ConicDomain, DomainKind, conjecture_edge_report,
                             conjecture_edge_residual, detect_edges, level_grid, levelset,
                             levelsets, smetric_batch, smetric_bruteforce, smetric_conic,
                             smetric_solution)

ELLIPSE_OUT = ConicDomain(2, 1 + 2j, np.sqrt(6), DomainKind.SUM_GREATER)
HYPERBOLA_MID = ConicDomain(3, 1 + 2j, np.sqrt(5), DomainKind.DIFF_LESS)
CONTOUR_HYPERBOLA = ConicDomain(-0.5 - 0.5j, 1 - 1j, 0.8, DomainKind.DIFF_LESS)
CONTOUR_ELLIPSE = ConicDomain(1.5, -1 / 3 - 0.5j, 2.2, DomainKind.SUM_LESS)


def _random_instance(rng):
    """A conic domain and two points inside it with an unblocked segment."""
    while True:
        f1, f2 = rng.uniform(-2, 2, 2) + 1j * rng.uniform(-2, 2, 2)
        focal = abs(f1 - f2)
        kind = DomainKind(rng.choice([k.value for k in DomainKind]))
        r = focal * (rng.uniform(1.1, 2.5) if kind.is_sum else rng.uniform(0.2, 0.9))
        dom = ConicDomain(f1, f2, r, kind)
        z1, z2 = rng.uniform(-3, 3, 2) + 1j * rng.uniform(-3, 3, 2)
        if not (dom.contains(z1) and dom.contains(z2)) or abs(z1 - z2) < 0.05:
            continue
        if smetric_solution(z1, z2, dom).blocked:
            continue
        return dom, z1, z2


@pytest.mark.parametrize("c", np.round(np.arange(1, 10) / 10, 1))
def test_disk_symmetric_pair(c):
    assert smetric_conic(c, -c, ConicDomain.disk()) == pytest.approx(c, abs=1e-10)


def test_example_values():
    assert smetric_conic(1, -1, ELLIPSE_OUT) == pytest.approx(2 / 2.7982309587456333, rel=1e-9)
    assert smetric_conic(1, -1, HYPERBOLA_MID) == pytest.approx(2 / np.sqrt(13), rel=1e-9)
    sol = smetric_solution(1, -1, HYPERBOLA_MID)
    assert abs(sol.minimizer - 1.5j) <= 1e-9


@pytest.mark.parametrize("dom", [ELLIPSE_OUT, HYPERBOLA_MID])
def test_examples_against_bruteforce(dom):
    assert abs(smetric_conic(1, -1, dom) - smetric_bruteforce(1, -1, dom, 10 ** 5)) <= 1e-4


def test_random_instances_against_bruteforce():
    rng = np.random.default_rng(12)
    for _ in range(20):
        dom, z1, z2 = _random_instance(rng)
        s = smetric_conic(z1, z2, dom)
        brute = smetric_bruteforce(z1, z2, dom, 10 ** 5)
        assert abs(s - brute) <= 1e-4
        # the boundary maximum can only be approached from below
        assert brute <= s + 1e-12


def test_disk_route_agrees():
    rng = np.random.default_rng(13)
    dom = ConicDomain.disk()
    for _ in range(30):
        z1, z2 = rng.uniform(0.05, 0.95, 2) * np.exp(2j * np.pi * rng.uniform(size=2))
        want = pa_points_disk(PointPair(z1, z2)).metric_value
        assert smetric_conic(z1, z2, dom) == pytest.approx(want, abs=1e-10)


@pytest.mark.parametrize("n", [200, 1000, 5000])
def test_bruteforce_nested_grids_increase(n):
    dom = ConicDomain(0.3, -0.4 + 0.2j, 2.0)
    assert smetric_bruteforce(0.1, 0.2j, dom, n) <= smetric_bruteforce(0.1, 0.2j, dom, 2 * n)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.complex_numbers(min_magnitude=0.2, max_magnitude=5,
                                                        allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_similarity_invariance(seed, alpha, beta):
    dom, z1, z2 = _random_instance(np.random.default_rng(seed))
    A = Similarity(alpha, beta)
    s = smetric_conic(z1, z2, dom)
    assert smetric_conic(A(z1), A(z2), dom.transformed(A)) == pytest.approx(s, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_symmetry_and_range(seed):
    dom, z1, z2 = _random_instance(np.random.default_rng(seed))
    s = smetric_conic(z1, z2, dom)
    assert 0 < s <= 1
    assert smetric_conic(z2, z1, dom) == pytest.approx(s, abs=1e-10)


def test_blocked_and_trivial():
    dom = ConicDomain(0, 0, 2.0, DomainKind.SUM_GREATER)
    assert smetric_conic(1.5, -1.5, dom) == 1.0
    assert smetric_conic(0.2, 0.2, ConicDomain.disk()) == 0.0


def test_source_outside_domain():
    with pytest.raises(DomainError, match="source outside domain"):
        smetric_conic(2, 0, ConicDomain.disk())
    with pytest.raises(DomainError):
        smetric_bruteforce(2, 0, ConicDomain.disk(), 1000)


def test_domain_validation():
    with pytest.raises(DomainError):
        ConicDomain(0, 1, 0.5, DomainKind.SUM_LESS)
    with pytest.raises(DomainError):
        ConicDomain(0, 1, 1.5, DomainKind.DIFF_LESS)
    with pytest.raises(DomainError):
        ConicDomain(0, 1, np.inf)
    with pytest.raises(ValueError):
        smetric_bruteforce(0, 0.1, ConicDomain.disk(), 10)


def test_batch_matches_scalar():
    rng = np.random.default_rng(14)
    for dom, z0 in ((CONTOUR_ELLIPSE, 0), (CONTOUR_HYPERBOLA, 0), (ELLIPSE_OUT, 1)):
        zs = z0 + 0.3 * (rng.normal(size=40) + 1j * rng.normal(size=40))
        zs = zs[dom.contains(zs)]
        got = smetric_batch(z0, zs, dom)
        want = [smetric_conic(z0, z, dom) for z in zs]
        np.testing.assert_allclose(got, want, atol=1e-10)


# -- level sets ---------------------------------------------------------------

@pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
def test_disk_level_circle(t):
    ls = levelset(ConicDomain.disk(), 0, t, nrays=180)
    assert not ls.unresolved_rays
    np.testing.assert_allclose(np.abs(ls.points), 2 * t / (1 + t), atol=1e-5)


@pytest.mark.parametrize("dom", [CONTOUR_ELLIPSE, CONTOUR_HYPERBOLA])
def test_level_points_reevaluate(dom):
    levels = level_grid(0.05, 1.0, 0.05)
    assert len(levels) == 20
    for ls in levelsets(dom, 0, levels, nrays=180):
        if ls.level < 1:
            check = smetric_batch(0, ls.points, dom)
            assert np.max(np.abs(check - ls.level)) <= 1e-4
        assert ls.max_error() <= 1e-4


def test_level_sets_nest():
    inner, outer = levelsets(CONTOUR_ELLIPSE, 0, [0.3, 0.6], nrays=90)
    np.testing.assert_array_equal(inner.angles, outer.angles)
    assert np.all(np.abs(inner.points) < np.abs(outer.points))


def test_level_validation():
    with pytest.raises(ValueError):
        levelset(ConicDomain.disk(), 0, 1.5)
    with pytest.raises(DomainError):
        levelset(ConicDomain.disk(), 3, 0.5)
    with pytest.raises(ValueError):
        level_grid(0, 1, 0)


def test_level_grid_endpoints():
    g = level_grid(0.05, 1.0, 0.05)
    assert g[0] == 0.05 and g[-1] == 1.0


def test_edges_and_conjecture_report():
    ls = levelset(CONTOUR_ELLIPSE, 0, 0.95, nrays=720)
    rep = conjecture_edge_report(CONTOUR_ELLIPSE, 0, ls)
    assert rep.constant == pytest.approx(1.5 + abs(-1 / 3 - 0.5j))
    assert rep.residuals.shape == (rep.edges.size,)
    assert conjecture_edge_residual(CONTOUR_ELLIPSE, 0, ls) == rep.max_residual


def test_detect_edges_on_square():
    sq = np.array([0, 0.5, 1, 1 + 0.5j, 1 + 1j, 0.5 + 1j, 1j, 0.5j])
    assert list(detect_edges(sq)) == [0, 2, 4, 6]
    with pytest.raises(DegenerateInputError, match="insufficient samples"):
        detect_edges(np.array([0, 1]))
