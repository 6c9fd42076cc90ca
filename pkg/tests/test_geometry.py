import math

import numpy as np
import pytest

from fracwill.errors import ConfigurationError, FoldError
from fracwill.geometry import (PlanarCurve, SmoothedDistance, curvature, fermi_map, perimeter_and_willmore,
                               project_to_boundary, signed_distance, smoothed_distance, tangential_distance_sq)

ELLIPSE = PlanarCurve.ellipse(2.0, 1.0)


def dense_distance(curve, x, n=400_000):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return np.min(np.linalg.norm(curve.point(t) - np.asarray(x), axis=-1))


def test_circle_distances():
    c = PlanarCurve.circle(1.0, (0.3, -0.2))
    assert signed_distance(c, (0.3, -0.2)) == pytest.approx(1.0)
    assert signed_distance(c, (2.3, -0.2)) == pytest.approx(-1.0)


@pytest.mark.parametrize("x", [(3.0, 0.0), (0.5, 0.4), (-1.2, -0.9), (0.1, 1.6), (1.9, 0.05)])
def test_ellipse_distance_matches_sampling(x):
    d = signed_distance(ELLIPSE, x)
    assert abs(d) == pytest.approx(dense_distance(ELLIPSE, x), abs=1e-8)
    assert (d > 0) == bool(ELLIPSE.inside(np.asarray(x)))


def test_ellipse_exterior_example():
    assert signed_distance(ELLIPSE, (3.0, 0.0)) == pytest.approx(-1.0, abs=1e-12)


def test_lipschitz_and_unit_gradient(rng):
    x = rng.uniform(-3, 3, (300, 2))
    y = x + rng.normal(0, 0.05, x.shape)
    d = np.abs(signed_distance(ELLIPSE, x) - signed_distance(ELLIPSE, y))
    assert np.all(d <= np.linalg.norm(x - y, axis=1) + 1e-12)


def test_gradient_is_inner_normal(rng):
    h = 1e-6
    t = rng.uniform(0, 2 * np.pi, 100)
    z = rng.uniform(-0.9, 0.9, 100) * ELLIPSE.reach
    x = ELLIPSE.point(t) + z[:, None] * ELLIPSE.normal(t)
    e = np.eye(2) * h
    grad = np.stack([(signed_distance(ELLIPSE, x + e[i]) - signed_distance(ELLIPSE, x - e[i])) / (2 * h)
                     for i in range(2)], axis=-1)
    _, tp = project_to_boundary(ELLIPSE, x, return_parameter=True)
    assert np.max(np.abs(grad - ELLIPSE.normal(tp))) < 1e-5


def test_projection():
    c = PlanarCurve.circle(2.0)
    assert np.allclose(project_to_boundary(c, (0.5, 0.0)), (2.0, 0.0))
    y = ELLIPSE.point(np.array([0.3, 1.2, 4.0]))
    assert np.allclose(project_to_boundary(ELLIPSE, y), y, atol=1e-12)
    x = (1.7, 0.2)
    p = project_to_boundary(ELLIPSE, x)
    assert np.linalg.norm(p - np.asarray(x)) == pytest.approx(dense_distance(ELLIPSE, x), abs=1e-8)
    with pytest.raises(FoldError):
        project_to_boundary(ELLIPSE, (0.0, 0.0))


def test_curvature():
    assert np.allclose(curvature(PlanarCurve.circle(2.0), ((2.0, 0.0), (0.0, -2.0))), 0.5)
    assert curvature(ELLIPSE, (2.0, 0.0)) == pytest.approx(2.0, rel=1e-12)
    # tangent-angle oracle
    t, h = 0.7, 1e-5
    ang = [math.atan2(*ELLIPSE.tangent(u)[::-1]) for u in (t - h, t + h)]
    k = (ang[1] - ang[0]) / (2 * h * ELLIPSE.speed(t))
    assert curvature(ELLIPSE, ELLIPSE.point(t)) == pytest.approx(k, rel=1e-6)


def test_circle_graph_curvature():
    # graph g(y) = R - sqrt(R^2 - y^2) has g'' / (1 + g'^2)^{3/2} = 1 / R
    R, y, h = 3.0, 0.4, 1e-4
    g = lambda v: R - math.sqrt(R * R - v * v)
    d1 = (g(y + h) - g(y - h)) / (2 * h)
    d2 = (g(y + h) - 2 * g(y) + g(y - h)) / h**2
    assert d2 / (1 + d1 * d1) ** 1.5 == pytest.approx(float(curvature(PlanarCurve.circle(R), (R, 0.0))), abs=1e-6)


def test_perimeter_and_willmore():
    assert perimeter_and_willmore(PlanarCurve.circle(1.0)) == pytest.approx((2 * np.pi, 2 * np.pi))
    assert perimeter_and_willmore(PlanarCurve.circle(2.0)) == pytest.approx((4 * np.pi, np.pi))
    coarse = perimeter_and_willmore(ELLIPSE, 256)
    fine = perimeter_and_willmore(ELLIPSE, 4096)
    assert coarse == pytest.approx(fine, rel=1e-12)
    assert fine[0] == pytest.approx(9.688448220547677, rel=1e-12)


def test_fermi_map_circle():
    c = PlanarCurve.circle(1.0)
    p, det = fermi_map(c, 0.0, 0.2)
    assert signed_distance(c, p) == pytest.approx(0.2)
    assert det == pytest.approx(0.8)
    with pytest.raises(FoldError):
        fermi_map(c, 0.0, 1.0)
    with pytest.raises(FoldError):
        fermi_map(ELLIPSE, 0.0, 0.5)


def test_fermi_determinant_product_term():
    c = PlanarCurve.circle(1.5)
    y = np.linspace(-0.3, 0.3, 7)
    _, det = fermi_map(c, y, np.full_like(y, 0.1))
    assert np.max(np.abs(det - (1 - 0.1 / 1.5))) < 1e-14


@pytest.mark.parametrize("z0", [0.0, 0.05])
def test_tangential_distance_expansion(z0):
    y = np.geomspace(1e-2, 1e-1, 6)
    k = float(ELLIPSE.curvature_at(0.0))
    res = np.abs(tangential_distance_sq(ELLIPSE, 0.0, y, z0) - y**2 * (1 - k * z0) ** 2)
    slope = np.polyfit(np.log(y), np.log(res), 1)[0]
    assert slope > 2.8


def test_inner_ball_containment(rng):
    c = PlanarCurve.circle(1.0)
    sd = SmoothedDistance.default(c)
    Lam = 20.0
    x0 = np.array([1.0 - 0.3 * sd.delta / (10 * Lam), 0.0])
    r = sd.delta / (10 * Lam)
    pts = x0 + rng.uniform(-r, r, (4000, 2))
    pts = pts[np.linalg.norm(pts - x0, axis=1) < r]
    y = c.R * np.arctan2(pts[:, 1], pts[:, 0])
    z = signed_distance(c, pts)
    z0 = signed_distance(c, x0)
    assert np.all(np.hypot(y, z - z0) < sd.delta / Lam)


def test_smoothed_distance_branches():
    c = PlanarCurve.circle(1.0)
    sd = SmoothedDistance.default(c)
    d = sd.delta
    assert sd((1 - 2 * d, 0.0)) == pytest.approx(2 * d, abs=1e-15)
    assert sd((1 + 2 * d, 0.0)) == pytest.approx(-2 * d, abs=1e-15)
    r = np.linspace(4 * d, 5 * d, 101)
    band = sd.ramp(r)
    assert np.all((band >= 4 * d - 1e-15) & (band <= 1 + 1e-15))
    assert sd.ramp(6 * d) == 1.0


def test_smoothed_distance_outer_branch():
    c = PlanarCurve.circle(5.0)
    sd = SmoothedDistance(c, 0.2)
    assert sd((5.0 - 2.0, 0.0)) == 1.0
    assert sd((8.0, 0.0)) == -1.0


@pytest.mark.parametrize("edge", [4, 5])
def test_ramp_is_c2(edge):
    sd = SmoothedDistance(PlanarCurve.circle(1.0), 0.2)
    r0, h = edge * sd.delta, 2e-5
    f = lambda k: float(sd.ramp(r0 + k * h))
    right = (2 * f(0) - 5 * f(1) + 4 * f(2) - f(3)) / h**2
    left = (2 * f(0) - 5 * f(-1) + 4 * f(-2) - f(-3)) / h**2
    assert abs(right - left) < 1e-4
    assert float(sd.ramp(r0 - h, 1)) == pytest.approx(float(sd.ramp(r0 + h, 1)), abs=1e-3)


def test_smoothed_distance_derivatives_circle_vs_fd():
    c = PlanarCurve.circle(1.0)
    sd = SmoothedDistance.default(c)
    x = np.array([[0.4, 0.55], [0.1, 0.9], [-0.95, 0.2]])
    val, grad, hess = smoothed_distance(sd, x, derivatives=True)
    e = SmoothedDistance(PlanarCurve.ellipse(1.0, 1.0), sd.delta)
    _, g2, h2 = smoothed_distance(e, x, derivatives=True)
    assert np.allclose(grad, g2, atol=1e-8)
    assert np.allclose(hess, h2, atol=1e-4)


def test_invalid_configurations():
    with pytest.raises(ConfigurationError):
        PlanarCurve.ellipse(1.0, 2.0)
    with pytest.raises(ConfigurationError):
        SmoothedDistance(PlanarCurve.circle(1.0), 0.3)
    with pytest.raises(ConfigurationError):
        SmoothedDistance(ELLIPSE, 0.2)
    assert PlanarCurve.circle(1.0).default_delta() == 0.2
