"""Planar closed curves, signed distance, smoothed distance and Fermi coordinates.

Conventions: the signed distance is positive inside the enclosed set, N is the
inner unit normal and the curvature is taken with respect to -N, so circles
have curvature 1/R > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, FoldError

_SAMPLES = 1024


@dataclass(frozen=True)
class PlanarCurve:
    """Circle (``a == b == R``) or axis-aligned ellipse with semi-axes a >= b."""

    kind: str
    a: float
    b: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.kind not in ("circle", "ellipse"):
            raise ConfigurationError(f"unknown curve kind {self.kind!r}")
        if not (self.a >= self.b > 0):
            raise ConfigurationError("curve needs a >= b > 0")
        if self.kind == "circle" and self.a != self.b:
            raise ConfigurationError("a circle has a single radius")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @classmethod
    def circle(cls, R: float, center=(0.0, 0.0)) -> "PlanarCurve":
        return cls("circle", float(R), float(R), center)

    @classmethod
    def ellipse(cls, a: float, b: float, center=(0.0, 0.0)) -> "PlanarCurve":
        return cls("ellipse", float(a), float(b), center)

    @property
    def R(self) -> float:
        if self.kind != "circle":
            raise AttributeError("only circles have a radius")
        return self.a

    @property
    def reach(self) -> float:
        """Largest normal offset for which the tube map stays injective."""
        return self.b**2 / self.a

    @property
    def outer_radius(self) -> float:
        return self.a

    def default_delta(self) -> float:
        """A fifth of the reach, capped at 1/5, so the 5 delta tube fits inside the reach."""
        return min(self.reach / 5.0, 0.2)

    # parametrization by the angle t
    def point(self, t):
        t = np.asarray(t, float)
        return np.stack([self.center[0] + self.a * np.cos(t), self.center[1] + self.b * np.sin(t)], axis=-1)

    def tangent(self, t):
        t = np.asarray(t, float)
        v = np.stack([-self.a * np.sin(t), self.b * np.cos(t)], axis=-1)
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    def speed(self, t):
        t = np.asarray(t, float)
        return np.hypot(self.a * np.sin(t), self.b * np.cos(t))

    def normal(self, t):
        """Inner unit normal."""
        tau = self.tangent(t)
        return np.stack([-tau[..., 1], tau[..., 0]], axis=-1)

    def curvature_at(self, t):
        t = np.asarray(t, float)
        return self.a * self.b / (self.a**2 * np.sin(t) ** 2 + self.b**2 * np.cos(t) ** 2) ** 1.5

    def local(self, x):
        x = np.asarray(x, float)
        return x[..., 0] - self.center[0], x[..., 1] - self.center[1]

    def inside(self, x):
        u, v = self.local(x)
        return (u / self.a) ** 2 + (v / self.b) ** 2 < 1.0


def _closest_parameter(curve: PlanarCurve, x):
    """Parameter of the nearest boundary point: dense sampling plus safeguarded Newton."""
    u, v = curve.local(x)
    u, v = np.asarray(u, float), np.asarray(v, float)
    if curve.kind == "circle":
        return np.arctan2(v, u)
    a, b = curve.a, curve.b
    ts = np.linspace(0, 2 * np.pi, _SAMPLES, endpoint=False)
    d2 = (u[..., None] - a * np.cos(ts)) ** 2 + (v[..., None] - b * np.sin(ts)) ** 2
    t = ts[np.argmin(d2, axis=-1)]
    step_cap = 2 * np.pi / _SAMPLES
    for _ in range(50):
        st, ct = np.sin(t), np.cos(t)
        F = (a * a - b * b) * st * ct - u * a * st + v * b * ct
        dF = (a * a - b * b) * (ct * ct - st * st) - u * a * ct - v * b * st
        safe = np.where(np.abs(dF) > 1e-300, dF, 1.0)
        dt = np.clip(-F / safe, -step_cap, step_cap)
        t = t + dt
        if np.max(np.abs(dt)) < 1e-15:
            break
    return t


def signed_distance(curve: PlanarCurve, x):
    """Distance to the curve, positive inside the enclosed set."""
    x = np.asarray(x, float)
    if curve.kind == "circle":
        u, v = curve.local(x)
        return curve.R - np.hypot(u, v)
    t = _closest_parameter(curve, x)
    d = np.linalg.norm(x - curve.point(t), axis=-1)
    return np.where(curve.inside(x), d, -d)


def project_to_boundary(curve: PlanarCurve, x, return_parameter: bool = False):
    """Nearest boundary point; requires |dist| below the reach."""
    x = np.asarray(x, float)
    d = signed_distance(curve, x)
    if np.any(np.abs(d) >= curve.reach):
        raise FoldError("projection is not unique beyond the reach of the curve")
    t = _closest_parameter(curve, x)
    p = curve.point(t)
    return (p, t) if return_parameter else p


def curvature(curve: PlanarCurve, point) -> np.ndarray:
    """Curvature at boundary points (w.r.t. the outer normal, so circles give 1/R)."""
    point = np.asarray(point, float)
    if curve.kind == "circle":
        return np.full(point.shape[:-1], 1.0 / curve.R)
    return curve.curvature_at(_closest_parameter(curve, point))


def perimeter_and_willmore(curve: PlanarCurve, n: int = 4096) -> tuple[float, float]:
    """Length and integral of the squared curvature."""
    if curve.kind == "circle":
        return 2 * math.pi * curve.R, 2 * math.pi / curve.R
    # periodic analytic integrands: the trapezoid rule converges geometrically
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    sp = curve.speed(t)
    k = curve.curvature_at(t)
    dt = 2 * np.pi / n
    return float(np.sum(sp) * dt), float(np.sum(k * k * sp) * dt)


def fermi_map(curve: PlanarCurve, y, z):
    """Phi(y, z) = Y(y) + z N(y) and det of its Jacobian in (arclength, z).

    ``y`` is the curve parameter: arclength for circles, the angle t for
    ellipses.  The determinant is 1 - z k(y).
    """
    y = np.asarray(y, float)
    z = np.asarray(z, float)
    if np.any(np.abs(z) >= curve.reach):
        raise FoldError("normal offset reaches the reach; the tube map folds")
    t = y / curve.R if curve.kind == "circle" else y
    pt = curve.point(t) + z[..., None] * curve.normal(t)
    return pt, 1.0 - z * curve.curvature_at(t)


def tangential_distance_sq(curve: PlanarCurve, t0: float, y, z0: float):
    """|Y(y) - z0 e|^2 - ((Y(y) - z0 e) . N(y))^2 in the frame at Y(t0).

    The curve is written as a graph over its tangent line at Y(t0), with
    graph variable y; e is the inner normal at Y(t0).
    """
    y = np.atleast_1d(np.asarray(y, float))
    p0, T0, N0 = curve.point(t0), curve.tangent(t0), curve.normal(t0)
    # invert y = (Y(t) - p0) . T0 for t near t0 by Newton
    t = t0 + y / curve.speed(t0)
    for _ in range(50):
        r = (curve.point(t) - p0) @ T0 - y
        dr = (np.stack([-curve.a * np.sin(t), curve.b * np.cos(t)], axis=-1)) @ T0
        t = t - r / dr
    diff = curve.point(t) - (p0 + z0 * N0)
    normal_part = np.sum(diff * curve.normal(t), axis=-1)
    return np.sum(diff * diff, axis=-1) - normal_part**2


@dataclass(frozen=True)
class SmoothedDistance:
    """beta: the signed distance on the 4 delta tube, sgn(dist) beyond 5 delta."""

    curve: PlanarCurve
    delta: float

    def __post_init__(self):
        if not 0 < self.delta <= 0.2:
            raise ConfigurationError("delta must lie in (0, 1/5]")
        if 5 * self.delta > self.curve.reach + 1e-12:
            raise ConfigurationError("the 5 delta tube must stay inside the reach")

    @classmethod
    def default(cls, curve: PlanarCurve) -> "SmoothedDistance":
        return cls(curve, curve.default_delta())

    def ramp(self, r, nu: int = 0):
        """Profile of |beta| as a function of |dist| (C^2 quintic on the band)."""
        d = self.delta
        r = np.asarray(r, float)
        tau = np.clip((r - 4 * d) / d, 0.0, 1.0)
        D = 1.0 - 4 * d
        S = (10 * tau**3 - 15 * tau**4 + 6 * tau**5, 30 * tau**2 - 60 * tau**3 + 30 * tau**4,
             60 * tau - 180 * tau**2 + 120 * tau**3)
        H = (tau - 6 * tau**3 + 8 * tau**4 - 3 * tau**5, 1 - 18 * tau**2 + 32 * tau**3 - 15 * tau**4,
             -36 * tau + 96 * tau**2 - 60 * tau**3)
        band = 4 * d + D * S[0] + d * H[0]
        if nu == 0:
            return np.where(r <= 4 * d, r, np.where(r >= 5 * d, 1.0, band))
        if nu == 1:
            return np.where(r <= 4 * d, 1.0, np.where(r >= 5 * d, 0.0, (D * S[1] + d * H[1]) / d))
        if nu == 2:
            return np.where((r <= 4 * d) | (r >= 5 * d), 0.0, (D * S[2] + d * H[2]) / d**2)
        raise ConfigurationError("ramp derivative order must be <= 2")

    def of_distance(self, dist, nu: int = 0):
        """beta as a function of the signed distance (odd extension of the ramp)."""
        dist = np.asarray(dist, float)
        sg = np.where(dist >= 0, 1.0, -1.0)
        if nu == 1:
            return self.ramp(np.abs(dist), 1)
        return sg * self.ramp(np.abs(dist), nu)

    def __call__(self, x):
        return self.of_distance(signed_distance(self.curve, x))


def smoothed_distance(sd: SmoothedDistance, x, derivatives: bool = False, fd_step: float = 1e-5):
    """beta(x); with ``derivatives`` also its gradient and Hessian.

    Circles use closed forms; ellipses use central differences of beta.
    """
    x = np.asarray(x, float)
    val = sd(x)
    if not derivatives:
        return val
    if sd.curve.kind == "circle":
        u, v = sd.curve.local(x)
        rho = np.hypot(u, v)
        n = np.stack([u / rho, v / rho], axis=-1)
        dist = sd.curve.R - rho
        b1 = sd.of_distance(dist, 1)
        b2 = sd.of_distance(dist, 2)
        grad = -b1[..., None] * n
        eye = np.eye(2)
        outer = n[..., :, None] * n[..., None, :]
        hess = b2[..., None, None] * outer - (b1 / rho)[..., None, None] * (eye - outer)
        return val, grad, hess
    h = fd_step
    e = np.eye(2) * h
    grad = np.stack([(sd(x + e[i]) - sd(x - e[i])) / (2 * h) for i in range(2)], axis=-1)
    hess = np.empty(x.shape[:-1] + (2, 2))
    for i in range(2):
        for j in range(2):
            hess[..., i, j] = (sd(x + e[i] + e[j]) - sd(x + e[i] - e[j]) - sd(x - e[i] + e[j])
                               + sd(x - e[i] - e[j])) / (4 * h * h)
    return val, grad, hess
